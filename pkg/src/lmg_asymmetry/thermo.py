"""Geometric lower bound on entropy production via the Bures angle.

The bound is ``s(2 * angle / pi)`` where ``angle`` is the Bures angle between
the evolved state and an equilibrium reference state and

    s(x) = min_{x < r < 1} D((r - x, 1 - r + x) || (r, 1 - r))

with D the binary relative entropy in nats.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy.special import rel_entr

from .asymmetry import check_density_matrix, is_converged, time_average
from .dynamics import Trajectory
from .model import ground_state
from .spin import hermitian_function

__all__ = [
    "REFERENCE_KINDS",
    "ReferenceState",
    "EntropyBoundRecord",
    "reference_state",
    "gibbs_state",
    "fidelity",
    "bures_angle",
    "binary_relative_entropy",
    "s_function",
    "entropy_bound",
    "entropy_bound_series",
]

REFERENCE_KINDS = ("initial", "ground_of_post", "gibbs_of_post")
S_CLAMP = 1.0 - 1e-9
GSS_EDGE = 1e-12
GSS_TOL = 1e-12
_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True, eq=False)
class ReferenceState:
    """Equilibrium state compared against the evolved state.

    ``vector`` is set for pure references and enables the overlap fast path;
    ``matrix`` is always the density matrix.
    """

    kind: str
    beta: float
    matrix: np.ndarray
    vector: np.ndarray = None

    @property
    def is_pure(self) -> bool:
        return self.vector is not None


def gibbs_state(spectrum, beta):
    """exp(-beta H)/Z from a spectrum, shifted by the ground energy."""
    w = spectrum.eigenvalues
    if math.isinf(beta):
        weights = (w - w[0] <= 1e-8 * max(1.0, abs(w).max())).astype(float)
    else:
        weights = np.exp(-beta * (w - w[0]))
    weights /= weights.sum()
    v = spectrum.eigenvectors
    return (v * weights) @ v.conj().T


def reference_state(traj: Trajectory, kind="initial", beta=math.inf) -> ReferenceState:
    """Build the reference state for a trajectory.

    ``initial``: the pre-quench ground state (equilibrium state before the
    quench). ``ground_of_post``: the post-quench ground state, degeneracy
    resolved with the protocol's tie-break. ``gibbs_of_post``: the Gibbs
    state of the post-quench Hamiltonian at inverse temperature ``beta``;
    ``beta = inf`` gives the uniform mixture over the ground space.
    """
    if kind not in REFERENCE_KINDS:
        raise ValueError(f"reference kind must be one of {REFERENCE_KINDS}, got {kind!r}")
    beta = float(beta)
    if kind == "gibbs_of_post":
        if not beta > 0:
            raise ValueError(f"beta must be positive, got {beta}")
        return ReferenceState(kind, beta, gibbs_state(traj.spectrum, beta))
    if kind == "initial":
        vec = traj.psi0
    else:
        vec = ground_state(
            traj.protocol.post, traj.protocol.tiebreak, hamiltonian=traj.hamiltonian, spectrum=traj.spectrum
        ).vector
    return ReferenceState(kind, math.inf, np.outer(vec, vec.conj()), vec)


def _sqrtm_psd(a):
    return hermitian_function(a, lambda w: np.sqrt(_drop_noise(w)))


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Either argument may be a state vector, in which case the pure-state
    shortcut is taken.
    """
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.ndim == 1 and sigma.ndim == 1:
        f = abs(np.vdot(rho, sigma)) ** 2
    elif rho.ndim == 1:
        f = np.vdot(rho, check_density_matrix(sigma, name="sigma") @ rho).real
    elif sigma.ndim == 1:
        f = np.vdot(sigma, check_density_matrix(rho) @ sigma).real
    else:
        check_density_matrix(rho)
        check_density_matrix(sigma, name="sigma")
        if rho.shape != sigma.shape:
            raise ValueError(f"shape mismatch {rho.shape} vs {sigma.shape}")
        root = _sqrtm_psd(rho)
        m = root @ sigma @ root
        w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        f = np.sqrt(_drop_noise(w)).sum() ** 2
    return float(np.clip(f, 0.0, 1.0))


def _drop_noise(w):
    # eigenvalues below the solver's resolution are zeros; sqrt would turn eps into sqrt(eps)
    floor = 4 * w.size * np.finfo(float).eps * max(float(np.abs(w).max()), 1.0)
    return np.where(w > floor, w, 0.0)


def _angle_from_fidelity(f):
    return np.arccos(np.sqrt(np.clip(f, 0.0, 1.0)))


def bures_angle(rho, sigma) -> float:
    return float(_angle_from_fidelity(fidelity(rho, sigma)))


def binary_relative_entropy(p, q):
    """D((p, 1-p) || (q, 1-q)) in nats; +inf when the support of q misses p."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any((p < 0) | (p > 1)) or np.any((q < 0) | (q > 1)):
        raise ValueError("probabilities must lie in [0, 1]")
    out = rel_entr(p, q) + rel_entr(1 - p, 1 - q)
    return float(out) if out.ndim == 0 else out


def s_objective(r, x):
    return rel_entr(r - x, r) + rel_entr(1 - r + x, 1 - r)


def s_function(x, return_clamped=False):
    """Minimised binary relative entropy s(x) for scalar or array ``x``.

    Golden-section search on r in (x, 1), run on all entries at once. The
    objective is convex in r (relative entropy is jointly convex and both
    arguments are affine in r), so the search converges to the global
    minimum. Inputs above 1 - 1e-9 are clamped there; pass
    ``return_clamped=True`` to also get a mask of clamped entries.
    """
    x_in = np.asarray(x, dtype=float)
    if np.any(x_in < 0) or np.any(np.isnan(x_in)):
        raise ValueError("s(x) requires x >= 0")
    clamped = x_in > S_CLAMP
    xv = np.minimum(np.atleast_1d(x_in), S_CLAMP)

    a = xv + GSS_EDGE
    b = np.full_like(xv, 1.0 - GSS_EDGE)
    width = float((b - a).max()) if xv.size else 0.0
    n_iter = max(1, math.ceil(math.log(GSS_TOL / max(width, GSS_TOL)) / math.log(_INV_PHI)) + 1)

    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = s_objective(c, xv), s_objective(d, xv)
    for _ in range(n_iter):
        # minimum lies in [a, d] where left, in [c, b] otherwise
        left = fc < fd
        a, b = np.where(left, a, c), np.where(left, d, b)
        probe = np.where(left, b - _INV_PHI * (b - a), a + _INV_PHI * (b - a))
        fp = s_objective(probe, xv)
        c, d = np.where(left, probe, d), np.where(left, c, probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
    r = 0.5 * (a + b)
    vals = np.minimum(np.minimum(fc, fd), s_objective(r, xv))
    vals = np.where(xv == 0.0, 0.0, np.maximum(vals, 0.0))

    if clamped.any() and not return_clamped:
        warnings.warn("s(x) input at or above 1 - 1e-9 was clamped", RuntimeWarning, stacklevel=2)
    out = float(vals[0]) if x_in.ndim == 0 else vals.reshape(x_in.shape)
    if return_clamped:
        return out, (bool(clamped) if x_in.ndim == 0 else clamped)
    return out


def entropy_bound(angle):
    """s(2 angle / pi) for Bures angles in [0, pi/2]."""
    x = 2.0 * np.asarray(angle, dtype=float) / np.pi
    return s_function(np.clip(x, 0.0, 1.0), return_clamped=True)[0]


@dataclass(frozen=True, eq=False)
class EntropyBoundRecord:
    bures_series: np.ndarray
    bound_series: np.ndarray
    time_average: float
    converged: bool
    n_clamped: int
    reference_kind: str
    beta: float


def _fidelity_series(states, ref: ReferenceState):
    if ref.is_pure:
        return np.abs(states @ ref.vector.conj()) ** 2
    return np.einsum("ti,ti->t", states.conj(), states @ ref.matrix.T).real


def entropy_bound_series(traj: Trajectory, ref: ReferenceState = None) -> EntropyBoundRecord:
    if ref is None:
        ref = reference_state(traj)
    if ref.matrix.shape[0] != traj.states.shape[1]:
        raise ValueError("reference state dimension does not match trajectory")
    angles = _angle_from_fidelity(_fidelity_series(traj.states, ref))
    x = np.clip(2.0 * angles / np.pi, 0.0, 1.0)
    bound, clamped = s_function(x, return_clamped=True)
    return EntropyBoundRecord(
        bures_series=angles,
        bound_series=bound,
        time_average=time_average(bound, traj.grid),
        converged=is_converged(bound, traj.grid),
        n_clamped=int(np.count_nonzero(clamped)),
        reference_kind=ref.kind,
        beta=ref.beta,
    )
