"""Sudden-quench dynamics by exact spectral propagation."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvariantError
from .model import LmgParams, GroundState, TIEBREAKS, build_hamiltonian, default_tiebreak, ground_state
from .spin import Spectrum, hermitian_eigendecomposition

__all__ = [
    "QuenchProtocol",
    "TimeGrid",
    "Trajectory",
    "evolve",
    "propagate",
    "return_probability",
    "rate_function",
    "expectation_series",
]

NORM_TOL = 1e-10
ENERGY_RTOL = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    t_max: float = 200.0
    n_samples: int = 4001

    def __post_init__(self):
        if not (np.isfinite(self.t_max) and self.t_max > 0):
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise ValueError(f"n_samples must be an integer >= 2, got {self.n_samples}")
        object.__setattr__(self, "t_max", float(self.t_max))
        object.__setattr__(self, "n_samples", int(self.n_samples))

    @property
    def dt(self) -> float:
        return self.t_max / (self.n_samples - 1)

    @property
    def samples(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_samples)

    def __len__(self):
        return self.n_samples


@dataclass(frozen=True)
class QuenchProtocol:
    """Ground state of ``pre`` evolved under ``post``; only the field may differ."""

    pre: LmgParams
    post: LmgParams
    tiebreak: str = None

    def __post_init__(self):
        if (self.pre.j, self.pre.gamma, self.pre.J) != (self.post.j, self.post.gamma, self.post.J):
            raise ValueError("pre- and post-quench parameters may differ only in h")
        if self.tiebreak is None:
            object.__setattr__(self, "tiebreak", default_tiebreak(self.pre.gamma))
        if self.tiebreak not in TIEBREAKS:
            raise ValueError(f"tiebreak must be one of {TIEBREAKS}, got {self.tiebreak!r}")

    @classmethod
    def field_quench(cls, j, gamma, h0, h, J=1.0, tiebreak=None):
        pre = LmgParams(j=j, gamma=gamma, h=h0, J=J)
        return cls(pre, pre.with_field(h), tiebreak)

    def initial_state(self) -> GroundState:
        return ground_state(self.pre, self.tiebreak)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States sampled on ``grid``; ``states[k]`` is psi(t_k)."""

    protocol: QuenchProtocol
    grid: TimeGrid
    initial: GroundState
    hamiltonian: np.ndarray
    spectrum: Spectrum
    coefficients: np.ndarray
    states: np.ndarray
    observables: dict = field(default_factory=dict)

    @property
    def psi0(self) -> np.ndarray:
        return self.initial.vector

    @cached_property
    def energy_weights(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2


def propagate(spectrum: Spectrum, psi, t):
    """exp(-i H t) psi for a scalar or 1-D array of times."""
    v, w = spectrum.eigenvectors, spectrum.eigenvalues
    c = v.conj().T @ psi
    t = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(t, w))
    return (phases * c) @ v.T


def evolve(q: QuenchProtocol, grid: TimeGrid, initial: GroundState = None, check=True) -> Trajectory:
    """Evolve the pre-quench ground state under the post-quench Hamiltonian.

    ``initial`` may be passed to reuse a ground state across many quenches
    that share the same pre-quench parameters. With ``check`` set, norm and
    energy conservation are verified and :class:`InvariantError` is raised
    on violation.
    """
    if initial is None:
        initial = q.initial_state()
    psi0 = initial.vector
    h = build_hamiltonian(q.post)
    sp = hermitian_eigendecomposition(h)
    v, w = sp.eigenvectors, sp.eigenvalues
    c = v.conj().T @ psi0
    t = grid.samples
    states = (np.exp(-1j * np.outer(t, w)) * c) @ v.T

    traj = Trajectory(q, grid, initial, h, sp, c, states)
    if check:
        _check_trajectory(traj)
    return traj


def _check_trajectory(traj: Trajectory):
    norms = np.linalg.norm(traj.states, axis=1)
    worst = float(np.abs(norms - 1).max())
    if worst > NORM_TOL:
        k = int(np.abs(norms - 1).argmax())
        raise InvariantError(f"unitarity: |psi(t)| deviates from 1 by {worst:.3e} at t={traj.grid.samples[k]:.6g}")
    energy = expectation_series(traj, traj.hamiltonian)
    traj.observables["energy"] = energy
    spread = float(np.std(energy))
    scale = max(abs(float(np.mean(energy))), 1e-12 * max(1.0, float(np.abs(traj.spectrum.eigenvalues).max())))
    if spread > ENERGY_RTOL * scale:
        raise InvariantError(f"energy conservation: stdev/|mean| = {spread / scale:.3e} exceeds {ENERGY_RTOL:.0e}")


def return_probability(traj: Trajectory) -> np.ndarray:
    """|<psi0|psi(t)>|^2, computed from the spectral weights of psi0."""
    p = traj.energy_weights
    amp = np.exp(-1j * np.outer(traj.grid.samples, traj.spectrum.eigenvalues)) @ p
    probs = np.abs(amp / p.sum()) ** 2
    return np.clip(probs, 0.0, 1.0)


RATE_FLOOR = 1e-300


def rate_function(traj: Trajectory, loschmidt=None) -> np.ndarray:
    """-(1/N) ln L(t) with N = 2j spins; +inf where L(t) < 1e-300."""
    probs = return_probability(traj) if loschmidt is None else np.asarray(loschmidt, dtype=float)
    return loschmidt_rate(probs, traj.protocol.post.j.n_spins)


def loschmidt_rate(probs, n_spins):
    probs = np.asarray(probs, dtype=float)
    out = np.full(probs.shape, np.inf)
    ok = probs >= RATE_FLOOR
    out[ok] = -np.log(probs[ok]) / n_spins
    # -log(1.0) is -0.0; report a clean zero
    return out + 0.0


def expectation_series(traj: Trajectory, a) -> np.ndarray:
    a = np.asarray(a)
    d = traj.states.shape[1]
    if a.shape != (d, d):
        raise ValueError(f"operator shape {a.shape} does not match state dimension {d}")
    vals = np.einsum("ti,ti->t", traj.states.conj(), traj.states @ a.T)
    # residue tolerance scales with the operator's entry size
    tol = 1e-10 * max(1.0, float(np.abs(a).max()))
    resid = float(np.abs(vals.imag).max())
    if resid > tol:
        raise InvariantError(f"expectation value has imaginary residue {resid:.3e} > {tol:.1e}")
    return vals.real.copy()
