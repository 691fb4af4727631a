"""l1-norm asymmetry F_L(rho) = ||[rho, L]||_1 and time averages."""

from dataclasses import dataclass

import numpy as np

from .dynamics import QuenchProtocol, TimeGrid, Trajectory
from .spin import check_hermitian, collective_operators, commutator, hermitian_function, trace_norm

__all__ = [
    "AXES",
    "AsymmetryRecord",
    "NotDensityMatrixError",
    "check_density_matrix",
    "generator",
    "asymmetry_general",
    "asymmetry_pure",
    "pure_state_asymmetry",
    "asymmetry_series",
    "time_average",
    "is_converged",
    "symmetric_unitary_invariance_check",
]

AXES = ("x", "y", "z")
DENSITY_TOL = 1e-10
VARIANCE_CLAMP = 1e-14
VARIANCE_REJECT = 1e-10
CONVERGENCE_RTOL = 0.02


class NotDensityMatrixError(ValueError):
    pass


def check_density_matrix(rho, tol=DENSITY_TOL, name="rho"):
    rho = np.asarray(rho)
    try:
        check_hermitian(rho, name=name)
    except ValueError as exc:
        raise NotDensityMatrixError(str(exc)) from None
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise NotDensityMatrixError(f"{name} has trace {tr:.12g}, deviation {abs(tr - 1):.3e} > {tol:.0e}")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lo < -tol:
        raise NotDensityMatrixError(f"{name} is not positive semidefinite: most negative eigenvalue {lo:.3e}")
    return rho


def generator(axis, j):
    """Collective spin component ``J_axis`` for total spin ``j``."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    return collective_operators(j)[AXES.index(axis)]


def asymmetry_general(rho, L) -> float:
    rho = check_density_matrix(rho)
    L = np.asarray(L)
    if L.shape != rho.shape:
        raise ValueError(f"generator shape {L.shape} does not match state shape {rho.shape}")
    return trace_norm(commutator(rho, L))


def pure_state_asymmetry(states, L):
    """2 sqrt(<L^2> - <L>^2) for one state (1-D) or a stack of states (rows)."""
    states = np.asarray(states)
    single = states.ndim == 1
    psi = np.atleast_2d(states)
    lpsi = psi @ np.asarray(L).T
    mean = np.einsum("ti,ti->t", psi.conj(), lpsi).real
    second = np.einsum("ti,ti->t", lpsi.conj(), lpsi).real
    var = second - mean**2
    floor = -VARIANCE_REJECT * np.maximum(1.0, second)
    if np.any(var < floor):
        k = int(np.argmin(var - floor))
        raise ArithmeticError(f"negative variance {var[k]:.3e} in pure-state asymmetry")
    var = np.where(var < VARIANCE_CLAMP, 0.0, var)
    out = 2.0 * np.sqrt(var)
    return float(out[0]) if single else out


def asymmetry_pure(psi, L) -> float:
    """Closed form of ||[|psi><psi|, L]||_1 for a normalised pure state.

    The commutator has rank two with eigenvalues +-i sqrt(Var L), so the trace
    norm is twice the standard deviation of L in ``psi``.
    """
    psi = np.asarray(psi)
    if psi.ndim != 1:
        raise ValueError("psi must be a 1-D state vector")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1) > DENSITY_TOL:
        raise NotDensityMatrixError(f"state vector has norm {nrm:.12g}")
    return pure_state_asymmetry(psi, L)


def time_average(series, grid: TimeGrid) -> float:
    """Trapezoidal (1/T) integral of ``series`` over the grid."""
    series = np.asarray(series, dtype=float)
    if series.shape != (grid.n_samples,):
        raise ValueError(f"series has {series.size} samples, grid has {grid.n_samples}")
    return float(np.trapezoid(series, dx=grid.dt) / grid.t_max)


def is_converged(series, grid: TimeGrid, rtol=CONVERGENCE_RTOL) -> bool:
    """Compare the full-window average against the first-half average."""
    series = np.asarray(series, dtype=float)
    full = time_average(series, grid)
    k = (grid.n_samples - 1) // 2
    if k < 1:
        return True
    half = float(np.trapezoid(series[: k + 1], dx=grid.dt) / (k * grid.dt))
    diff = abs(full - half)
    if diff <= 1e-12 * max(1.0, float(np.abs(series).max())):
        return True
    return diff <= rtol * abs(full)


@dataclass(frozen=True, eq=False)
class AsymmetryRecord:
    series: np.ndarray
    time_average: float
    converged: bool
    axis: str
    protocol: QuenchProtocol


def asymmetry_series(traj: Trajectory, axis) -> AsymmetryRecord:
    L = generator(axis, traj.protocol.post.j)
    series = pure_state_asymmetry(traj.states, L)
    return AsymmetryRecord(
        series=series,
        time_average=time_average(series, traj.grid),
        converged=is_converged(series, traj.grid),
        axis=axis,
        protocol=traj.protocol,
    )


def symmetric_unitary_invariance_check(rho, L, theta, rtol=1e-10) -> bool:
    """Check F_L(U rho U^dag) == F_L(rho) for U = exp(-i theta L)."""
    u = hermitian_function(L, lambda w: np.exp(-1j * theta * w))
    rotated = u @ rho @ u.conj().T
    before = asymmetry_general(rho, L)
    after = asymmetry_general(0.5 * (rotated + rotated.conj().T), L)
    return abs(after - before) <= rtol * max(1.0, before)
