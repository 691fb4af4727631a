"""Dynamical order parameter, critical-point estimators, and (h, gamma) maps."""

from dataclasses import dataclass
import math
from typing import NamedTuple, Optional

import numpy as np

from .asymmetry import is_converged, time_average
from .dynamics import QuenchProtocol, TimeGrid, evolve, expectation_series
from .spin import HalfInteger, collective_operators
from .sweep import PointTask, SweepTable, evaluate_point, parallel_map, sweep_table

__all__ = [
    "OrderParameter",
    "OrderParameterCurve",
    "CriticalPointEstimate",
    "order_parameter",
    "order_parameter_curve",
    "critical_point",
    "phase_map",
    "PHASE_MAP_OBSERVABLES",
]


class OrderParameter(NamedTuple):
    raw: float
    normalized: float
    converged: bool


def order_parameter(q: QuenchProtocol, grid: TimeGrid, initial=None) -> OrderParameter:
    """Time average of <Jz(t)> after the quench, raw and divided by j."""
    traj = evolve(q, grid, initial=initial)
    _, _, jz = collective_operators(q.post.j)
    series = expectation_series(traj, jz)
    avg = time_average(series, grid)
    return OrderParameter(avg, avg / q.post.j.value, is_converged(series, grid))


@dataclass(frozen=True, eq=False)
class OrderParameterCurve:
    h_values: np.ndarray
    values: np.ndarray
    j: HalfInteger
    gamma: float
    h0: float = 0.0

    def __post_init__(self):
        if len(self.h_values) != len(self.values):
            raise ValueError("h_values and values differ in length")
        if np.any(np.abs(self.values) > self.j.value * (1 + 1e-12)):
            raise ValueError("order parameter exceeds j in magnitude")

    @property
    def normalized(self) -> np.ndarray:
        return np.asarray(self.values) / self.j.value


def order_parameter_curve(h_values, j, gamma=0.0, h0=0.0, grid=TimeGrid(), J=1.0, tiebreak=None, workers=1):
    j = j if isinstance(j, HalfInteger) else HalfInteger.from_value(j)
    h_values = np.asarray(h_values, dtype=float)
    tasks = [
        PointTask(
            twice_j=j.twice_j, gamma=float(gamma), h=float(h), h0=float(h0), J=J,
            t_max=grid.t_max, n_samples=grid.n_samples, generators=(),
            entropy_bound=False, tiebreak=tiebreak,
        )
        for h in h_values
    ]
    results = parallel_map(tasks, evaluate_point, workers)
    values = np.array([r["order_parameter"] for r in results])
    return OrderParameterCurve(h_values, values, j, float(gamma), float(h0))


class CriticalPointEstimate(NamedTuple):
    h_star: Optional[float]
    method: str
    threshold: Optional[float]
    diagnostic: str = ""


def critical_point(curve: OrderParameterCurve, method="threshold_crossing", threshold=0.1) -> CriticalPointEstimate:
    """Locate the drop of the normalized order parameter.

    ``threshold_crossing`` returns the first h at which |normalized value|
    falls below ``threshold``, interpolated linearly from the preceding
    sample. ``max_neg_slope`` returns the midpoint of the grid interval with
    the most negative forward difference.
    """
    h = np.asarray(curve.h_values, dtype=float)
    v = np.abs(curve.normalized)
    if len(h) < 2:
        return CriticalPointEstimate(None, method, threshold, "curve needs at least two samples")
    if np.any(np.diff(h) <= 0):
        raise ValueError("h_values must be strictly increasing")

    if method == "threshold_crossing":
        below = np.nonzero(v < threshold)[0]
        if below.size == 0:
            return CriticalPointEstimate(None, method, threshold, f"normalized order parameter never falls below {threshold}")
        k = int(below[0])
        if k == 0:
            return CriticalPointEstimate(
                None, method, threshold, f"already below {threshold} at the first sample h={h[0]:.6g}"
            )
        frac = (v[k - 1] - threshold) / (v[k - 1] - v[k])
        return CriticalPointEstimate(float(h[k - 1] + frac * (h[k] - h[k - 1])), method, threshold)

    if method == "max_neg_slope":
        slope = np.diff(curve.normalized) / np.diff(h)
        k = int(np.argmin(slope))
        if not slope[k] < 0:
            return CriticalPointEstimate(None, method, None, "order parameter never decreases")
        return CriticalPointEstimate(float(0.5 * (h[k] + h[k + 1])), method, None)

    raise ValueError(f"unknown method {method!r}")


PHASE_MAP_OBSERVABLES = ("order_parameter", "avg_asymmetry", "avg_entropy_bound")


def phase_map(
    h_grid, gamma_grid, j, h0=0.0, observable="order_parameter", generators=("z",), grid=TimeGrid(),
    J=1.0, ref="initial", beta=math.inf, tiebreak=None, workers=1,
) -> SweepTable:
    """Tabulate one time-averaged observable over every (gamma, h) pair.

    ``observable`` is one of ``order_parameter``, ``avg_asymmetry`` (for
    each axis in ``generators``) or ``avg_entropy_bound``. Rows come back
    sorted by (gamma, h) regardless of worker count.
    """
    if observable not in PHASE_MAP_OBSERVABLES:
        raise ValueError(f"observable must be one of {PHASE_MAP_OBSERVABLES}, got {observable!r}")
    j = j if isinstance(j, HalfInteger) else HalfInteger.from_value(j)
    tasks = [
        PointTask(
            twice_j=j.twice_j, gamma=float(g), h=float(h), h0=float(h0), J=J,
            t_max=grid.t_max, n_samples=grid.n_samples,
            generators=tuple(generators) if observable == "avg_asymmetry" else (),
            order_parameter=observable == "order_parameter",
            entropy_bound=observable == "avg_entropy_bound",
            ref=ref, beta=beta, tiebreak=tiebreak,
        )
        for g in gamma_grid
        for h in h_grid
    ]
    results = parallel_map(tasks, evaluate_point, workers)
    return sweep_table(tasks, results, {"observable": observable})
