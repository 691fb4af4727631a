"""Grid-point evaluation, ordered parallel map, and deterministic CSV tables."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from .asymmetry import AXES, asymmetry_series, is_converged, time_average
from .dynamics import QuenchProtocol, TimeGrid, evolve
from .errors import InvariantError
from .spin import HalfInteger
from .thermo import entropy_bound_series, reference_state

__all__ = [
    "PointTask",
    "PointError",
    "SweepTable",
    "evaluate_point",
    "parallel_map",
    "format_float",
    "grid_from_spec",
]


@dataclass(frozen=True)
class PointTask:
    """Everything needed to evaluate one (gamma, h, j) quench; picklable."""

    twice_j: int
    gamma: float
    h: float
    h0: float = 0.0
    J: float = 1.0
    t_max: float = 200.0
    n_samples: int = 4001
    generators: tuple = AXES
    order_parameter: bool = True
    entropy_bound: bool = True
    ref: str = "initial"
    beta: float = math.inf
    tiebreak: str = None

    @property
    def coords(self):
        return {"gamma": self.gamma, "h": self.h, "j": self.twice_j / 2}


class PointError(RuntimeError):
    def __init__(self, task, cause):
        self.task = task
        self.cause = cause
        c = task.coords
        super().__init__(
            f"grid point gamma={c['gamma']!r}, h={c['h']!r}, j={c['j']!r} failed: "
            f"{type(cause).__name__}: {cause}"
        )

    def __reduce__(self):
        # rebuild from (task, cause) when sent back from a worker process
        return type(self), (self.task, self.cause)


@lru_cache(maxsize=16)
def _initial_state(twice_j, gamma, h0, J, tiebreak):
    q = QuenchProtocol.field_quench(HalfInteger(twice_j), gamma, h0, h0, J=J, tiebreak=tiebreak)
    return q.initial_state()


def point_columns(task: PointTask):
    cols = []
    if task.order_parameter:
        cols += ["order_parameter", "order_parameter_normalized", "order_parameter_converged"]
    for ax in task.generators:
        cols += [f"asymmetry_{ax}", f"asymmetry_{ax}_converged"]
    if task.entropy_bound:
        cols += ["entropy_bound", "entropy_bound_converged", "entropy_bound_clamped"]
    return cols


def evaluate_point(task: PointTask) -> dict:
    """Time-averaged observables for one quench; keys follow :func:`point_columns`."""
    j = HalfInteger(task.twice_j)
    q = QuenchProtocol.field_quench(j, task.gamma, task.h0, task.h, J=task.J, tiebreak=task.tiebreak)
    grid = TimeGrid(task.t_max, task.n_samples)
    init = _initial_state(task.twice_j, q.pre.gamma, q.pre.h, q.pre.J, q.tiebreak)
    traj = evolve(q, grid, initial=init)

    out = {}
    if task.order_parameter:
        m = j.m_values()
        jz = (np.abs(traj.states) ** 2) @ m
        avg = time_average(jz, grid)
        out["order_parameter"] = avg
        out["order_parameter_normalized"] = avg / j.value
        out["order_parameter_converged"] = is_converged(jz, grid)
    for ax in task.generators:
        rec = asymmetry_series(traj, ax)
        out[f"asymmetry_{ax}"] = rec.time_average
        out[f"asymmetry_{ax}_converged"] = rec.converged
    if task.entropy_bound:
        rec = entropy_bound_series(traj, reference_state(traj, task.ref, task.beta))
        out["entropy_bound"] = rec.time_average
        out["entropy_bound_converged"] = rec.converged
        out["entropy_bound_clamped"] = rec.n_clamped

    for k, v in out.items():
        if isinstance(v, float) and not math.isfinite(v):
            raise InvariantError(f"non-finite value for {k}: {v}")
    return out


class _Guarded:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, task):
        try:
            return self.fn(task)
        except Exception as exc:  # noqa: BLE001 - re-raised with coordinates
            raise PointError(task, exc) from exc


def parallel_map(tasks, fn=evaluate_point, workers=1):
    """Apply ``fn`` to each task, returning results in input order.

    ``fn`` must be a pure, picklable function of its task. Any failure is
    re-raised as :class:`PointError` carrying the offending task.
    """
    tasks = list(tasks)
    guarded = _Guarded(fn)
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [guarded(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(guarded, tasks, chunksize=max(1, len(tasks) // (8 * workers))))


def format_float(x) -> str:
    """Fixed 12-significant-digit rendering used in every CSV cell."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = format(x, ".12g")
    return "0" if s == "-0" else s


def grid_from_spec(spec):
    """Parse ``lo:hi:n`` into an inclusive linear grid."""
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except (AttributeError, ValueError):
        raise ValueError(f"grid spec must look like lo:hi:n, got {spec!r}") from None
    if n < 1:
        raise ValueError(f"grid needs at least one point, got n={n}")
    if n == 1:
        if lo != hi:
            raise ValueError("a one-point grid needs lo == hi")
        return np.array([lo])
    return np.linspace(lo, hi, n)


@dataclass
class SweepTable:
    """Rows keyed by (gamma, h), kept sorted, rendered with fixed formatting."""

    schema: list
    rows: list
    metadata: dict = field(default_factory=dict)
    key_columns: tuple = ("gamma", "h")

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.schema):
                raise ValueError(f"row has {len(row)} cells, schema has {len(self.schema)}")
        keys = [self.schema.index(c) for c in self.key_columns if c in self.schema]
        if keys:
            self.rows = sorted(self.rows, key=lambda r: tuple(r[k] for k in keys))

    def column(self, name) -> np.ndarray:
        k = self.schema.index(name)
        return np.array([r[k] for r in self.rows], dtype=float)

    def to_csv_text(self) -> str:
        lines = [",".join(self.schema)]
        lines += [",".join(format_float(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv_text())

    @classmethod
    def read_csv(cls, path):
        with open(path) as fh:
            lines = fh.read().splitlines()
        schema = lines[0].split(",")
        rows = [tuple(float(v) for v in line.split(",")) for line in lines[1:] if line]
        return cls(schema, rows)


def sweep_table(tasks, results, extra_metadata=None, key_columns=("gamma", "h")) -> SweepTable:
    cols = point_columns(tasks[0]) if tasks else []
    schema = ["gamma", "h", "twice_j", "h0"] + cols
    rows = [(t.gamma, t.h, t.twice_j, t.h0) + tuple(r[c] for c in cols) for t, r in zip(tasks, results)]
    meta = dict(extra_metadata or {})
    flags = [c for c in cols if c.endswith("_converged")]
    if flags:
        meta["unconverged_cells"] = {c: int(sum(1 for r in results if not r[c])) for c in flags}
    return SweepTable(schema, rows, meta, key_columns)
