"""Command-line front end: ``lmg-asymmetry {trace,sweep1d,sweep2d,order-parameter,validate}``.

Every run writes ``<out>.csv`` (data, byte-reproducible) and ``<out>.meta``
(config echo, convergence flags, timings). Exit codes: 0 success, 2 config
error, 3 numerical-invariant violation.
"""

import argparse
from dataclasses import asdict, dataclass, fields
import json
import math
import platform
import sys
import time

import numpy as np

from . import __version__
from .asymmetry import AXES, pure_state_asymmetry
from .criticality import critical_point, order_parameter_curve
from .dynamics import QuenchProtocol, TimeGrid, evolve, expectation_series, rate_function, return_probability
from .errors import ConfigError, InvariantError
from .model import TIEBREAKS
from .spin import HalfInteger, collective_operators
from .sweep import PointError, PointTask, SweepTable, evaluate_point, grid_from_spec, parallel_map, sweep_table
from .thermo import entropy_bound_series, reference_state
from . import validation

__all__ = ["RunConfig", "run", "main", "load_config", "write_meta", "read_meta"]

MODES = ("trace", "sweep1d", "sweep2d", "order_parameter", "validate")
REF_CHOICES = {"initial": "initial", "ground": "ground_of_post", "gibbs": "gibbs_of_post"}
DEFAULT_GRID = "0.01:0.99:101"

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT = 0, 2, 3


@dataclass(frozen=True)
class RunConfig:
    mode: str = "trace"
    twice_j: tuple = (200,)
    J: float = 1.0
    gamma: float = 0.2
    gamma_grid: str = DEFAULT_GRID
    h0: float = 0.0
    h: float = 0.8
    h_grid: str = DEFAULT_GRID
    t_max: float = 200.0
    n_samples: int = 4001
    generators: tuple = AXES
    ref: str = "initial"
    beta: float = math.inf
    tiebreak: str = None
    threshold: float = 0.1
    out: str = "lmg_out"
    workers: int = 1
    seed: int = 12345

    def __post_init__(self):
        object.__setattr__(self, "twice_j", tuple(int(v) for v in np.atleast_1d(self.twice_j)))
        object.__setattr__(self, "generators", tuple(self.generators))
        self.validate()

    def validate(self):
        def bad(name, msg):
            raise ConfigError(f"{name}: {msg}")

        if self.mode not in MODES:
            bad("mode", f"must be one of {MODES}, got {self.mode!r}")
        if not self.twice_j or any(v < 1 for v in self.twice_j):
            bad("twice_j", f"must be positive integers, got {self.twice_j}")
        if self.mode != "order_parameter" and len(self.twice_j) != 1:
            bad("twice_j", "several values are only allowed in order_parameter mode")
        if not (math.isfinite(self.J) and self.J > 0):
            bad("J", f"must be positive, got {self.J}")
        if not 0.0 <= self.gamma <= 1.0:
            bad("gamma", f"must lie in [0, 1], got {self.gamma}")
        for name in ("h0", "h"):
            if not math.isfinite(getattr(self, name)):
                bad(name, "must be finite")
        for name in ("gamma_grid", "h_grid"):
            try:
                g = grid_from_spec(getattr(self, name))
            except ValueError as exc:
                bad(name, str(exc))
            if name == "gamma_grid" and (g.min() < 0 or g.max() > 1):
                bad(name, "gamma values must lie in [0, 1]")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            bad("t_max", f"must be positive, got {self.t_max}")
        if self.n_samples < 2:
            bad("n_samples", f"must be at least 2, got {self.n_samples}")
        if not self.generators or any(g not in AXES for g in self.generators):
            bad("generators", f"must be a non-empty subset of {AXES}, got {self.generators}")
        if self.ref not in REF_CHOICES:
            bad("ref", f"must be one of {tuple(REF_CHOICES)}, got {self.ref!r}")
        if not self.beta > 0:
            bad("beta", f"must be positive, got {self.beta}")
        if self.tiebreak is not None and self.tiebreak not in TIEBREAKS:
            bad("tiebreak", f"must be one of {TIEBREAKS}, got {self.tiebreak!r}")
        if self.workers < 1:
            bad("workers", f"must be at least 1, got {self.workers}")

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.t_max, self.n_samples)

    @property
    def h_values(self):
        return grid_from_spec(self.h_grid)

    @property
    def gamma_values(self):
        return grid_from_spec(self.gamma_grid)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["twice_j"] = list(self.twice_j)
        d["generators"] = list(self.generators)
        return d

    def to_json(self) -> str:
        # inf beta is written as the string "inf" to stay valid JSON
        d = self.to_dict()
        if math.isinf(d["beta"]):
            d["beta"] = "inf"
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"{unknown[0]}: unknown configuration field")
        d = dict(d)
        try:
            for name in ("J", "gamma", "h0", "h", "t_max", "beta", "threshold"):
                if name in d:
                    d[name] = float(d[name])
            for name in ("n_samples", "workers", "seed"):
                if name in d:
                    if float(d[name]) != int(float(d[name])):
                        raise ValueError(f"{name} must be an integer")
                    d[name] = int(d[name])
            if "generators" in d and isinstance(d["generators"], str):
                d["generators"] = tuple(s for s in d["generators"].split(",") if s)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: {exc}") from None
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path}, line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    return data


def write_meta(path, entries):
    with open(path, "w") as fh:
        for key, value in entries.items():
            if isinstance(value, float) and not math.isfinite(value):
                value = str(value)
            fh.write(f"{key} = {json.dumps(value, sort_keys=True)}\n")


def read_meta(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            if line.strip():
                key, _, value = line.partition(" = ")
                out[key] = json.loads(value)
    return out


def _trace(cfg: RunConfig):
    j = HalfInteger(cfg.twice_j[0])
    q = QuenchProtocol.field_quench(j, cfg.gamma, cfg.h0, cfg.h, J=cfg.J, tiebreak=cfg.tiebreak)
    traj = evolve(q, cfg.grid)
    ops = collective_operators(j)
    expect = [expectation_series(traj, op) for op in ops]
    los = return_probability(traj)
    rate = rate_function(traj, los)
    asym = [pure_state_asymmetry(traj.states, op) for op in ops]
    ref = reference_state(traj, REF_CHOICES[cfg.ref], cfg.beta)
    bound = entropy_bound_series(traj, ref)
    schema = ["t", "jx", "jy", "jz", "loschmidt", "rate", "asymmetry_x", "asymmetry_y", "asymmetry_z", "bures", "bound"]
    cols = [traj.grid.samples, *expect, los, rate, *asym, bound.bures_series, bound.bound_series]
    table = SweepTable(schema, [tuple(r) for r in zip(*cols)], key_columns=("t",))
    meta = {
        "initial_state": q.initial_state().selection_note,
        "tiebreak": q.tiebreak,
        "reference_kind": ref.kind,
        "entropy_bound_clamped_samples": bound.n_clamped,
        "rate_normalization": "1/N with N = 2j",
    }
    return table, meta


def _tasks(cfg, gammas, hs):
    return [
        PointTask(
            twice_j=cfg.twice_j[0], gamma=float(g), h=float(h), h0=cfg.h0, J=cfg.J,
            t_max=cfg.t_max, n_samples=cfg.n_samples, generators=cfg.generators,
            ref=REF_CHOICES[cfg.ref], beta=cfg.beta, tiebreak=cfg.tiebreak,
        )
        for g in gammas
        for h in hs
    ]


def _sweep(cfg: RunConfig, two_d: bool):
    gammas = cfg.gamma_values if two_d else [cfg.gamma]
    tasks = _tasks(cfg, gammas, cfg.h_values)
    results = parallel_map(tasks, evaluate_point, cfg.workers)
    table = sweep_table(tasks, results)
    return table, {"reference_kind": REF_CHOICES[cfg.ref], **table.metadata}


def _order_parameter(cfg: RunConfig):
    schema = ["twice_j", "gamma", "h", "order_parameter", "order_parameter_normalized"]
    rows, meta = [], {}
    for tj in cfg.twice_j:
        curve = order_parameter_curve(
            cfg.h_values, HalfInteger(tj), cfg.gamma, cfg.h0, cfg.grid, cfg.J, cfg.tiebreak, cfg.workers
        )
        rows += [(tj, cfg.gamma, h, v, v / (tj / 2)) for h, v in zip(curve.h_values, curve.values)]
        for method in ("threshold_crossing", "max_neg_slope"):
            est = critical_point(curve, method, cfg.threshold)
            meta[f"critical_point.twice_j={tj}.{method}"] = (
                est.h_star if est.h_star is not None else f"absent: {est.diagnostic}"
            )
    return SweepTable(schema, rows, key_columns=("twice_j", "gamma", "h")), meta


def _validate(cfg: RunConfig):
    results = validation.run_all(cfg.seed)
    schema = ["suite", "cases", "passed", "max_error", "tolerance"]
    rows = [(i, r.cases, r.passed, r.max_error, r.tolerance) for i, r in enumerate(results)]
    meta = {"suites": [r.name for r in results], "all_passed": all(r.ok for r in results)}
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.passed}/{r.cases} (max error {r.max_error:.3e}, tol {r.tolerance:.0e})")
    return SweepTable(schema, rows, key_columns=()), meta


def run(cfg: RunConfig):
    """Execute one configuration, write ``<out>.csv`` and ``<out>.meta``, return (table, meta)."""
    start = time.perf_counter()
    if cfg.mode == "trace":
        table, extra = _trace(cfg)
    elif cfg.mode in ("sweep1d", "sweep2d"):
        table, extra = _sweep(cfg, cfg.mode == "sweep2d")
    elif cfg.mode == "order_parameter":
        table, extra = _order_parameter(cfg)
    else:
        table, extra = _validate(cfg)
    table.write_csv(f"{cfg.out}.csv")
    meta = {
        "code_version": __version__,
        "config": json.loads(cfg.to_json()),
        "numpy_version": np.__version__,
        "python_version": platform.python_version(),
        **extra,
        "wall_time_seconds": round(time.perf_counter() - start, 3),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    write_meta(f"{cfg.out}.meta", meta)
    return table, meta


def _parser():
    p = argparse.ArgumentParser(
        prog="lmg-asymmetry",
        description="LMG quench dynamics: asymmetry, entropy-production bound, and order-parameter sweeps.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    defaults = RunConfig()
    for name in ("trace", "sweep1d", "sweep2d", "order-parameter", "validate"):
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON config file; flags override its values")
        s.add_argument("--j2", help=f"twice j (comma list in order-parameter mode) [default: {defaults.twice_j[0]}; order-parameter 50,100,200,400]")
        s.add_argument("--J", type=float, help=f"coupling [default: {defaults.J}]")
        s.add_argument("--gamma", type=float, help=f"anisotropy in [0, 1] [default: {defaults.gamma}]")
        s.add_argument("--h0", type=float, help=f"pre-quench field [default: {defaults.h0}]")
        s.add_argument("--h", type=float, help=f"post-quench field (trace) [default: {defaults.h}]")
        s.add_argument("--h-grid", dest="h_grid", help=f"lo:hi:n field grid [default: {DEFAULT_GRID}]")
        s.add_argument("--gamma-grid", dest="gamma_grid", help=f"lo:hi:n anisotropy grid (sweep2d) [default: {DEFAULT_GRID}]")
        s.add_argument("--tmax", dest="t_max", type=float, help=f"time window in units of 1/J [default: {defaults.t_max}]")
        s.add_argument("--samples", dest="n_samples", type=int, help=f"time samples [default: {defaults.n_samples}]")
        s.add_argument("--generators", help="comma list of axes among x,y,z [default: x,y,z]")
        s.add_argument("--ref", choices=tuple(REF_CHOICES), help=f"entropy-bound reference state [default: {defaults.ref}]")
        s.add_argument("--beta", type=float, help="inverse temperature for --ref gibbs [default: inf]")
        s.add_argument("--tiebreak", choices=[t.replace("_", "-") for t in TIEBREAKS],
                       help="degenerate ground-state selection [default: max-jz for gamma<1, max-jx for gamma=1]")
        s.add_argument("--threshold", type=float, help=f"order-parameter threshold [default: {defaults.threshold}]")
        s.add_argument("--workers", type=int, help=f"worker processes [default: {defaults.workers}]")
        s.add_argument("--seed", type=int, help=f"random seed for validate [default: {defaults.seed}]")
        s.add_argument("--out", help=f"output path prefix [default: {defaults.out}]")
    return p


def config_from_args(args) -> RunConfig:
    mode = args.command.replace("-", "_")
    values = load_config(args.config) if args.config else {}
    values["mode"] = mode
    if mode == "order_parameter" and "twice_j" not in values:
        values["twice_j"] = [50, 100, 200, 400]
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("command", "config", "j2")}
    if args.j2 is not None:
        try:
            flags["twice_j"] = [int(v) for v in args.j2.split(",")]
        except ValueError:
            raise ConfigError(f"twice_j: cannot parse --j2 {args.j2!r}") from None
    if "tiebreak" in flags:
        flags["tiebreak"] = flags["tiebreak"].replace("-", "_")
    values.update(flags)
    return RunConfig.from_dict(values)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        _, meta = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvariantError, ArithmeticError, PointError) as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if not meta.get("all_passed", True):
        print("numerical invariant violated: validation suites failed", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
