"""Oracle suites run by ``lmg-asymmetry validate``.

Each suite compares a production path against an independent computation
and returns a :class:`SuiteResult`.
"""

from typing import NamedTuple

import numpy as np

from .asymmetry import asymmetry_general, asymmetry_pure
from .model import LmgParams, build_hamiltonian
from .spin import HalfInteger, brute_force_symmetric_sector, collective_operators, trace_norm, trace_norm_svd
from .thermo import s_objective, s_function

__all__ = ["SuiteResult", "run_all", "SUITES"]


class SuiteResult(NamedTuple):
    name: str
    cases: int
    passed: int
    max_error: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.passed == self.cases


def brute_force_sector(rng=None, sizes=(2, 4, 6, 8)):
    errors = []
    for n in sizes:
        ops = collective_operators(HalfInteger(n))
        for k, axis in enumerate("xyz"):
            errors.append(np.abs(brute_force_symmetric_sector(n, axis) - ops[k]).max())
    return _summarise("brute_force_sector", errors, 1e-10)


def lmg_spectrum(rng=None, sizes=(2, 4, 6, 8), params=((0.2, 0.3), (0.8, 0.6), (0.0, 0.0), (1.0, 0.4))):
    errors = []
    for n in sizes:
        jx, jy, jz = (brute_force_symmetric_sector(n, a) for a in "xyz")
        jv = n / 2
        for gamma, h in params:
            brute = -(1.0 / jv) * (jz @ jz + gamma * jy @ jy) - 2 * h * jx
            dicke = build_hamiltonian(LmgParams(HalfInteger(n), gamma, h))
            errors.append(np.abs(np.linalg.eigvalsh(brute) - np.linalg.eigvalsh(dicke)).max())
    return _summarise("lmg_spectrum", errors, 1e-10)


def _random_state(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def _random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def pure_vs_general(rng, trials=1000, dims=(2, 8, 64)):
    errors = []
    for k in range(trials):
        d = dims[k % len(dims)]
        psi, L = _random_state(rng, d), _random_hermitian(rng, d)
        fast = asymmetry_pure(psi, L)
        slow = asymmetry_general(np.outer(psi, psi.conj()), L)
        errors.append(abs(fast - slow) / max(abs(slow), 1e-300))
    return _summarise("pure_vs_general_asymmetry", errors, 1e-10)


def trace_norm_paths(rng, trials=100, d=8):
    errors = []
    for _ in range(trials):
        h = _random_hermitian(rng, d)
        a = 1j * h
        errors.append(abs(trace_norm(a) - trace_norm_svd(a)) / trace_norm_svd(a))
    return _summarise("trace_norm_dual_path", errors, 1e-10)


def s_function_scan(rng=None, xs=(0.1, 0.3, 0.5, 0.7, 0.9), n_scan=10**6):
    errors = []
    for x in xs:
        r = np.linspace(x, 1.0, n_scan + 2)[1:-1]
        errors.append(abs(s_function(x) - float(s_objective(r, x).min())))
    return _summarise("s_function_scan", errors, 1e-8)


def _summarise(name, errors, tol):
    errors = np.asarray(errors, dtype=float)
    return SuiteResult(name, int(errors.size), int(np.count_nonzero(errors <= tol)), float(errors.max()), tol)


SUITES = (brute_force_sector, lmg_spectrum, pure_vs_general, trace_norm_paths, s_function_scan)


def run_all(seed=12345):
    rng = np.random.default_rng(seed)
    return [suite(rng) for suite in SUITES]
