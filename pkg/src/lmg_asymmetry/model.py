"""Lipkin-Meshkov-Glick Hamiltonian, parity, and pre-quench ground states."""

from dataclasses import dataclass, replace

import numpy as np

from .spin import HalfInteger, collective_operators, hermitian_eigendecomposition, hermitian_function

__all__ = [
    "LmgParams",
    "GroundState",
    "TIEBREAKS",
    "build_hamiltonian",
    "parity_operator",
    "ground_state",
    "default_tiebreak",
]

TIEBREAKS = ("max_jz", "max_jx", "raw")
DEGENERACY_RTOL = 1e-8


@dataclass(frozen=True)
class LmgParams:
    """Parameters of ``H = -(J/j)(Jz^2 + gamma Jy^2) - 2 h Jx``."""

    j: HalfInteger
    gamma: float
    h: float
    J: float = 1.0

    def __post_init__(self):
        if not isinstance(self.j, HalfInteger):
            object.__setattr__(self, "j", HalfInteger.from_value(self.j))
        if self.j.twice_j < 1:
            raise ValueError("j must be at least 1/2")
        for name in ("gamma", "h", "J"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.J <= 0:
            raise ValueError(f"coupling J must be positive, got {self.J}")

    def with_field(self, h):
        return replace(self, h=h)


@dataclass(frozen=True)
class GroundState:
    vector: np.ndarray
    energy: float
    degenerate: bool
    selection_note: str


def build_hamiltonian(p: LmgParams) -> np.ndarray:
    jx, jy, jz = collective_operators(p.j)
    h = -(p.J / p.j.value) * (jz @ jz + p.gamma * (jy @ jy)) - 2 * p.h * jx
    # Jy^2 and Jx are real in the Dicke basis, so H must be real symmetric
    imag = float(np.abs(h.imag).max())
    if imag > 1e-12:
        raise ArithmeticError(f"LMG Hamiltonian has imaginary part {imag:.3e}")
    return np.ascontiguousarray(h.real).astype(complex)


def parity_operator(j) -> np.ndarray:
    """Rotation exp(-i pi Jx), which flips Jy and Jz and leaves Jx fixed."""
    jx, _, _ = collective_operators(j)
    return hermitian_function(jx, lambda w: np.exp(-1j * np.pi * w))


def default_tiebreak(gamma):
    return "max_jx" if gamma >= 1.0 else "max_jz"


def _select_in_subspace(sub, op):
    # largest-eigenvalue direction of op restricted to span(sub)
    restricted = sub.conj().T @ op @ sub
    _, vecs = np.linalg.eigh(0.5 * (restricted + restricted.conj().T))
    vec = sub @ vecs[:, -1]
    # fix the global phase so the largest component is real positive
    k = int(np.argmax(np.abs(vec)))
    vec = vec * (abs(vec[k]) / vec[k])
    return vec / np.linalg.norm(vec)


def ground_state(p: LmgParams, tiebreak="max_jz", hamiltonian=None, spectrum=None) -> GroundState:
    """Lowest eigenvector of the LMG Hamiltonian.

    When the two lowest levels are closer than ``1e-8 * ||H||`` the ground
    space is treated as two-fold degenerate and ``tiebreak`` picks a member:
    ``max_jz`` (or ``max_jx``) returns the state in that plane with the
    largest <Jz> (or <Jx>); ``raw`` returns the solver's first eigenvector.
    """
    if tiebreak not in TIEBREAKS:
        raise ValueError(f"tiebreak must be one of {TIEBREAKS}, got {tiebreak!r}")
    h = build_hamiltonian(p) if hamiltonian is None else hamiltonian
    sp = hermitian_eigendecomposition(h) if spectrum is None else spectrum
    w, v = sp.eigenvalues, sp.eigenvectors
    scale = max(float(np.abs(w).max()), 1e-300)
    degenerate = len(w) > 1 and (w[1] - w[0]) < DEGENERACY_RTOL * scale

    if not degenerate:
        vec = v[:, 0]
        note = "unique ground state"
    elif tiebreak == "raw":
        vec = v[:, 0]
        note = "degenerate ground space; solver vector returned"
    else:
        jx, _, jz = collective_operators(p.j)
        op = jz if tiebreak == "max_jz" else jx
        vec = _select_in_subspace(v[:, :2], op)
        note = f"degenerate ground space; {tiebreak} member selected"

    vec = vec / np.linalg.norm(vec)
    energy = float(np.real(vec.conj() @ h @ vec))
    return GroundState(vector=vec, energy=energy, degenerate=bool(degenerate), selection_note=note)
