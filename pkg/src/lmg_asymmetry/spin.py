"""Collective spin operators in the Dicke basis and the dense Hermitian kernel.

Basis ordering is |j, m> with m descending: index 0 holds m = +j and the last
index holds m = -j.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

HERMITIAN_ATOL = 1e-12

__all__ = [
    "HalfInteger",
    "Spectrum",
    "NotHermitianError",
    "check_hermitian",
    "collective_operators",
    "hermitian_eigendecomposition",
    "hermitian_function",
    "trace_norm",
    "trace_norm_svd",
    "commutator",
    "brute_force_symmetric_sector",
]


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class HalfInteger:
    """Total angular momentum j stored exactly as the integer 2j."""

    twice_j: int

    def __post_init__(self):
        if not isinstance(self.twice_j, (int, np.integer)) or isinstance(self.twice_j, bool):
            raise TypeError(f"twice_j must be an integer, got {type(self.twice_j).__name__}")
        if self.twice_j < 0:
            raise ValueError(f"twice_j must be non-negative, got {self.twice_j}")
        object.__setattr__(self, "twice_j", int(self.twice_j))

    @classmethod
    def from_value(cls, j):
        twice = Fraction(j) * 2
        if twice.denominator != 1:
            raise ValueError(f"j={j} is not a multiple of 1/2")
        return cls(int(twice))

    @classmethod
    def from_spins(cls, n_spins):
        return cls(int(n_spins))

    @property
    def value(self) -> float:
        return self.twice_j / 2

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    @property
    def n_spins(self) -> int:
        return self.twice_j

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers +j, j-1, ..., -j."""
        return (self.twice_j - 2 * np.arange(self.dim)) / 2

    def __str__(self):
        return str(self.twice_j // 2) if self.twice_j % 2 == 0 else f"{self.twice_j}/2"


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_j(j) -> HalfInteger:
    return j if isinstance(j, HalfInteger) else HalfInteger.from_value(j)


def check_hermitian(a, atol=HERMITIAN_ATOL, name="matrix"):
    """Raise NotHermitianError unless ``a`` is square and Hermitian per entry."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"{name} must be square, got shape {a.shape}")
    dev = np.abs(a - a.conj().T)
    worst = float(dev.max()) if dev.size else 0.0
    if worst > atol:
        r, c = np.unravel_index(int(dev.argmax()), dev.shape)
        raise NotHermitianError(
            f"{name} is not Hermitian: |A[{r},{c}] - conj(A[{c},{r}])| = {worst:.3e} > {atol:.1e}"
        )
    return a


@lru_cache(maxsize=32)
def _collective_cached(twice_j):
    j = HalfInteger(twice_j)
    jv = j.value
    m = j.m_values()
    # <m+1|J+|m> sits on the superdiagonal because m descends with the index
    ladder = np.sqrt(jv * (jv + 1) - m[1:] * (m[1:] + 1))
    jp = np.diag(ladder, 1).astype(complex)
    jm = jp.T.copy()
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    for op in (jx, jy, jz):
        op.setflags(write=False)
    return jx, jy, jz


def collective_operators(j):
    """Return (Jx, Jy, Jz) for total spin ``j`` in the Dicke basis.

    ``j`` may be a :class:`HalfInteger` or a number such as 0.5 or 100.
    The returned arrays are read-only and shared between calls.
    """
    return _collective_cached(_as_j(j).twice_j)


def commutator(a, b):
    return a @ b - b @ a


def hermitian_eigendecomposition(a, atol=HERMITIAN_ATOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Backed by LAPACK ``zheevd`` through :func:`numpy.linalg.eigh`, which is a
    deterministic function of the input bits. The input is symmetrised before
    the call so that entries below ``atol`` in asymmetry cannot leak in.
    """
    a = check_hermitian(a, atol=atol)
    a = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(a)
    return Spectrum(w, v)


def hermitian_function(a, func, spectrum=None):
    """Apply scalar ``func`` to Hermitian ``a`` through its spectrum."""
    sp = spectrum if spectrum is not None else hermitian_eigendecomposition(a)
    v = sp.eigenvectors
    return (v * func(sp.eigenvalues)) @ v.conj().T


def trace_norm(a) -> float:
    """Sum of singular values of ``a``.

    Normal matrices (in particular the Hermitian and anti-Hermitian
    commutators this package produces) take the eigenvalue route; anything
    else falls back to :func:`trace_norm_svd`.
    """
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    scale = max(float(np.abs(a).max()), 1e-300)
    if np.abs(a + a.conj().T).max() <= HERMITIAN_ATOL * scale:
        # anti-Hermitian: i*A is Hermitian with the same singular values
        h = 1j * a
    elif np.abs(a - a.conj().T).max() <= HERMITIAN_ATOL * scale:
        h = a
    else:
        return trace_norm_svd(a)
    w = np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    return float(np.abs(w).sum())


def trace_norm_svd(a) -> float:
    return float(np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False).sum())


MAX_BRUTE_FORCE_SPINS = 10

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _full_collective(n, which):
    """Sum_i sigma_which^i / 2 on the 2**n tensor-product space."""
    sigma = _PAULI[which] / 2
    total = np.zeros((2**n, 2**n), dtype=complex)
    for site in range(n):
        op = np.ones((1, 1), dtype=complex)
        for k in range(n):
            op = np.kron(op, sigma if k == site else np.eye(2))
        total += op
    return total


def dicke_isometry(n):
    """Columns are the Dicke states |n/2, m>, m descending, in the product basis.

    Product basis index bits are 0 = spin up, 1 = spin down, so column k is the
    uniform superposition over all bit strings with k ones.
    """
    idx = np.arange(2**n)
    downs = np.array([bin(i).count("1") for i in idx])
    w = np.zeros((2**n, n + 1))
    for k in range(n + 1):
        sel = downs == k
        w[sel, k] = 1.0 / np.sqrt(sel.sum())
    return w


def brute_force_symmetric_sector(n_spins, which):
    """Project the tensor-product collective operator onto the Dicke sector.

    Exponential in ``n_spins``; used only to validate :func:`collective_operators`.
    """
    n = int(n_spins)
    if n < 1:
        raise ValueError(f"need at least one spin, got {n}")
    if n > MAX_BRUTE_FORCE_SPINS:
        raise ValueError(
            f"N={n} exceeds the brute-force limit of {MAX_BRUTE_FORCE_SPINS} spins"
        )
    if which not in _PAULI:
        raise ValueError(f"which must be one of 'x', 'y', 'z', got {which!r}")
    w = dicke_isometry(n)
    return w.T @ _full_collective(n, which) @ w
