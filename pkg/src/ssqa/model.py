"""QUBO and Ising problem representations.

Conventions
-----------
QUBO energy over bits ``x`` in {0, 1}::

    H(x) = sum_{i <= j} Q[i, j] x_i x_j + offset

with ``Q`` stored upper-triangular (entries below the diagonal are rejected).

Ising energy over spins ``s`` in {-1, +1}::

    H(s) = -sum_i h_i s_i - sum_{i < j} J[i, j] s_i s_j + offset

with ``J`` symmetric and zero on the diagonal. Spins and bits are related by
``s = 2x - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuboModel",
    "IsingModel",
    "qubo_energy",
    "ising_energy",
    "qubo_to_ising",
    "bits_to_spins",
    "spins_to_bits",
    "local_fields",
    "flip_delta",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuboModel:
    """Upper-triangular QUBO.

    Parameters
    ----------
    Q : array_like, shape (n, n)
        Coefficients. Must be upper-triangular; the diagonal holds the
        linear terms (``x_i**2 == x_i``).
    offset : float
        Constant added to every energy. Problem builders use it to place
        the ground state of a feasible instance at a known value.
    """

    Q: np.ndarray
    offset: float = 0.0

    def __post_init__(self) -> None:
        Q = _readonly(self.Q)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError(f"Q must be square, got shape {Q.shape}")
        if Q.shape[0] < 1:
            raise ValueError("QUBO needs at least one variable")
        if np.any(np.tril(Q, -1) != 0):
            raise ValueError("Q must be upper-triangular")
        if not np.all(np.isfinite(Q)):
            raise ValueError("Q has non-finite entries")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    @classmethod
    def from_any(cls, Q: np.ndarray, offset: float = 0.0) -> "QuboModel":
        """Fold an arbitrary square matrix into upper-triangular storage."""
        Q = np.asarray(Q, dtype=np.float64)
        upper = np.triu(Q) + np.triu(Q.T, 1)
        return cls(upper, offset)


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Ising model with biases ``h``, symmetric couplings ``J`` and an offset."""

    h: np.ndarray
    J: np.ndarray
    offset: float = 0.0

    def __post_init__(self) -> None:
        h = _readonly(self.h).reshape(-1)
        J = _readonly(self.J)
        n = h.shape[0]
        if n < 1:
            raise ValueError("Ising model needs at least one spin")
        if J.shape != (n, n):
            raise ValueError(f"J must have shape {(n, n)}, got {J.shape}")
        if np.any(J != J.T):
            raise ValueError("J must be symmetric")
        if np.any(np.diag(J) != 0):
            raise ValueError("J must have a zero diagonal")
        if not (np.all(np.isfinite(h)) and np.all(np.isfinite(J))):
            raise ValueError("model has non-finite entries")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.h.shape[0]


def _check_bits(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError("bit vector must be one-dimensional")
    if n is not None and x.shape[0] != n:
        raise ValueError(f"expected {n} bits, got {x.shape[0]}")
    if not np.all((x == 0) | (x == 1)):
        raise ValueError("bit vector entries must be 0 or 1")
    return x.astype(np.float64)


def _check_spins(s, n: int | None = None) -> np.ndarray:
    s = np.asarray(s)
    if s.ndim != 1:
        raise ValueError("spin vector must be one-dimensional")
    if n is not None and s.shape[0] != n:
        raise ValueError(f"expected {n} spins, got {s.shape[0]}")
    if not np.all((s == -1) | (s == 1)):
        raise ValueError("spin entries must be -1 or +1")
    return s.astype(np.float64)


def bits_to_spins(x) -> np.ndarray:
    """Map bits {0, 1} to spins {-1, +1} via ``2x - 1``."""
    return (2 * _check_bits(x) - 1).astype(np.int8)


def spins_to_bits(s) -> np.ndarray:
    """Inverse of :func:`bits_to_spins`."""
    return ((_check_spins(s) + 1) // 2).astype(np.int8)


def qubo_energy(q: QuboModel, x) -> float:
    x = _check_bits(x, q.n)
    return float(x @ q.Q @ x) + q.offset


def ising_energy(m: IsingModel, s) -> float:
    s = _check_spins(s, m.n)
    # J is symmetric with zero diagonal, so the i<j sum is half the full form.
    return float(-m.h @ s - 0.5 * (s @ m.J @ s)) + m.offset


def qubo_to_ising(q: QuboModel) -> IsingModel:
    """Convert a QUBO to an Ising model with identical energies.

    Substituting ``x = (s + 1) / 2`` gives::

        h_i = -Q_ii / 2 - (1/4) sum_{j != i} Q_ij
        J_ij = -Q_ij / 4                     (i != j, symmetrized)
        offset = sum_i Q_ii / 2 + sum_{i<j} Q_ij / 4 + q.offset

    where the sum in ``h_i`` runs over every variable sharing a nonzero
    coefficient with ``i`` (either triangle of ``Q``).
    """
    Q = q.Q
    diag = np.diag(Q).copy()
    off = Q - np.diag(diag)
    sym = off + off.T
    h = -0.5 * diag - 0.25 * sym.sum(axis=1) + 0.0  # + 0.0 drops negative zeros
    J = -0.25 * sym + 0.0
    offset = 0.5 * diag.sum() + 0.25 * off.sum() + q.offset
    return IsingModel(h, J, offset)


def local_fields(m: IsingModel, s) -> np.ndarray:
    """Return ``h + J @ s`` (works row-wise for a stack of spin vectors)."""
    s = np.asarray(s, dtype=np.float64)
    return m.h + s @ m.J


def flip_delta(m: IsingModel, s, i: int) -> float:
    """Energy change from flipping spin ``i``: ``2 s_i (h_i + sum_j J_ij s_j)``."""
    s = np.asarray(s, dtype=np.float64)
    return float(2.0 * s[i] * (m.h[i] + m.J[i] @ s))
