"""Exhaustive ground-state search for small models.

State ``z`` (an integer in ``[0, 2**n)``) assigns bit ``i`` of ``z`` to
variable ``i``; for Ising models bit 1 means spin +1.

The low ``k`` bits are tabulated once as a vector over all ``2**k``
patterns. The remaining high bits are walked in Gray-code order, so each
step flips a single high spin and the cross terms with the low block are
updated in O(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .model import IsingModel, QuboModel, ising_energy, qubo_energy, qubo_to_ising

__all__ = ["OracleReport", "brute_force_min", "all_energies", "MAX_SPINS", "MAX_LISTED"]

MAX_SPINS = 24
MAX_LISTED = 1024
_LOW_BITS = 12
_TIE_TOL = 1e-9


@dataclass
class OracleReport:
    min_energy: float
    ground_states: list = field(default_factory=list)
    state_count_checked: int = 0
    truncated: bool = False

    @property
    def n_ground_states(self) -> int:
        """Number of minimizers found (a lower bound when truncated)."""
        return len(self.ground_states)


def _spin_table(k: int) -> np.ndarray:
    z = np.arange(1 << k)[:, None]
    return np.where((z >> np.arange(k)) & 1, 1.0, -1.0)


def _blocks(m: IsingModel) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(high, energies)`` where ``energies[low]`` is the energy of
    state ``low + (high << k)``."""
    n = m.n
    k = min(n, _LOW_BITS)
    h, J = m.h, m.J
    A = _spin_table(k)
    ha, hb = h[:k], h[k:]
    Jaa, Jab, Jbb = J[:k, :k], J[:k, k:], J[k:, k:]
    base = m.offset - A @ ha - 0.5 * np.einsum("zi,zi->z", A @ Jaa, A)

    b = -np.ones(n - k)  # high block starts all -1 (bits 0)
    v = Jab @ b
    w = Jbb @ b
    c = -hb @ b - 0.5 * (b @ w)
    high = 0
    yield high, base + c - A @ v
    for g in range(1, 1 << (n - k)):
        j = (g & -g).bit_length() - 1  # Gray code flips the lowest set bit of g
        bj = b[j]
        c += 2.0 * bj * (hb[j] + w[j])
        v -= 2.0 * bj * Jab[:, j]
        w -= 2.0 * bj * Jbb[:, j]
        b[j] = -bj
        high ^= 1 << j
        yield high, base + c - A @ v


def _as_ising(model) -> IsingModel:
    if isinstance(model, QuboModel):
        return qubo_to_ising(model)
    if isinstance(model, IsingModel):
        return model
    raise TypeError(f"expected QuboModel or IsingModel, got {type(model).__name__}")


def all_energies(model) -> np.ndarray:
    """Energy of every state, indexed by state integer."""
    m = _as_ising(model)
    if m.n > MAX_SPINS:
        raise ValueError(f"n={m.n} exceeds the exhaustive-search limit of {MAX_SPINS}")
    k = min(m.n, _LOW_BITS)
    out = np.empty(1 << m.n)
    for high, e in _blocks(m):
        out[high << k : (high + 1) << k] = e
    return out


def _state(z: int, n: int, spins: bool) -> np.ndarray:
    bits = (z >> np.arange(n)) & 1
    return (2 * bits - 1).astype(np.int8) if spins else bits.astype(np.int8)


def brute_force_min(model) -> OracleReport:
    """Exact minimum and minimizers of a QUBO or Ising model with n <= 24.

    Minimizers are returned as bit vectors for a QUBO and spin vectors for
    an Ising model; at most ``MAX_LISTED`` are listed.
    """
    m = _as_ising(model)
    n = m.n
    if n > MAX_SPINS:
        raise ValueError(f"n={n} exceeds the exhaustive-search limit of {MAX_SPINS}")
    k = min(n, _LOW_BITS)
    best = np.inf
    found: list[int] = []
    truncated = False
    for high, e in _blocks(m):
        lo = e.min()
        if lo < best - _TIE_TOL:
            best, found, truncated = lo, [], False
        elif lo > best + _TIE_TOL:
            continue
        best = min(best, lo)
        hits = np.flatnonzero(e <= best + _TIE_TOL)
        room = MAX_LISTED - len(found)
        if hits.size > room:
            truncated = True
            hits = hits[:room]
        found.extend(int(z) + (high << k) for z in hits)

    spins = isinstance(model, IsingModel)
    states = [_state(z, n, spins) for z in found]
    # Re-evaluate directly so the reported minimum carries no enumeration drift.
    if spins:
        exact = [ising_energy(model, s) for s in states]
    else:
        exact = [qubo_energy(model, x) for x in states]
    keep = [s for s, e in zip(states, exact) if e <= min(exact) + _TIE_TOL]
    return OracleReport(float(min(exact)), keep, 1 << n, truncated)
