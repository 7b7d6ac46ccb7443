"""Annealing engines: SSQA, SSA and serial Metropolis SA.

All three take an :class:`~ssqa.model.IsingModel` and return an
:class:`AnnealResult`. Energies are offset-inclusive, so for a model built
from a QUBO they equal the QUBO energy of ``(s + 1) / 2``.

SSQA keeps ``R`` replicas of the spin network. Every cycle, each spin
``(i, k)`` integrates the input::

    I = h_i + sum_j J_ij s_jk + n_rnd * r + jperp(t) * s_{i,k+1}(t - d)

into a saturating accumulator ``Is`` (range ``[-i0, i0)``, upper rail
``i0 - alpha``) and takes the sign of the result. All ``R*N`` spins update
simultaneously from pre-sweep state. SSA is the same rule with a single
replica, no inter-replica term and a scheduled ``i0``.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .model import IsingModel, ising_energy
from .rng import LANE_CYCLE, LANE_INIT, STREAM_METROPOLIS, STREAM_STOCHASTIC, CounterStream

__all__ = [
    "SsqaParams",
    "SsaParams",
    "SaParams",
    "ReplicaLattice",
    "AnnealResult",
    "jperp_schedule",
    "ssa_i0_levels",
    "ssa_i0_schedule",
    "sa_temperature",
    "integrate_clamp",
    "ssqa_sweep",
    "ssqa_run",
    "ssa_run",
    "sa_run",
    "TARGET_TOL",
    "REFRESH_CYCLES",
]

TARGET_TOL = 1e-9
# Full recomputation of local fields / energy; bounds floating drift.
REFRESH_CYCLES = 1000
_CHUNK_DRAWS = 1 << 20


@dataclass(frozen=True)
class SsqaParams:
    """SSQA settings. Defaults are the published grid-searched values with
    ``R=25``, ``tau=100`` and ``sc=1600`` (40,000 equivalent cycles)."""

    R: int = 25
    jperp_min: float = 0.0
    jperp_max: float = 0.5
    beta: int = 3
    tau: int = 100
    d: int = 1
    i0: float = 2.0
    n_rnd: float = 1.0
    alpha: float = 1.0
    sc: int = 1600
    bidirectional: bool = False

    def __post_init__(self) -> None:
        if self.R < 1:
            raise ValueError("R must be >= 1")
        if self.jperp_max < self.jperp_min:
            raise ValueError("jperp_max must be >= jperp_min")
        if self.beta < 1:
            raise ValueError("beta must be >= 1")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if self.d < 0:
            raise ValueError("d must be >= 0")
        if not self.i0 > 0:
            raise ValueError("i0 must be > 0")
        if not 0 < self.alpha <= 2 * self.i0:
            raise ValueError("alpha must lie in (0, 2*i0]")
        if self.n_rnd < 0:
            raise ValueError("n_rnd must be >= 0")
        if self.sc < 0:
            raise ValueError("sc must be >= 0")

    @property
    def cycles_per_iteration(self) -> int:
        return self.tau * (self.beta + 1)

    @property
    def iterations(self) -> float:
        return self.sc / self.cycles_per_iteration

    @property
    def ec(self) -> int:
        return self.R * self.sc


@dataclass(frozen=True)
class SsaParams:
    """SSA settings; ``i0`` grows by ``1/beta_ssa`` every ``tau_ssa`` cycles."""

    i0_min: float = 1.0
    i0_max: float = 16.0
    beta_ssa: float = 0.5
    tau_ssa: int = 10
    n_rnd: float = 1.0
    alpha: float = 1.0
    sc: int = 40000

    def __post_init__(self) -> None:
        if not 0 < self.i0_min <= self.i0_max:
            raise ValueError("need 0 < i0_min <= i0_max")
        if not 0 < self.beta_ssa < 1:
            raise ValueError("beta_ssa must lie in (0, 1)")
        if self.tau_ssa < 1:
            raise ValueError("tau_ssa must be >= 1")
        if not 0 < self.alpha <= 2 * self.i0_min:
            raise ValueError("alpha must lie in (0, 2*i0_min]")
        if self.n_rnd < 0:
            raise ValueError("n_rnd must be >= 0")
        if self.sc < 0:
            raise ValueError("sc must be >= 0")

    @property
    def cycles_per_iteration(self) -> int:
        return self.tau_ssa * len(ssa_i0_levels(self))


@dataclass(frozen=True)
class SaParams:
    """Metropolis SA with ``T(t+1) = 1 / (1/T(t) + delta_it)``.

    ``delta_it`` defaults to the increment that takes ``t_init`` to exactly
    ``t_final`` after ``cycles`` steps.
    """

    t_init: float = 1000.0
    t_final: float = 0.1
    cycles: int = 40000
    delta_it: float | None = None

    def __post_init__(self) -> None:
        if not self.t_init > self.t_final > 0:
            raise ValueError("need t_init > t_final > 0")
        if self.cycles < 1:
            raise ValueError("cycles must be >= 1")
        if self.delta_it is None:
            object.__setattr__(
                self, "delta_it", (1.0 / self.t_final - 1.0 / self.t_init) / self.cycles
            )
        if not self.delta_it > 0:
            raise ValueError("delta_it must be > 0")


@dataclass(frozen=True, eq=False)
class ReplicaLattice:
    """Spins, accumulators and delayed-spin history of an SSQA run.

    ``history[0]`` is the snapshot from ``d`` cycles ago and ``history[-1]``
    the current spins.
    """

    sigma: np.ndarray
    is_acc: np.ndarray
    history: tuple

    @classmethod
    def initial(cls, sigma, d: int) -> "ReplicaLattice":
        # Before d cycles have elapsed the delayed coupling reads the start state.
        sigma = np.asarray(sigma, dtype=np.int8)
        if sigma.ndim != 2:
            raise ValueError("sigma must be (R, N)")
        return cls(sigma, np.zeros(sigma.shape), (sigma,) * (d + 1))

    @classmethod
    def random(cls, R: int, n: int, d: int, seed: int) -> "ReplicaLattice":
        init = CounterStream(seed, STREAM_STOCHASTIC, R * n, lane=LANE_INIT)
        return cls.initial(init.signs(0)[0].reshape(R, n), d)

    @property
    def R(self) -> int:
        return self.sigma.shape[0]

    @property
    def n(self) -> int:
        return self.sigma.shape[1]


@dataclass(eq=False)
class AnnealResult:
    """Outcome of one annealing run.

    ``energy_trace[t, k]`` is the energy of replica ``k`` after ``t`` cycles
    (row 0 is the initial state); ``schedule_trace[t]`` is the annealing
    control in force during cycle ``t`` (J-perp, i0 or temperature).
    """

    engine: str
    best_energy: float
    best_state: np.ndarray
    best_replica: int
    reached_target: bool
    first_hit_cycle: int | None
    cycles_used: int
    wall_time: float
    energy_trace: np.ndarray | None = None
    schedule_trace: np.ndarray | None = None
    final_state: np.ndarray | None = field(default=None, repr=False)


def jperp_schedule(cycle: int, p: SsqaParams) -> float:
    """Staircase from ``jperp_min`` to ``jperp_max`` in ``beta`` steps of
    ``tau`` cycles, restarting every ``tau * (beta + 1)`` cycles."""
    if cycle < 0:
        raise ValueError("cycle must be >= 0")
    step = (cycle % p.cycles_per_iteration) // p.tau
    return p.jperp_min + step * (p.jperp_max - p.jperp_min) / p.beta


def ssa_i0_levels(p: SsaParams) -> list:
    levels = [float(p.i0_min)]
    while True:
        nxt = levels[-1] / p.beta_ssa
        if nxt > p.i0_max * (1 + 1e-12):
            return levels
        levels.append(nxt)


def ssa_i0_schedule(cycle: int, p: SsaParams) -> float:
    levels = ssa_i0_levels(p)
    return levels[(cycle // p.tau_ssa) % len(levels)]


def sa_temperature(cycle: int, p: SaParams) -> float:
    return 1.0 / (1.0 / p.t_init + cycle * p.delta_it)


def integrate_clamp(is_acc, inp, i0: float, alpha: float):
    """Saturating accumulator update and sign readout.

    Returns ``(is_new, sigma_new)``: the sum ``is_acc + inp`` is replaced by
    ``i0 - alpha`` when it reaches ``i0``, by ``-i0`` when it falls below
    ``-i0``, and kept otherwise; the spin is +1 where ``is_new >= 0``.
    """
    s = np.asarray(is_acc, dtype=np.float64) + inp
    is_new = np.where(s >= i0, i0 - alpha, np.where(s < -i0, -i0, s))
    sigma = np.where(is_new >= 0, 1, -1).astype(np.int8)
    return is_new, sigma


def _coupling(delayed: np.ndarray, bidirectional: bool) -> np.ndarray:
    # Row k reads replica k+1; the last replica wraps to the first.
    c = np.roll(delayed, -1, axis=0).astype(np.float64)
    if bidirectional:
        c += np.roll(delayed, 1, axis=0)
    return c


def _noise_stream(seed: int, R: int, n: int) -> CounterStream:
    return CounterStream(seed, STREAM_STOCHASTIC, R * n, lane=LANE_CYCLE)


def ssqa_sweep(
    lat: ReplicaLattice,
    m: IsingModel,
    jperp: float,
    p: SsqaParams,
    rng: CounterStream,
    cycle: int,
    i0: float | None = None,
) -> ReplicaLattice:
    """One synchronous update of every spin in every replica.

    Reference implementation: recomputes all local fields from scratch and
    returns a new lattice. ``rng`` must be the run's per-cycle noise stream;
    the draw for spin ``(i, k)`` is bit ``k*N + i`` of cycle ``cycle``.
    """
    R, n = lat.sigma.shape
    if n != m.n or R != p.R:
        raise ValueError(f"lattice {lat.sigma.shape} does not match R={p.R}, n={m.n}")
    if len(lat.history) != p.d + 1:
        raise ValueError(f"history must hold {p.d + 1} snapshots")
    if rng.width != R * n:
        raise ValueError("noise stream width must be R*N")
    i0 = p.i0 if i0 is None else i0
    s = lat.sigma.astype(np.float64)
    noise = rng.signs(cycle)[0].reshape(R, n)
    inp = m.h + s @ m.J + p.n_rnd * noise + jperp * _coupling(lat.history[0], p.bidirectional)
    is_new, sigma = integrate_clamp(lat.is_acc, inp, i0, p.alpha)
    return ReplicaLattice(sigma, is_new, lat.history[1:] + (sigma,))


class _Tracker:
    """Best-so-far bookkeeping shared by all engines."""

    def __init__(self, target: float | None):
        self.target = target
        self.best = math.inf
        self.best_state = None
        self.best_replica = 0
        self.first_hit = None

    def observe(self, cycle: int, energies: np.ndarray, states: np.ndarray) -> bool:
        k = int(np.argmin(energies))
        e = float(energies[k])
        if e < self.best:
            self.best = e
            self.best_state = np.array(states[k], dtype=np.int8)
            self.best_replica = k
        if self.first_hit is None and self.target is not None and e <= self.target + TARGET_TOL:
            self.first_hit = cycle
            return True
        return False


def _run_lattice(
    engine: str,
    m: IsingModel,
    R: int,
    sc: int,
    d: int,
    n_rnd: float,
    alpha: float,
    bidirectional: bool,
    jperp_at: Callable[[int], float],
    i0_at: Callable[[int], float],
    seed: int,
    target_energy: float | None,
    stop_at_target: bool,
    record_trace: bool,
    schedule_at: Callable[[int], float],
) -> AnnealResult:
    n = m.n
    h, J = m.h, m.J
    t0 = time.perf_counter()

    lat = ReplicaLattice.random(R, n, d, seed)
    s = lat.sigma.astype(np.float64)
    is_acc = lat.is_acc.copy()
    history = deque(lat.history, maxlen=d + 1)
    fields = h + s @ J
    noise_rng = _noise_stream(seed, R, n)
    chunk = max(1, min(512, _CHUNK_DRAWS // (R * n)))
    # Past this many flips a dense product is cheaper than a row update.
    max_sparse = max(1, n // 6)

    def energies() -> np.ndarray:
        return m.offset - 0.5 * np.einsum("kn,kn->k", h + fields, s)

    track = _Tracker(target_energy)
    trace = np.empty((sc + 1, R)) if record_trace else None
    sched = np.empty(sc + 1) if record_trace else None
    e = energies()
    if record_trace:
        trace[0] = e
        sched[0] = schedule_at(0)
    hit = track.observe(0, e, s)
    cycles = 0
    noise = None

    for t in range(sc):
        if hit and stop_at_target:
            break
        if t % chunk == 0:
            noise = noise_rng.signs(t, min(chunk, sc - t)).reshape(-1, R, n)
        jp = jperp_at(t)
        inp = fields + n_rnd * noise[t % chunk]
        if jp != 0.0:
            inp += jp * _coupling(history[0], bidirectional)
        is_acc, sigma = integrate_clamp(is_acc, inp, i0_at(t), alpha)
        s_new = sigma.astype(np.float64)
        history.append(sigma)

        ds = s_new - s
        rows, cols = np.nonzero(ds)
        if (t + 1) % REFRESH_CYCLES == 0 or rows.size > max_sparse:
            fields = h + s_new @ J
        elif rows.size:
            contrib = ds[rows, cols][:, None] * J[cols]
            urows, starts = np.unique(rows, return_index=True)
            fields[urows] += np.add.reduceat(contrib, starts, axis=0)
        s = s_new
        cycles = t + 1

        e = energies()
        if record_trace:
            trace[cycles] = e
            sched[cycles] = schedule_at(cycles)
        hit = track.observe(cycles, e, s) or hit

    wall = time.perf_counter() - t0
    best_energy = ising_energy(m, track.best_state)
    return AnnealResult(
        engine=engine,
        best_energy=best_energy,
        best_state=track.best_state,
        best_replica=track.best_replica,
        reached_target=track.first_hit is not None,
        first_hit_cycle=track.first_hit,
        cycles_used=cycles,
        wall_time=wall,
        energy_trace=None if trace is None else trace[: cycles + 1],
        schedule_trace=None if sched is None else sched[: cycles + 1],
        final_state=s.astype(np.int8),
    )


def ssqa_run(
    m: IsingModel,
    p: SsqaParams,
    seed: int,
    target_energy: float | None = None,
    stop_at_target: bool = True,
    record_trace: bool = False,
    i0_schedule: Callable[[int], float] | None = None,
) -> AnnealResult:
    """Stochastic simulated quantum annealing.

    Spins start as independent fair draws, accumulators at zero; J-perp
    follows :func:`jperp_schedule` and ``i0`` is constant unless
    ``i0_schedule`` is given. The minimum energy over all replicas and
    cycles is reported. With a target and ``stop_at_target`` the run ends at
    the first cycle that reaches it.
    """
    i0_at = i0_schedule if i0_schedule is not None else (lambda t: p.i0)
    jperp_at = lambda t: jperp_schedule(t, p)  # noqa: E731
    return _run_lattice(
        "ssqa", m, p.R, p.sc, p.d, p.n_rnd, p.alpha, p.bidirectional,
        jperp_at, i0_at, seed, target_energy, stop_at_target, record_trace, jperp_at,
    )


def ssa_run(
    m: IsingModel,
    p: SsaParams,
    seed: int,
    target_energy: float | None = None,
    stop_at_target: bool = True,
    record_trace: bool = False,
) -> AnnealResult:
    """Stochastic simulated annealing: one spin network, parallel update,
    geometric ``i0`` schedule that restarts each iteration."""
    levels = ssa_i0_levels(p)
    i0_at = lambda t: levels[(t // p.tau_ssa) % len(levels)]  # noqa: E731
    return _run_lattice(
        "ssa", m, 1, p.sc, 0, p.n_rnd, p.alpha, False,
        lambda t: 0.0, i0_at, seed, target_energy, stop_at_target, record_trace, i0_at,
    )


def sa_run(
    m: IsingModel,
    p: SaParams,
    seed: int,
    target_energy: float | None = None,
    stop_at_target: bool = True,
    record_trace: bool = False,
) -> AnnealResult:
    """Serial Metropolis annealing, one proposed single-spin flip per cycle."""
    n = m.n
    h, J = m.h, m.J
    t0 = time.perf_counter()

    s = CounterStream(seed, STREAM_METROPOLIS, n, lane=LANE_INIT).signs(0)[0].astype(np.float64)
    draws = CounterStream(seed, STREAM_METROPOLIS, 128, lane=LANE_CYCLE)
    fields = h + J @ s
    energy = ising_energy(m, s)
    track = _Tracker(target_energy)
    trace = np.empty(p.cycles + 1) if record_trace else None
    temps = np.empty(p.cycles + 1) if record_trace else None
    if record_trace:
        trace[0] = energy
        temps[0] = p.t_init
    hit = track.observe(0, np.array([energy]), s[None, :])
    inv_t0, dit = 1.0 / p.t_init, p.delta_it
    chunk = 4096
    cycles = 0
    u = None

    for t in range(p.cycles):
        if hit and stop_at_target:
            break
        if t % chunk == 0:
            u = draws.uniforms(t, min(chunk, p.cycles - t)).tolist()
        u_pick, u_acc = u[t % chunk]
        i = int(u_pick * n)
        delta = 2.0 * s[i] * fields[i]
        if delta <= 0.0 or u_acc < math.exp(-delta * (inv_t0 + t * dit)):
            s[i] = -s[i]
            fields += (2.0 * s[i]) * J[i]
            energy += delta
        cycles = t + 1
        if cycles % REFRESH_CYCLES == 0:
            fields = h + J @ s
            energy = ising_energy(m, s)
        if record_trace:
            trace[cycles] = energy
            temps[cycles] = 1.0 / (inv_t0 + cycles * dit)
        if energy < track.best or (
            track.first_hit is None
            and track.target is not None
            and energy <= track.target + TARGET_TOL
        ):
            hit = track.observe(cycles, np.array([energy]), s[None, :]) or hit

    wall = time.perf_counter() - t0
    return AnnealResult(
        engine="sa",
        best_energy=ising_energy(m, track.best_state),
        best_state=track.best_state,
        best_replica=0,
        reached_target=track.first_hit is not None,
        first_hit_cycle=track.first_hit,
        cycles_used=cycles,
        wall_time=wall,
        energy_trace=None if trace is None else trace[: cycles + 1, None],
        schedule_trace=None if temps is None else temps[: cycles + 1],
        final_state=s.astype(np.int8),
    )
