"""Trial batteries, success probability, equivalent cycles and TTS.

A benchmark run is fully described by a :class:`BenchConfig`. Trial ``i``
uses seed ``base_seed + i`` both for the annealer and (with
``fresh_instance``) for the generated problem, so results depend only on
the config, never on worker count or completion order.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from pathlib import Path

from . import __version__
from .annealers import SaParams, SsaParams, SsqaParams, sa_run, ssa_run, ssqa_run
from .model import IsingModel, QuboModel, qubo_to_ising
from .oracle import MAX_SPINS, brute_force_min
from .problems import DEFAULT_C1, DEFAULT_C2, build_gi_qubo, generate_gi

__all__ = [
    "ProblemSpec",
    "BenchConfig",
    "TrialResult",
    "BenchRecord",
    "CaseSpec",
    "compute_ec",
    "compute_tts",
    "run_trials",
    "replica_sweep",
    "case_suite",
    "run_cases",
    "emit_results",
    "load_manifest",
    "replay_manifest",
    "ENGINES",
]

ENGINES = ("ssqa", "ssa", "sa")
WORKERS_ENV = "SSQA_WORKERS"


def compute_ec(r: int, sc: int) -> int:
    """Equivalent cycles: replicas times simulation cycles."""
    if r < 1 or sc < 1:
        raise ValueError("r and sc must be >= 1")
    return r * sc


def compute_tts(p_s: float, t: float, p_t: float = 0.99) -> float | None:
    """Time to reach the ground state at least once with confidence ``p_t``.

    Returns ``t * ln(1 - p_t) / ln(1 - p_s)``. When every trial succeeded
    (``p_s == 1``) the value tends to zero and ``0.0`` is returned; when none
    did (``p_s == 0``) it is undefined and ``None`` is returned.
    """
    if not 0.0 < p_t < 1.0:
        raise ValueError("p_t must lie strictly between 0 and 1")
    if not 0.0 <= p_s <= 1.0:
        raise ValueError("p_s must lie in [0, 1]")
    if p_s == 1.0:
        return 0.0
    if p_s == 0.0:
        return None
    return t * math.log1p(-p_t) / math.log1p(-p_s)


@dataclass(frozen=True)
class ProblemSpec:
    """Either a graph-isomorphism generator (``n_nodes``) or a model file."""

    n_nodes: int | None = None
    edge_prob: float = 0.5
    permute: bool = False
    c1: float = DEFAULT_C1
    c2: float = DEFAULT_C2
    model_path: str | None = None

    def __post_init__(self) -> None:
        if (self.n_nodes is None) == (self.model_path is None):
            raise ValueError("give exactly one of n_nodes or model_path")
        if self.n_nodes is not None and self.n_nodes < 1:
            raise ValueError("n_nodes must be >= 1")


@dataclass(frozen=True)
class BenchConfig:
    engine: str
    problem: ProblemSpec
    ec: int = 40000
    trials: int = 100
    p_t: float = 0.99
    base_seed: int = 0
    fresh_instance: bool = True
    target: float | None = None
    ssqa: SsqaParams = field(default_factory=SsqaParams)
    ssa: SsaParams = field(default_factory=SsaParams)
    sa: SaParams = field(default_factory=SaParams)
    label: str = ""

    def __post_init__(self) -> None:
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.p_t < 1.0:
            raise ValueError("p_t must lie strictly between 0 and 1")
        if self.ec < 1:
            raise ValueError("ec must be >= 1")
        if self.base_seed < 0:
            raise ValueError("base_seed must be >= 0")
        if self.engine == "ssqa" and self.ec < self.ssqa.R:
            raise ValueError("ec must be at least R for SSQA")

    @property
    def replicas(self) -> int:
        return self.ssqa.R if self.engine == "ssqa" else 1

    def engine_params(self):
        """Engine parameters with the cycle budget set from ``ec``.

        SSQA gets ``sc = ec // R`` (integer division); SSA and SA run ``ec``
        cycles on their single spin network.
        """
        if self.engine == "ssqa":
            return replace(self.ssqa, sc=self.ec // self.ssqa.R)
        if self.engine == "ssa":
            return replace(self.ssa, sc=self.ec)
        sa = self.sa
        return SaParams(sa.t_init, sa.t_final, self.ec, None if _default_dit(sa) else sa.delta_it)

    @property
    def tau(self) -> int:
        return {"ssqa": self.ssqa.tau, "ssa": self.ssa.tau_ssa, "sa": 1}[self.engine]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sa"]["delta_it"] = None if _default_dit(self.sa) else self.sa.delta_it
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BenchConfig":
        d = dict(d)
        d["problem"] = ProblemSpec(**d["problem"])
        d["ssqa"] = SsqaParams(**d["ssqa"])
        d["ssa"] = SsaParams(**d["ssa"])
        d["sa"] = SaParams(**d["sa"])
        return cls(**d)


def _default_dit(sa: SaParams) -> bool:
    return sa.delta_it == SaParams(sa.t_init, sa.t_final, sa.cycles).delta_it


@dataclass(frozen=True)
class TrialResult:
    seed: int
    reached_target: bool
    first_hit_cycle: int | None
    best_energy: float
    wall_time: float

    def outcome(self) -> tuple:
        """Everything except timing; bitwise reproducible."""
        return (self.seed, self.reached_target, self.first_hit_cycle, self.best_energy)


@dataclass
class BenchRecord:
    engine: str
    n: int
    r: int
    ec: int
    tau: int
    trials: int
    p_s: float
    t: float
    tts: float | None
    saturated: bool
    seed: int
    per_trial: list = field(default_factory=list)
    label: str = ""
    config: BenchConfig | None = None

    @property
    def successes(self) -> int:
        return sum(tr.reached_target for tr in self.per_trial)

    def row(self) -> dict:
        return {
            "label": self.label,
            "engine": self.engine,
            "n": self.n,
            "r": self.r,
            "ec": self.ec,
            "tau": self.tau,
            "trials": self.trials,
            "p_s": self.p_s,
            "t_mean_s": self.t,
            "tts_s": "-" if self.tts is None else self.tts,
            "saturated": self.saturated,
            "seed": self.seed,
        }


@lru_cache(maxsize=4)
def _load_model(path: str) -> IsingModel:
    from .fileio import read_model

    m = read_model(path)
    return qubo_to_ising(m) if isinstance(m, QuboModel) else m


def _problem(cfg: BenchConfig, seed: int) -> tuple[IsingModel, float]:
    """Ising model and target energy for one trial."""
    p = cfg.problem
    if p.model_path is not None:
        m = _load_model(p.model_path)
        if cfg.target is not None:
            return m, cfg.target
        if m.n > MAX_SPINS:
            raise ValueError(
                f"model has {m.n} spins; give a target energy (oracle limit is {MAX_SPINS})"
            )
        return m, brute_force_min(m).min_energy
    inst_seed = seed if cfg.fresh_instance else cfg.base_seed
    inst = generate_gi(p.n_nodes, p.edge_prob, inst_seed, p.permute, p.c1, p.c2)
    target = 0.0 if cfg.target is None else cfg.target
    return qubo_to_ising(build_gi_qubo(inst)), target


_RUNNERS = {"ssqa": ssqa_run, "ssa": ssa_run, "sa": sa_run}


def _run_trial(cfg: BenchConfig, index: int) -> TrialResult:
    seed = cfg.base_seed + index
    m, target = _problem(cfg, seed)
    res = _RUNNERS[cfg.engine](
        m, cfg.engine_params(), seed, target_energy=target, stop_at_target=False
    )
    return TrialResult(seed, res.reached_target, res.first_hit_cycle, res.best_energy, res.wall_time)


def _default_workers() -> int:
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


def _problem_size(cfg: BenchConfig) -> int:
    p = cfg.problem
    return p.n_nodes**2 if p.n_nodes is not None else _load_model(p.model_path).n


def run_trials(cfg: BenchConfig, workers: int | None = None) -> BenchRecord:
    """Run ``cfg.trials`` independent annealing runs and aggregate them."""
    workers = _default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError("workers must be >= 1")
    n = _problem_size(cfg)
    if workers == 1 or cfg.trials == 1:
        per_trial = [_run_trial(cfg, i) for i in range(cfg.trials)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(_run_trial, [cfg] * cfg.trials, range(cfg.trials)))
    p_s = sum(tr.reached_target for tr in per_trial) / cfg.trials
    t = sum(tr.wall_time for tr in per_trial) / cfg.trials
    return BenchRecord(
        engine=cfg.engine,
        n=n,
        r=cfg.replicas,
        ec=cfg.ec,
        tau=cfg.tau,
        trials=cfg.trials,
        p_s=p_s,
        t=t,
        tts=compute_tts(p_s, t, cfg.p_t),
        saturated=p_s == 1.0,
        seed=cfg.base_seed,
        per_trial=per_trial,
        label=cfg.label,
        config=cfg,
    )


def replica_sweep(cfg: BenchConfig, r_values, workers: int | None = None) -> list:
    """One SSQA battery per replica count at fixed ``cfg.ec``."""
    if cfg.engine != "ssqa":
        raise ValueError("replica sweeps apply to the ssqa engine")
    records = []
    for r in r_values:
        if r < 1 or cfg.ec // r < 1:
            raise ValueError(f"R={r} leaves no simulation cycles at ec={cfg.ec}")
        sub = replace(cfg, ssqa=replace(cfg.ssqa, R=int(r)), label=cfg.label or f"R={r}")
        records.append(run_trials(sub, workers))
    return records


@dataclass(frozen=True)
class CaseSpec:
    label: str
    ec: int
    tau: int
    iterations: float

    def apply(self, cfg: BenchConfig) -> BenchConfig:
        return replace(cfg, engine="ssqa", ec=self.ec, ssqa=replace(cfg.ssqa, tau=self.tau),
                       label=self.label)


_CASES = (("case1", 10000, 50), ("case2", 10000, 100), ("case3", 20000, 50),
          ("case4", 20000, 100), ("case5", 40000, 100))


def case_suite(R: int = 25, beta: int = 3) -> list:
    """The five EC / tau combinations, with iterations ``EC/R/(tau*(beta+1))``."""
    return [CaseSpec(label, ec, tau, ec / R / (tau * (beta + 1))) for label, ec, tau in _CASES]


def run_cases(cfg: BenchConfig, labels=None, workers: int | None = None) -> list:
    cases = case_suite(cfg.ssqa.R, cfg.ssqa.beta)
    if labels is not None:
        cases = [c for c in cases if c.label in set(labels)]
    return [run_trials(c.apply(cfg), workers) for c in cases]


_CSV_COLUMNS = ["label", "engine", "n", "r", "ec", "tau", "trials", "p_s", "t_mean_s",
                "tts_s", "saturated", "seed"]


def _write_csv(path: Path, columns, rows) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
    return path


def emit_results(records, out_dir, formats=("csv", "json"), stem: str = "results") -> list:
    """Write summary CSV, JSON manifest and plot-data CSVs; returns paths."""
    if not records:
        raise ValueError("no records to emit")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    if "csv" in formats:
        paths.append(_write_csv(out / f"{stem}.csv", _CSV_COLUMNS, [r.row() for r in records]))
        # Success probability, time and TTS against R (replica sweeps) and
        # against problem size per case label (case suites).
        paths.append(_write_csv(
            out / f"{stem}_vs_r.csv", ["n", "ec", "r", "p_s", "t_mean_s", "tts_s"],
            [r.row() for r in sorted(records, key=lambda r: (r.n, r.ec, r.r))],
        ))
        paths.append(_write_csv(
            out / f"{stem}_vs_n.csv", ["label", "engine", "n", "ec", "tau", "p_s", "tts_s"],
            [r.row() for r in sorted(records, key=lambda r: (r.label, r.engine, r.n))],
        ))
    if "json" in formats:
        doc = {
            "artifact": "ssqa",
            "version": __version__,
            "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "records": [
                {
                    "config": r.config.to_dict() if r.config is not None else None,
                    "summary": r.row(),
                    "per_trial": [asdict(tr) for tr in r.per_trial],
                }
                for r in records
            ],
        }
        path = out / f"{stem}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        paths.append(path)
    return paths


def load_manifest(path) -> list:
    """``(config, per_trial)`` pairs from a JSON manifest."""
    doc = json.loads(Path(path).read_text())
    return [
        (BenchConfig.from_dict(rec["config"]), [TrialResult(**tr) for tr in rec["per_trial"]])
        for rec in doc["records"]
    ]


def replay_manifest(path, workers: int | None = None) -> list:
    """Re-run every config stored in a manifest."""
    return [run_trials(cfg, workers) for cfg, _ in load_manifest(path)]
