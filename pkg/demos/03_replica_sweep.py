"""
How many replicas?
==================

Equivalent cycles (replicas times cycles) are held fixed, so adding
replicas shortens every replica's run. This sweep shows the trade-off on
a 12-node problem with a handful of trials; the CLI's ``sweep-replicas``
does the same at full scale.
"""

from ssqa.annealers import SsqaParams
from ssqa.bench import BenchConfig, ProblemSpec, emit_results, replica_sweep

cfg = BenchConfig(
    engine="ssqa",
    problem=ProblemSpec(n_nodes=12),
    ec=8000,
    trials=10,
    base_seed=0,
    ssqa=SsqaParams(R=2),
)

records = replica_sweep(cfg, [1, 2, 5, 10, 20, 40])
print(f"{'R':>3} {'SC':>5} {'P_s':>5} {'t/trial':>8} {'TTS':>8}")
for r in records:
    tts = "-" if r.tts is None else f"{r.tts:.3f}"
    print(f"{r.r:>3} {cfg.ec // r.r:>5} {r.p_s:>5.2f} {r.t:>8.3f} {tts:>8}")

for path in emit_results(records, "demo_output", stem="sweep"):
    print(path)
