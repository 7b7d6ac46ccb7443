"""Command-line entry point: ``ssqa <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 runtime failure. Paths of files
written go to stdout, one per line; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .annealers import sa_run, ssa_run, ssqa_run
from .bench import (
    WORKERS_ENV,
    case_suite,
    emit_results,
    load_manifest,
    replay_manifest,
    replica_sweep,
    run_cases,
    run_trials,
    _problem,
)
from .config import KEYS, ConfigError, parse_config
from .fileio import ModelFormatError, read_model, write_instance, write_model, write_trace_csv
from .model import QuboModel, qubo_to_ising
from .oracle import brute_force_min
from .problems import DEFAULT_C1, DEFAULT_C2, build_gi_qubo, generate_gi

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    """One ``--flag`` per config key; all default to None (= not given)."""
    p.add_argument("--config", help="key = value configuration file")
    for key, (conv, help_text) in KEYS.items():
        flag = "--" + key.replace("_", "-")
        if key == "bidirectional":
            p.add_argument("--bidirectional-coupling", dest=key, action="store_const",
                           const=True, default=None, help=help_text)
        elif key == "permute":
            p.add_argument(flag, dest=key, action="store_const", const=True, default=None,
                           help=help_text)
        else:
            p.add_argument(flag, dest=key, default=None, metavar=key.upper(), help=help_text)
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker processes (default: ${WORKERS_ENV} or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ssqa", description="Stochastic simulated quantum annealing toolkit.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    g = sub.add_parser("generate", help="write a graph-isomorphism instance and its QUBO")
    g.add_argument("--n-nodes", type=int, required=True)
    g.add_argument("--edge-prob", type=float, default=0.5)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--permute", action="store_true")
    g.add_argument("--c1", type=float, default=DEFAULT_C1)
    g.add_argument("--c2", type=float, default=DEFAULT_C2)
    g.add_argument("--ising", action="store_true", help="also write the Ising form")
    g.add_argument("--out", default=".", help="output directory")
    g.add_argument("--stem", default=None)

    a = sub.add_parser("anneal", help="one traced run; writes a per-cycle energy CSV")
    _add_config_flags(a)
    a.add_argument("--out", default=".", help="output directory")

    b = sub.add_parser("bench", help="run a trial battery (P_s, TTS)")
    _add_config_flags(b)
    b.add_argument("--replay", help="re-run every config in a results manifest")
    b.add_argument("--out", default=".", help="output directory")

    s = sub.add_parser("sweep-replicas", help="SSQA batteries over several R at fixed EC")
    _add_config_flags(s)
    s.add_argument("--r-values", default="2,10,20,40", help="comma-separated R list")
    s.add_argument("--out", default=".", help="output directory")

    c = sub.add_parser("cases", help="the five EC / tau case settings")
    _add_config_flags(c)
    c.add_argument("--cases", default=None, help="comma-separated labels (default: all)")
    c.add_argument("--out", default=".", help="output directory")

    o = sub.add_parser("oracle", help="exact ground state of a small model file")
    o.add_argument("model_file")
    return ap


def _config(ns, **forced):
    overrides = {k: getattr(ns, k) for k in KEYS if getattr(ns, k, None) is not None}
    overrides.update(forced)
    return parse_config(ns.config, overrides)


def _cmd_generate(ns) -> list:
    inst = generate_gi(ns.n_nodes, ns.edge_prob, ns.seed, ns.permute, ns.c1, ns.c2)
    out = Path(ns.out)
    stem = ns.stem or f"gi_n{ns.n_nodes}_s{ns.seed}"
    manifest = write_instance(inst, out, stem, ns.edge_prob)
    q = build_gi_qubo(inst)
    paths = [manifest.parent / f"{stem}.graph1.txt", manifest.parent / f"{stem}.graph2.txt",
             manifest, write_model(q, out / f"{stem}.qubo")]
    if ns.ising:
        paths.append(write_model(qubo_to_ising(q), out / f"{stem}.ising"))
    return paths


def _cmd_anneal(ns) -> list:
    if ns.seed is None:
        raise UsageError("anneal: --seed is required")
    cfg = _config(ns, trials=1)
    m, target = _problem(cfg, cfg.base_seed)
    runner = {"ssqa": ssqa_run, "ssa": ssa_run, "sa": sa_run}[cfg.engine]
    res = runner(m, cfg.engine_params(), cfg.base_seed, target_energy=target, record_trace=True)
    print(f"best_energy={res.best_energy!r} reached_target={res.reached_target} "
          f"first_hit_cycle={res.first_hit_cycle}", file=sys.stderr)
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    return [write_trace_csv(res, out / f"trace_{cfg.engine}_s{cfg.base_seed}.csv")]


def _cmd_bench(ns) -> list:
    if ns.replay:
        records = replay_manifest(ns.replay, ns.workers)
        old = [trials for _, trials in load_manifest(ns.replay)]
        same = all([t.outcome() for t in r.per_trial] == [t.outcome() for t in o]
                   for r, o in zip(records, old))
        print(f"replay {'identical' if same else 'DIFFERS'}", file=sys.stderr)
        paths = emit_results(records, ns.out, stem="replay")
        if not same:
            raise RuntimeError("replayed per-trial results differ from the manifest")
        return paths
    if ns.seed is None:
        raise UsageError("bench: --seed is required")
    rec = run_trials(_config(ns), ns.workers)
    print(f"{rec.engine} n={rec.n} r={rec.r} p_s={rec.p_s} tts={rec.row()['tts_s']}",
          file=sys.stderr)
    return emit_results([rec], ns.out)


def _cmd_sweep(ns) -> list:
    if ns.seed is None:
        raise UsageError("sweep-replicas: --seed is required")
    try:
        rs = [int(v) for v in ns.r_values.split(",") if v.strip()]
    except ValueError:
        raise UsageError("--r-values must be comma-separated integers") from None
    cfg = _config(ns, engine="ssqa", replicas=ns.replicas or rs[0])
    records = replica_sweep(replace(cfg, label=""), rs, ns.workers)
    return emit_results(records, ns.out, stem="sweep")


def _cmd_cases(ns) -> list:
    if ns.seed is None:
        raise UsageError("cases: --seed is required")
    cfg = _config(ns, engine="ssqa", replicas=ns.replicas or 25)
    labels = None if ns.cases is None else [s.strip() for s in ns.cases.split(",")]
    known = {c.label for c in case_suite()}
    if labels is not None and not set(labels) <= known:
        raise UsageError(f"unknown case label; choose from {sorted(known)}")
    return emit_results(run_cases(cfg, labels, ns.workers), ns.out, stem="cases")


def _cmd_oracle(ns) -> list:
    model = read_model(ns.model_file)
    rep = brute_force_min(model)
    kind = "bits" if isinstance(model, QuboModel) else "spins"
    print(f"min_energy {rep.min_energy!r}")
    print(f"ground_states {rep.n_ground_states}{'+' if rep.truncated else ''}")
    for s in rep.ground_states[:16]:
        print(f"{kind} " + " ".join(str(int(v)) for v in s))
    return []


_COMMANDS = {
    "generate": _cmd_generate,
    "anneal": _cmd_anneal,
    "bench": _cmd_bench,
    "sweep-replicas": _cmd_sweep,
    "cases": _cmd_cases,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            parser.print_help(sys.stderr)
            return 1
        paths = _COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"ssqa: config error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (ModelFormatError, OSError, ValueError, RuntimeError) as exc:
        print(f"ssqa: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
