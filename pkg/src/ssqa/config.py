"""Key-value configuration files for benchmark runs.

Format: one ``key = value`` per line, ``#`` starts a comment. Keys use
underscores (``jperp_max``); the matching command-line flag uses dashes
(``--jperp-max``). Precedence is flag > file > built-in default, and
unknown keys are rejected.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .annealers import SaParams, SsaParams, SsqaParams
from .bench import BenchConfig, ProblemSpec

__all__ = ["ConfigError", "KEYS", "parse_config", "read_config_file"]


class ConfigError(ValueError):
    pass


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(text):
    return None if text is None or str(text).lower() in ("", "none") else float(text)


# key -> (converter, help)
KEYS = {
    "engine": (str, "annealer: ssqa, ssa or sa"),
    # SSQA
    "replicas": (int, "SSQA replica count R (required for ssqa)"),
    "tau": (int, "SSQA cycles per J-perp step"),
    "beta": (int, "SSQA J-perp steps per iteration"),
    "jperp_min": (float, "SSQA minimum inter-replica coupling"),
    "jperp_max": (float, "SSQA maximum inter-replica coupling"),
    "delay": (int, "SSQA coupling delay d in cycles"),
    "i0": (float, "SSQA accumulator bound"),
    "n_rnd": (float, "noise magnitude (SSQA and SSA)"),
    "alpha": (float, "accumulator resolution (SSQA and SSA)"),
    "sc": (int, "SSQA simulation cycles; ec = replicas * sc when ec is not given"),
    "bidirectional": (_bool, "SSQA couples to both neighbouring replicas"),
    # SSA
    "i0_min": (float, "SSA initial pseudo inverse temperature"),
    "i0_max": (float, "SSA final pseudo inverse temperature"),
    "beta_ssa": (float, "SSA schedule multiplier (i0 <- i0 / beta_ssa)"),
    "tau_ssa": (int, "SSA cycles per i0 step"),
    # SA
    "t_init": (float, "SA initial temperature"),
    "t_final": (float, "SA final temperature"),
    "delta_it": (_opt_float, "SA inverse-temperature increment (default: spans t_init..t_final)"),
    # harness
    "ec": (int, "equivalent cycles (R * SC) per trial"),
    "trials": (int, "number of trials"),
    "p_t": (float, "target probability for TTS"),
    "seed": (int, "base seed; trial i uses seed + i"),
    "fresh_instance": (_bool, "generate a new instance per trial"),
    "target": (_opt_float, "target energy (default 0 for GI, oracle for small model files)"),
    # problem
    "n_nodes": (int, "graph-isomorphism instance size (nodes per graph)"),
    "edge_prob": (float, "edge probability of generated graphs"),
    "permute": (_bool, "randomly relabel graph 2"),
    "c1": (float, "vertex-mapping penalty weight"),
    "c2": (float, "edge-inconsistency penalty weight"),
    "model": (str, "model file to anneal instead of a generated instance"),
}


def read_config_file(path) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _convert(raw: dict) -> dict:
    out = {}
    for key, value in raw.items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        conv = KEYS[key][0]
        try:
            out[key] = value if not isinstance(value, str) or conv is str else conv(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}") from None
    return out


def parse_config(path=None, overrides: dict | None = None) -> BenchConfig:
    """Resolve a :class:`BenchConfig` from an optional file plus overrides.

    ``overrides`` maps keys to values (strings or already-typed); ``None``
    values are ignored so argparse namespaces can be passed straight in.
    """
    values = read_config_file(path) if path is not None else {}
    values = _convert(values)
    values.update(_convert({k: v for k, v in (overrides or {}).items() if v is not None}))

    engine = values.get("engine", "ssqa")
    try:
        ssqa_kw = {
            "R": values.get("replicas"),
            "tau": values.get("tau"),
            "beta": values.get("beta"),
            "jperp_min": values.get("jperp_min"),
            "jperp_max": values.get("jperp_max"),
            "d": values.get("delay"),
            "i0": values.get("i0"),
            "n_rnd": values.get("n_rnd"),
            "alpha": values.get("alpha"),
            "bidirectional": values.get("bidirectional"),
        }
        ssqa = replace(SsqaParams(), **{k: v for k, v in ssqa_kw.items() if v is not None})
        ssa_kw = {k: values.get(k) for k in ("i0_min", "i0_max", "beta_ssa", "tau_ssa", "n_rnd", "alpha")}
        ssa = replace(SsaParams(), **{k: v for k, v in ssa_kw.items() if v is not None})
        sa_kw = {k: values.get(k) for k in ("t_init", "t_final", "delta_it")}
        sa = SaParams(**{k: v for k, v in sa_kw.items() if v is not None})

        if engine == "ssqa" and "replicas" not in values:
            raise ConfigError("the ssqa engine needs 'replicas' (--replicas)")
        ec = values.get("ec")
        if "sc" in values:
            if engine != "ssqa":
                raise ConfigError("'sc' applies to ssqa only; use 'ec' for ssa/sa")
            implied = ssqa.R * values["sc"]
            if ec is not None and ec != implied:
                raise ConfigError(f"ec={ec} disagrees with replicas*sc={implied}")
            ec = implied
        if ec is None:
            ec = 40000

        n_nodes = values.get("n_nodes")
        model = values.get("model")
        if n_nodes is None and model is None:
            raise ConfigError("need a problem: 'n_nodes' or 'model'")
        problem_kw = {k: values[k] for k in ("edge_prob", "permute", "c1", "c2") if k in values}
        problem = ProblemSpec(
            n_nodes=None if model is not None else n_nodes, model_path=model, **problem_kw
        )
        kw = {"trials": values.get("trials"), "p_t": values.get("p_t"),
              "base_seed": values.get("seed"), "fresh_instance": values.get("fresh_instance"),
              "target": values.get("target")}
        return BenchConfig(
            engine=engine, problem=problem, ec=ec, ssqa=ssqa, ssa=ssa, sa=sa,
            **{k: v for k, v in kw.items() if v is not None},
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None

