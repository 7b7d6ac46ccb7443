"""Plain-text file formats.

Model files
-----------
Lines starting with ``#`` and blank lines are ignored. Indices are 0-based.

QUBO::

    qubo <n> [offset]
    <i> <j> <value>        one line per nonzero Q[i, j], i <= j

Ising::

    ising <n> <offset>
    bias
    <i> <i> <value>        one line per nonzero h[i]
    coupling
    <i> <j> <value>        one line per nonzero J[i, j], i < j

A coordinate may appear at most once. Values are written with ``repr`` so
files round-trip exactly.

Graph files
-----------
First line ``n_nodes``, then one ``u v`` edge per line with 1-based
vertices.

Instance manifests are JSON documents naming the two graph files plus
``c1``, ``c2``, ``seed``, ``permute``, ``edge_prob`` and ``truth_perm``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .annealers import AnnealResult
from .model import IsingModel, QuboModel
from .problems import GiInstance, Graph

__all__ = [
    "ModelFormatError",
    "write_model",
    "read_model",
    "write_graph",
    "read_graph",
    "write_instance",
    "read_instance",
    "write_trace_csv",
]


class ModelFormatError(ValueError):
    pass


def _lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line.split()


def write_model(model, path) -> Path:
    path = Path(path)
    out = []
    if isinstance(model, QuboModel):
        out.append(f"qubo {model.n} {model.offset!r}")
        for i, j in zip(*np.nonzero(model.Q)):
            out.append(f"{i} {j} {float(model.Q[i, j])!r}")
    elif isinstance(model, IsingModel):
        out.append(f"ising {model.n} {model.offset!r}")
        out.append("bias")
        for i in np.flatnonzero(model.h):
            out.append(f"{i} {i} {float(model.h[i])!r}")
        out.append("coupling")
        for i, j in zip(*np.nonzero(np.triu(model.J, 1))):
            out.append(f"{i} {j} {float(model.J[i, j])!r}")
    else:
        raise TypeError(f"cannot write {type(model).__name__}")
    path.write_text("\n".join(out) + "\n")
    return path


def read_model(path):
    """Parse a model file into a :class:`QuboModel` or :class:`IsingModel`."""
    lines = iter(_lines(path))
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise ModelFormatError(f"{path}: empty model file") from None

    def fail(msg, at=lineno):
        raise ModelFormatError(f"{path}:{at}: {msg}")

    kind = head[0]
    if kind not in ("qubo", "ising"):
        fail(f"unknown model kind {kind!r}")
    if kind == "ising" and len(head) != 3 or kind == "qubo" and len(head) not in (2, 3):
        fail("malformed header")
    try:
        n = int(head[1])
        offset = float(head[2]) if len(head) == 3 else 0.0
    except ValueError:
        fail("malformed header")
    if n < 1:
        fail("n must be positive")

    mat = np.zeros((n, n))
    h = np.zeros(n)
    seen = set()
    section = "entries" if kind == "qubo" else None
    for lineno, tok in lines:
        if kind == "ising" and len(tok) == 1 and tok[0] in ("bias", "coupling"):
            section = tok[0]
            continue
        if len(tok) != 3:
            fail("expected '<i> <j> <value>'", lineno)
        if section is None:
            fail("entry before 'bias' or 'coupling' section", lineno)
        try:
            i, j, val = int(tok[0]), int(tok[1]), float(tok[2])
        except ValueError:
            fail("malformed entry", lineno)
        if not (0 <= i < n and 0 <= j < n):
            fail(f"index out of range 0..{n - 1}", lineno)
        if (section, i, j) in seen:
            fail(f"duplicate entry ({i}, {j})", lineno)
        seen.add((section, i, j))
        if section == "entries":
            if i > j:
                fail("QUBO entries need i <= j", lineno)
            mat[i, j] = val
        elif section == "bias":
            if i != j:
                fail("bias entries are written 'i i value'", lineno)
            h[i] = val
        else:
            if i >= j:
                fail("coupling entries need i < j", lineno)
            mat[i, j] = mat[j, i] = val
    if kind == "qubo":
        return QuboModel(mat, offset)
    return IsingModel(h, mat, offset)


def write_graph(g: Graph, path) -> Path:
    path = Path(path)
    lines = [str(g.n_nodes)] + [f"{u} {v}" for u, v in sorted(g.edges)]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_graph(path) -> Graph:
    lines = iter(_lines(path))
    try:
        _, head = next(lines)
        n = int(head[0])
    except (StopIteration, ValueError, IndexError):
        raise ModelFormatError(f"{path}: first line must be the node count") from None
    edges = []
    for lineno, tok in lines:
        if len(tok) != 2:
            raise ModelFormatError(f"{path}:{lineno}: expected 'u v'")
        edges.append((int(tok[0]), int(tok[1])))
    if len(set(tuple(sorted(e)) for e in edges)) != len(edges):
        raise ModelFormatError(f"{path}: duplicate edge")
    return Graph(n, frozenset(edges))


def write_instance(inst: GiInstance, directory, stem: str = "instance", edge_prob=None) -> Path:
    """Write both graphs and a JSON manifest; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    g1 = write_graph(inst.graph1, directory / f"{stem}.graph1.txt")
    g2 = write_graph(inst.graph2, directory / f"{stem}.graph2.txt")
    doc = {
        "n_nodes": inst.n_nodes,
        "graph1": g1.name,
        "graph2": g2.name,
        "c1": inst.c1,
        "c2": inst.c2,
        "seed": inst.seed,
        "permute": inst.permute,
        "edge_prob": edge_prob,
        "truth_perm": list(inst.truth_perm) if inst.truth_perm is not None else None,
    }
    path = directory / f"{stem}.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def read_instance(path) -> GiInstance:
    path = Path(path)
    doc = json.loads(path.read_text())
    g1 = read_graph(path.parent / doc["graph1"])
    g2 = read_graph(path.parent / doc["graph2"])
    truth = doc.get("truth_perm")
    return GiInstance(
        g1, g2, doc["c1"], doc["c2"],
        tuple(truth) if truth is not None else None,
        seed=doc.get("seed"), permute=bool(doc.get("permute", False)),
    )


_SCHEDULE_COLUMN = {"ssqa": "jperp", "ssa": "i0", "sa": "temperature"}


def write_trace_csv(result: AnnealResult, path) -> Path:
    """Dump ``cycle, replica, energy, <control>`` rows from a traced run.

    The last column is ``jperp`` for SSQA, ``i0`` for SSA and
    ``temperature`` for SA.
    """
    if result.energy_trace is None:
        raise ValueError("run was not traced; pass record_trace=True")
    path = Path(path)
    trace = result.energy_trace
    sched = result.schedule_trace
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cycle", "replica", "energy", _SCHEDULE_COLUMN.get(result.engine, "schedule")])
        for t in range(trace.shape[0]):
            for k in range(trace.shape[1]):
                w.writerow([t, k, repr(float(trace[t, k])), repr(float(sched[t]))])
    return path
