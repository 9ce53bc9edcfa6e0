"""
File formats.

Graph text (.txt, or anything that is not .json):

    # comments run to end of line
    n m
    labels u v w        (optional, n names)
    u v                 (m lines, 0-based)

Graph JSON: {"n": 3, "edges": [[0, 1], ...], "labels": ["u", ...]}
Complex JSON: {"n": 3, "facets": [[0, 1], ...], "labels": [...]}
Partition spec: cliques separated by "|", vertices by ",", "~" an empty clique.
"""

from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Optional

from complex_core import SimplicialComplex, minimal_nonfaces
from errors import FlagForgeError, ParseError
from graph_core import CliquePartition, Graph


# ---------- Graphs ----------
def _int(tok: str, where: str) -> int:
    try:
        return int(tok)
    except ValueError as e:
        raise ParseError(f"{where}: expected an integer, got {tok!r}") from e


def parse_graph_text(text: str, source: str = "<text>") -> Graph:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    if not lines:
        raise ParseError(f"{source}: empty graph file")
    lineno, header = lines[0]
    if len(header) != 2:
        raise ParseError(f"{source}:{lineno}: header must be 'n m'")
    n, m = _int(header[0], f"{source}:{lineno}"), _int(header[1], f"{source}:{lineno}")
    body = lines[1:]
    labels: Optional[List[str]] = None
    if body and body[0][1][0] == "labels":
        lineno, toks = body[0]
        labels = toks[1:]
        if len(labels) != n:
            raise ParseError(f"{source}:{lineno}: expected {n} labels, got {len(labels)}")
        body = body[1:]
    if len(body) != m:
        raise ParseError(f"{source}: header announces {m} edges, found {len(body)}")
    edges = []
    for lineno, toks in body:
        if len(toks) != 2:
            raise ParseError(f"{source}:{lineno}: an edge line is 'u v'")
        edges.append((_int(toks[0], f"{source}:{lineno}"), _int(toks[1], f"{source}:{lineno}")))
    return _build(lambda: Graph.from_edges(n, edges, labels), source)


def graph_to_text(G: Graph) -> str:
    out = [f"{G.n} {len(G.edges)}"]
    if G.labels is not None:
        out.append("labels " + " ".join(G.labels))
    out.extend(f"{u} {v}" for u, v in G.sorted_edges())
    return "\n".join(out) + "\n"


def graph_from_json(obj: Any, source: str = "<json>") -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise ParseError(f"{source}: a graph object needs 'n' and 'edges'")
    labels = obj.get("labels")
    return _build(lambda: Graph.from_edges(int(obj["n"]), obj["edges"], labels), source)


def graph_to_json(G: Graph) -> Dict[str, Any]:
    out: Dict[str, Any] = {"n": G.n, "edges": [list(e) for e in G.sorted_edges()]}
    if G.labels is not None:
        out["labels"] = list(G.labels)
    return out


# ---------- Complexes ----------
def complex_from_json(obj: Any, source: str = "<json>") -> SimplicialComplex:
    if not isinstance(obj, dict) or "n" not in obj or "facets" not in obj:
        raise ParseError(f"{source}: a complex object needs 'n' and 'facets'")
    labels = obj.get("labels")
    return _build(lambda: SimplicialComplex.from_faces(int(obj["n"]), obj["facets"], labels), source)


def complex_to_json(delta: SimplicialComplex) -> Dict[str, Any]:
    out: Dict[str, Any] = {"n": delta.n, "facets": [list(F) for F in delta.sorted_facets()]}
    if delta.labels is not None:
        out["labels"] = list(delta.labels)
    return out


def _build(make, source: str):
    try:
        return make()
    except ParseError:
        raise
    except (FlagForgeError, TypeError, ValueError) as e:
        raise ParseError(f"{source}: {e}") from e


# ---------- Files ----------
def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def load_json(path: str) -> Any:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e}") from e


def is_json_path(path: str) -> bool:
    return os.path.splitext(path)[1].lower() == ".json"


def read_graph(path: str) -> Graph:
    if is_json_path(path):
        return graph_from_json(load_json(path), path)
    return parse_graph_text(_read(path), path)


def write_graph(G: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        if is_json_path(path):
            json.dump(graph_to_json(G), f)
            f.write("\n")
        else:
            f.write(graph_to_text(G))


# ---------- Partitions ----------
def parse_partition_spec(spec: str) -> CliquePartition:
    """'0,1|2|~' -> ({0,1}, {2}, {})."""
    if not spec.strip():
        raise ParseError("empty partition spec")
    cliques = []
    for block in spec.split("|"):
        block = block.strip()
        if block == "~":
            cliques.append(frozenset())
            continue
        if not block:
            raise ParseError(f"empty block in {spec!r}; write '~' for an empty clique")
        cliques.append(frozenset(_int(tok.strip(), "partition") for tok in block.split(",")))
    return CliquePartition(tuple(cliques))


def partition_to_spec(pi: CliquePartition) -> str:
    return "|".join(",".join(str(v) for v in sorted(c)) if c else "~" for c in pi.cliques)


# ---------- Stanley-Reisner export ----------
def stanley_reisner_text(delta: SimplicialComplex, scheme: str = "x") -> str:
    """One squarefree monomial per line, e.g. x0*x2, or u*w with scheme='label'."""
    if scheme not in ("x", "label"):
        raise ParseError(f"unknown variable scheme {scheme!r}")
    lines = []
    for gen in minimal_nonfaces(delta):
        names = [f"x{v}" if scheme == "x" else delta.label(v) for v in gen]
        lines.append("*".join(names))
    return "\n".join(lines) + ("\n" if lines else "")
