"""
Exhaustive small-graph enumeration, flag f-vector realisation and the
conjecture scans built on them.

Isomorphism classes come from orderly extension: every class on n vertices
has a representative that is a class on n - 1 vertices plus one vertex, so
level n is generated from level n - 1 and deduplicated by canonical form.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import yaml

from bipartite import compression, triangular_order
from complex_core import IntVector, f_vector, h_vector, independence_complex, is_pure, pad, strip_zeros
from decomposability import is_vertex_decomposable
from errors import BudgetExceeded, DomainError, ParseError
from formats import graph_from_json, graph_to_json
from graph_core import Graph, is_bipartite, members
from homology import is_cm
from whiskering import WhiskeredGraph, full_whiskering

logger = logging.getLogger(__name__)

CAP_DEDUP = 9
CAP_LABELED = 7
CAP_BIPARTITE = 10


# ---------- Canonical form ----------
@dataclass(frozen=True)
class CanonicalForm:
    """key is the upper-triangle adjacency string, row by row, of graph."""

    key: str
    graph: Graph
    order: Tuple[int, ...]  # order[i] = original vertex placed at position i


def _refine(G: Graph, cells: List[List[int]]) -> List[List[int]]:
    """Split cells by neighbour counts into every cell until stable (equitable)."""
    while True:
        masks = [sum(1 << v for v in c) for c in cells]
        out: List[List[int]] = []
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            groups: Dict[Tuple[int, ...], List[int]] = {}
            for v in c:
                sig = tuple(bin(G.adj[v] & m).count("1") for m in masks)
                groups.setdefault(sig, []).append(v)
            out.extend(groups[s] for s in sorted(groups))
        if len(out) == len(cells):
            return out
        cells = out


def _key_of(G: Graph, order: Sequence[int]) -> str:
    n = len(order)
    return "".join(
        "1" if G.has_edge(order[i], order[j]) else "0"
        for i in range(n)
        for j in range(i + 1, n)
    )


def _twin_representatives(G: Graph, cell: List[int]) -> List[int]:
    """One vertex per twin class; swapping twins is an automorphism fixing every cell."""
    reps: List[int] = []
    for v in cell:
        if not any(G.adj[v] & ~(1 << r) == G.adj[r] & ~(1 << v) for r in reps):
            reps.append(v)
    return reps


def canonical_form(G: Graph) -> CanonicalForm:
    """
    Least adjacency string over the leaves of the individualisation-refinement
    tree. The tree depends only on the isomorphism class, so two graphs are
    isomorphic iff their keys match.
    """
    best: Optional[Tuple[str, Tuple[int, ...]]] = None

    def descend(cells: List[List[int]]) -> None:
        nonlocal best
        cells = _refine(G, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = tuple(c[0] for c in cells)
            key = _key_of(G, order)
            if best is None or key < best[0]:
                best = (key, order)
            return
        cell = cells[target]
        for v in _twin_representatives(G, cell):
            rest = [u for u in cell if u != v]
            descend(cells[:target] + [[v], rest] + cells[target + 1:])

    descend([list(range(G.n))])
    assert best is not None
    key, order = best
    position = {v: i for i, v in enumerate(order)}
    edges = [(position[u], position[v]) for u, v in G.edges]
    return CanonicalForm(key, Graph.from_edges(G.n, edges), order)


def is_isomorphic(G: Graph, H: Graph) -> bool:
    return G.n == H.n and len(G.edges) == len(H.edges) and canonical_form(G).key == canonical_form(H).key


# ---------- Enumeration ----------
def _labeled_graphs(n: int) -> Iterator[Graph]:
    pairs = list(combinations(range(n), 2))
    for word in range(1 << len(pairs)):
        yield Graph(n, frozenset(p for k, p in enumerate(pairs) if word >> k & 1))


@lru_cache(maxsize=None)
def _classes(n: int, bipartite_only: bool) -> Tuple[Graph, ...]:
    if n == 0:
        return (Graph(0, frozenset()),)
    found: Dict[str, Graph] = {}
    for base in _classes(n - 1, bipartite_only):
        for nbrs in range(1 << (n - 1)):
            G = Graph(n, base.edges | frozenset((u, n - 1) for u in members(nbrs)))
            if bipartite_only and not is_bipartite(G):
                continue
            cf = canonical_form(G)
            found.setdefault(cf.key, cf.graph)
    logger.info("%d classes on %d vertices%s", len(found), n, " (bipartite)" if bipartite_only else "")
    return tuple(found[k] for k in sorted(found))


def enumerate_graphs(n: int, dedup: bool = True, cap: Optional[int] = None) -> Iterator[Graph]:
    """
    All graphs on n vertices. With dedup, one canonical representative per
    isomorphism class in key order; without, all labeled graphs by edge word.
    """
    if n < 0:
        raise DomainError(f"vertex count must be non-negative, got {n}")
    limit = cap if cap is not None else (CAP_DEDUP if dedup else CAP_LABELED)
    if n > limit:
        raise BudgetExceeded("graph enumeration vertex count", n, limit)
    if dedup:
        yield from _classes(n, False)
    else:
        yield from _labeled_graphs(n)


def enumerate_bipartite_graphs(n: int, cap: int = CAP_BIPARTITE) -> Iterator[Graph]:
    """One representative per isomorphism class of bipartite graphs on n vertices."""
    if n < 0:
        raise DomainError(f"vertex count must be non-negative, got {n}")
    if n > cap:
        raise BudgetExceeded("bipartite enumeration vertex count", n, cap)
    yield from _classes(n, True)


# ---------- Realising f-vectors ----------
def _check_f(f: Sequence[int]) -> IntVector:
    vec = tuple(int(x) for x in f)
    if not vec or vec[0] != 1:
        raise DomainError(f"an f-vector starts with 1, got {list(vec)}")
    if any(x < 0 for x in vec):
        raise DomainError(f"negative entry in {list(vec)}")
    return strip_zeros(vec)


def realize_f_as_flag(f: Sequence[int], n_max: Optional[int] = None, cap: int = CAP_DEDUP) -> Optional[Graph]:
    """
    A graph G with f(Ind G) = f, or None. f_0 fixes the vertex count and f_1
    fixes the number of edges, so only one size class is searched.
    """
    target = _check_f(f)
    n = target[1] if len(target) > 1 else 0
    if n_max is not None and n > n_max:
        return None
    non_edges = target[2] if len(target) > 2 else 0
    m = comb(n, 2) - non_edges
    if m < 0:
        return None
    if n > cap:
        raise BudgetExceeded("realisation vertex count", n, cap)
    for G in _classes(n, False):
        if len(G.edges) == m and strip_zeros(f_vector(independence_complex(G))) == target:
            return G
    return None


def flag_f_witness(f: Sequence[int], cap: int = CAP_DEDUP) -> Optional[WhiskeredGraph]:
    """For f realised as f(Ind G): G whiskered at every vertex, whose h-vector is f."""
    G = realize_f_as_flag(f, cap=cap)
    if G is None:
        return None
    wg = full_whiskering(G)
    h = h_vector(independence_complex(wg.graph))
    if h != pad(_check_f(f), len(h)):
        raise AssertionError(f"h(Ind G^tau) = {h} differs from f = {list(f)}")
    return wg


# ---------- Scan reports ----------
@dataclass
class ScanRecord:
    graph: Graph
    key: str
    h: IntVector  # nonzero part
    realizer: Optional[Graph]
    cm: bool

    def to_json(self) -> Dict[str, Any]:
        return {
            "graph": graph_to_json(self.graph),
            "key": self.key,
            "h": list(self.h),
            "realizer": graph_to_json(self.realizer) if self.realizer is not None else None,
            "cm": self.cm,
        }

    @classmethod
    def from_json(cls, obj: Any) -> "ScanRecord":
        try:
            realizer = obj["realizer"]
            return cls(
                graph_from_json(obj["graph"]),
                str(obj["key"]),
                tuple(int(x) for x in obj["h"]),
                graph_from_json(realizer) if realizer is not None else None,
                bool(obj["cm"]),
            )
        except (TypeError, KeyError) as e:
            raise ParseError(f"not a scan record: {e}") from e


@dataclass
class ScanReport:
    conjecture: str
    n_max: int
    dedup: bool = True
    bipartite_only: bool = False
    records: List[ScanRecord] = field(default_factory=list)
    counterexamples: List[int] = field(default_factory=list)
    totals: Dict[str, int] = field(default_factory=dict)
    last: Optional[Tuple[int, str]] = None  # (n, key) of the last graph examined
    complete: bool = False

    @property
    def held(self) -> bool:
        return not self.counterexamples

    def add(self, record: ScanRecord) -> None:
        if record.realizer is None:
            self.counterexamples.append(len(self.records))
            logger.warning("counterexample candidate: %s h=%s", graph_to_json(record.graph), record.h)
        if not record.cm:
            logger.error("pure vertex-decomposable instance fails Reisner: %s", graph_to_json(record.graph))
        self.records.append(record)

    def bump(self, name: str, by: int = 1) -> None:
        self.totals[name] = self.totals.get(name, 0) + by

    def to_json(self) -> Dict[str, Any]:
        return {
            "conjecture": self.conjecture,
            "range": {"n_max": self.n_max, "dedup": self.dedup, "bipartite_only": self.bipartite_only},
            "records": [r.to_json() for r in self.records],
            "counterexamples": list(self.counterexamples),
            "totals": dict(sorted(self.totals.items())),
            "last": {"n": self.last[0], "key": self.last[1]} if self.last is not None else None,
            "complete": self.complete,
        }

    @classmethod
    def from_json(cls, obj: Any) -> "ScanReport":
        try:
            rng = obj["range"]
            last = obj.get("last")
            report = cls(
                conjecture=str(obj["conjecture"]),
                n_max=int(rng["n_max"]),
                dedup=bool(rng.get("dedup", True)),
                bipartite_only=bool(rng.get("bipartite_only", False)),
                records=[ScanRecord.from_json(r) for r in obj["records"]],
                counterexamples=[int(i) for i in obj.get("counterexamples", [])],
                totals={str(k): int(v) for k, v in (obj.get("totals") or {}).items()},
                last=(int(last["n"]), str(last["key"])) if last else None,
                complete=bool(obj.get("complete", False)),
            )
        except (TypeError, KeyError, ValueError) as e:
            raise ParseError(f"not a scan report: {e}") from e
        return report

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_json(), sort_keys=False)


# ---------- Scans ----------
def _stream(n_max: int, dedup: bool, bipartite_only: bool, cap: int) -> Iterator[Tuple[int, Graph]]:
    for n in range(n_max + 1):
        source = enumerate_bipartite_graphs(n, cap) if bipartite_only else enumerate_graphs(n, dedup, cap)
        for G in source:
            yield n, G


def _examine_h_is_f(G: Graph) -> Tuple[str, Optional[ScanRecord]]:
    """Outcome tag and, for pure vertex-decomposable Ind(G), the record."""
    delta = independence_complex(G)
    if not is_pure(delta):
        return "impure", None
    if is_vertex_decomposable(delta) is None:
        return "not_vd", None
    h = strip_zeros(h_vector(delta))
    realizer = realize_f_as_flag(h)
    return "pure_vd", ScanRecord(G, canonical_form(G).key, h, realizer, is_cm(delta))


def _examine_bipartite(G: Graph) -> Tuple[str, Optional[ScanRecord]]:
    """Cohen-Macaulay bipartite graphs are realised by their compression."""
    if triangular_order(G) is None:
        return "not_cm", None
    compressed, _ = compression(G)
    h = strip_zeros(h_vector(independence_complex(G)))
    return "cm", ScanRecord(G, canonical_form(G).key, h, compressed, True)


_EXAMINERS: Dict[str, Callable[[Graph], Tuple[str, Optional[ScanRecord]]]] = {
    "h-is-f": _examine_h_is_f,
    "h-is-f-bipartite": _examine_bipartite,
}


def _examine_chunk(conjecture: str, graphs: List[Graph]) -> List[Tuple[str, Optional[ScanRecord]]]:
    examine = _EXAMINERS[conjecture]
    return [examine(G) for G in graphs]


def _skip_to(stream: Iterator[Tuple[int, Graph]], count: int, last: Tuple[int, str]) -> Iterator[Tuple[int, Graph]]:
    """Drop the first count graphs; the last one dropped must match last."""
    seen: Optional[Tuple[int, str]] = None
    for _ in range(count):
        item = next(stream, None)
        if item is None:
            break
        seen = (item[0], canonical_form(item[1]).key)
    if seen != last:
        raise ParseError(f"resume point n={last[0]} key={last[1]!r} does not match the enumeration")
    return stream


def run_scan(
    conjecture: str,
    n_max: int,
    jobs: int = 1,
    resume: Optional[ScanReport] = None,
    dedup: bool = True,
    cap: Optional[int] = None,
    progress_every: int = 500,
    checkpoint: Optional[Callable[[ScanReport], None]] = None,
) -> ScanReport:
    """
    Walk the enumeration stream in order, examining each graph; with jobs > 1
    chunks are examined in worker processes and merged back in stream order.
    checkpoint receives the partial report every progress_every graphs.
    """
    if conjecture not in _EXAMINERS:
        raise ParseError(f"unknown conjecture {conjecture!r}; expected one of {sorted(_EXAMINERS)}")
    bipartite_only = conjecture == "h-is-f-bipartite"
    if bipartite_only and not dedup:
        raise ParseError("the bipartite scan enumerates isomorphism classes only; labeled enumeration is not available")
    if cap is None:
        cap = CAP_BIPARTITE if bipartite_only else (CAP_DEDUP if dedup else CAP_LABELED)
    if n_max > cap:
        raise BudgetExceeded("scan vertex count", n_max, cap)

    if resume is not None:
        if (resume.conjecture, resume.n_max, resume.dedup) != (conjecture, n_max, dedup):
            raise ParseError("resume report was produced for a different scan")
        report = resume
    else:
        report = ScanReport(conjecture, n_max, dedup, bipartite_only)

    stream: Iterator[Tuple[int, Graph]] = _stream(n_max, dedup, bipartite_only, cap)
    if report.last is not None:
        stream = _skip_to(stream, report.totals.get("graphs", 0), report.last)

    def absorb(batch: List[Tuple[int, Graph]], outcomes: List[Tuple[str, Optional[ScanRecord]]]) -> None:
        for (n, G), (tag, record) in zip(batch, outcomes):
            report.bump("graphs")
            report.bump(tag)
            if record is not None:
                report.add(record)
            report.last = (n, record.key if record is not None else canonical_form(G).key)

    batch_size = max(1, progress_every)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        batch: List[Tuple[int, Graph]] = []
        for item in stream:
            batch.append(item)
            if len(batch) < batch_size:
                continue
            _process(conjecture, batch, pool, jobs, absorb)
            batch = []
            logger.info("scan %s: %d graphs, %d records", conjecture, report.totals.get("graphs", 0), len(report.records))
            if checkpoint is not None:
                checkpoint(report)
        if batch:
            _process(conjecture, batch, pool, jobs, absorb)
    finally:
        if pool is not None:
            pool.shutdown()

    report.complete = True
    return report


def _process(conjecture, batch, pool, jobs, absorb) -> None:
    graphs = [G for _, G in batch]
    if pool is None:
        absorb(batch, _examine_chunk(conjecture, graphs))
        return
    size = max(1, len(graphs) // jobs)
    chunks = [graphs[i:i + size] for i in range(0, len(graphs), size)]
    outcomes: List[Tuple[str, Optional[ScanRecord]]] = []
    for part in pool.map(_examine_chunk, [conjecture] * len(chunks), chunks):
        outcomes.extend(part)
    absorb(batch, outcomes)


def scan_conjecture(n_max: int, jobs: int = 1, resume: Optional[ScanReport] = None, dedup: bool = True) -> ScanReport:
    """Pure vertex-decomposable Ind(G): is the nonzero part of h a flag f-vector?"""
    return run_scan("h-is-f", n_max, jobs=jobs, resume=resume, dedup=dedup)


def scan_bipartite(n_max: int, jobs: int = 1, resume: Optional[ScanReport] = None) -> ScanReport:
    return run_scan("h-is-f-bipartite", n_max, jobs=jobs, resume=resume)


@dataclass(frozen=True)
class PatternScan:
    pattern: IntVector
    confirmed: bool
    checked: int
    hits: Tuple[Graph, ...] = ()


def scan_h_pattern(pattern: Sequence[int], n_max: int, dedup: bool = True) -> PatternScan:
    """Every graph on <= n_max vertices whose h(Ind) has the given nonzero part."""
    target = strip_zeros(pattern)
    hits: List[Graph] = []
    checked = 0
    for _, G in _stream(n_max, dedup, False, CAP_DEDUP if dedup else CAP_LABELED):
        checked += 1
        if strip_zeros(h_vector(independence_complex(G))) == target:
            hits.append(G)
    return PatternScan(target, not hits, checked, tuple(hits))


def scan_h133(n_max: int, dedup: bool = True) -> PatternScan:
    """confirmed iff no graph has h-vector with nonzero part (1, 3, 3)."""
    return scan_h_pattern((1, 3, 3), n_max, dedup)


# ---------- Vertex-decomposability conventions ----------
def vd_convention_divergences(n_max: int) -> List[Graph]:
    """Graphs whose Ind is vertex-decomposable under one convention but not the other."""
    out: List[Graph] = []
    for _, G in _stream(n_max, True, False, CAP_DEDUP):
        delta = independence_complex(G)
        if not is_pure(delta):
            continue
        loose = is_vertex_decomposable(delta) is not None
        strict = is_vertex_decomposable(delta, preserve_dimension=True) is not None
        if loose != strict:
            out.append(G)
    return out
