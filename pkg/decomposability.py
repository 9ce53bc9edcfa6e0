from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from complex_core import (
    IntVector,
    SimplicialComplex,
    deletion,
    dim,
    faces,
    independence_complex,
    is_pure,
    is_simplex,
    link,
    vertices,
)
from errors import DomainError, ParseError
from graph_core import CliquePartition, Graph, mask_of, members, popcount, validate_partition
from whiskering import clique_whisker

logger = logging.getLogger(__name__)


# ---------- Shedding trees ----------
@dataclass(frozen=True)
class ShedTree:
    """
    Witness of a vertex decomposition: a leaf (vertex is None) marks a
    simplex, otherwise `vertex` is shed and the two subtrees decompose
    its link and its deletion.
    """

    vertex: Optional[int] = None
    link: Optional["ShedTree"] = None
    deletion: Optional["ShedTree"] = None

    @property
    def is_leaf(self) -> bool:
        return self.vertex is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.link.depth(), self.deletion.depth())  # type: ignore[union-attr]

    def to_json(self) -> Any:
        if self.is_leaf:
            return "simplex"
        return {
            "vertex": self.vertex,
            "link": self.link.to_json(),  # type: ignore[union-attr]
            "deletion": self.deletion.to_json(),  # type: ignore[union-attr]
        }

    @classmethod
    def from_json(cls, obj: Any) -> "ShedTree":
        if obj == "simplex":
            return SIMPLEX
        if not isinstance(obj, dict) or not {"vertex", "link", "deletion"} <= set(obj):
            raise ParseError(f"not a shedding tree: {obj!r}")
        return cls(int(obj["vertex"]), cls.from_json(obj["link"]), cls.from_json(obj["deletion"]))


SIMPLEX = ShedTree()


def _check_pure_input(delta: SimplicialComplex) -> None:
    if delta.is_void:
        raise DomainError("vertex-decomposability is undefined for the void complex")
    if not is_pure(delta):
        raise DomainError("vertex-decomposability is only defined for pure complexes")


def _shed_ok(delta: SimplicialComplex, lk: SimplicialComplex, dl: SimplicialComplex, preserve_dimension: bool) -> bool:
    if not (is_pure(lk) and is_pure(dl)):
        return False
    return not preserve_dimension or dim(dl) == dim(delta)


class _Decomposer:
    """One search, one memo table keyed on the facet set."""

    def __init__(self, preserve_dimension: bool):
        self.preserve_dimension = preserve_dimension
        self.memo: Dict[FrozenSet[int], Optional[ShedTree]] = {}

    def run(self, delta: SimplicialComplex, first: Optional[Sequence[int]] = None) -> Optional[ShedTree]:
        key = delta.facets
        if first is None and key in self.memo:
            return self.memo[key]
        result = self._search(delta, first)
        if first is None:
            self.memo[key] = result
        return result

    def _search(self, delta: SimplicialComplex, first: Optional[Sequence[int]]) -> Optional[ShedTree]:
        if is_simplex(delta):
            return SIMPLEX
        candidates = first if first is not None else vertices(delta)
        for v in candidates:
            lk = link(delta, 1 << v)
            dl = deletion(delta, 1 << v)
            if not _shed_ok(delta, lk, dl, self.preserve_dimension):
                continue
            lk_tree = self.run(lk)
            if lk_tree is None:
                continue
            dl_tree = self.run(dl)
            if dl_tree is None:
                continue
            return ShedTree(v, lk_tree, dl_tree)
        return None


def is_vertex_decomposable(delta: SimplicialComplex, preserve_dimension: bool = False) -> Optional[ShedTree]:
    """
    A shedding tree when delta is vertex-decomposable, else None.
    Shedding vertices are tried in ascending order, so the witness is deterministic.
    With preserve_dimension=True the deletion must also keep the dimension.
    """
    _check_pure_input(delta)
    search = _Decomposer(preserve_dimension)
    tree = search.run(delta)
    logger.debug("vertex decomposition %s after %d subcomplexes", "found" if tree is not None else "refuted", len(search.memo))
    return tree


def is_shedding_vertex(delta: SimplicialComplex, v: int, preserve_dimension: bool = False) -> Optional[ShedTree]:
    """A decomposition rooted at v, if v can be shed."""
    _check_pure_input(delta)
    if v not in vertices(delta):
        raise DomainError(f"{v} is not a vertex of the complex")
    if is_simplex(delta):
        return None
    return _Decomposer(preserve_dimension).run(delta, first=[v])


def replay_shed_tree(delta: SimplicialComplex, tree: ShedTree) -> None:
    """Raise DomainError unless tree is a valid decomposition of delta."""
    if delta.is_void or not is_pure(delta):
        raise DomainError("replay reached an impure complex")
    if tree.is_leaf:
        if not is_simplex(delta):
            raise DomainError(f"leaf reached a non-simplex with {len(delta.facets)} facets")
        return
    v = tree.vertex
    if v not in vertices(delta):
        raise DomainError(f"shed vertex {v} is not a vertex of the current complex")
    replay_shed_tree(link(delta, 1 << v), tree.link)  # type: ignore[arg-type]
    replay_shed_tree(deletion(delta, 1 << v), tree.deletion)  # type: ignore[arg-type]


# ---------- Partitionings ----------
@dataclass(frozen=True)
class IntervalPartitioning:
    """Intervals [lower, upper] of faces, upper always a facet."""

    intervals: Tuple[Tuple[int, int], ...]

    def to_json(self) -> List[Dict[str, List[int]]]:
        return [{"lower": list(members(g)), "upper": list(members(f))} for g, f in self.intervals]

    @classmethod
    def from_json(cls, obj: Any) -> "IntervalPartitioning":
        try:
            return cls(tuple((mask_of(iv["lower"]), mask_of(iv["upper"])) for iv in obj))
        except (TypeError, KeyError) as e:
            raise ParseError(f"not an interval list: {e}") from e


def partitioning_problem(delta: SimplicialComplex, p: IntervalPartitioning) -> Optional[str]:
    """None if p partitions delta, else the first violated condition."""
    face_set = faces(delta)
    covered: set = set()
    for lower, upper in p.intervals:
        if upper not in delta.facets:
            return f"{members(upper)} is not a facet"
        if lower & upper != lower:
            return f"{members(lower)} is not below {members(upper)}"
        free = upper & ~lower
        sub = free
        while True:
            face = lower | sub
            if face in covered:
                return f"face {members(face)} lies in two intervals"
            covered.add(face)
            if sub == 0:
                break
            sub = (sub - 1) & free
    if covered != face_set:
        missing = sorted(members(s) for s in face_set - covered)
        return f"faces not covered: {missing[:5]}"
    return None


def is_partitioning(delta: SimplicialComplex, p: IntervalPartitioning) -> bool:
    return partitioning_problem(delta, p) is None


def whisker_partitioning(G: Graph, pi: CliquePartition) -> IntervalPartitioning:
    """
    For each independent set I of G the interval [I, I^], where I^ adds the
    whisker vertex of every clique of pi that misses I. Indices refer to G^pi.
    """
    report = validate_partition(G, pi)
    if not report.ok:
        raise DomainError(f"invalid clique partition: {report.message}")
    wg = clique_whisker(G, pi)
    clique_masks = pi.masks()
    intervals: List[Tuple[int, int]] = []
    for I in sorted(faces(independence_complex(G)), key=lambda m: (popcount(m), members(m))):
        upper = I
        for i, W in enumerate(clique_masks):
            if W & I == 0:
                upper |= 1 << wg.whisker_map[i]
        intervals.append((I, upper))
    return IntervalPartitioning(tuple(intervals))


def h_from_partitioning(p: IntervalPartitioning, d: int) -> IntVector:
    """h_i = number of intervals whose lower end has i elements."""
    h = [0] * (d + 1)
    for lower, upper in p.intervals:
        if popcount(upper) != d:
            raise DomainError(f"facet {members(upper)} has size {popcount(upper)}, expected {d}")
        h[popcount(lower)] += 1
    return tuple(h)
