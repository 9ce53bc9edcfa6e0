from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import reduce
from math import comb
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import sympy as sp

from errors import DomainError
from graph_core import Graph, mask_of, members, popcount, submasks

logger = logging.getLogger(__name__)

# f-vectors start at f_{-1}, h-vectors at h_0, reduced Betti numbers at b_{-1}.
IntVector = Tuple[int, ...]

T = sp.Symbol("t")


# ---------- Simplicial complexes ----------
@dataclass(frozen=True)
class SimplicialComplex:
    """
    A complex on the ground set 0..n-1 given by its facets (bitmasks).
    facets == frozenset() is the void complex; frozenset({0}) is {emptyset}.
    """

    n: int
    facets: FrozenSet[int]
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        ground = (1 << self.n) - 1
        for F in self.facets:
            if F & ~ground:
                raise DomainError(f"facet {members(F)} leaves the ground set 0..{self.n - 1}")
        ordered = sorted(self.facets, key=popcount)
        for i, F in enumerate(ordered):
            for G in ordered[i + 1:]:
                if F & G == F and F != G:
                    raise DomainError(f"facet {members(F)} is contained in facet {members(G)}")

    @classmethod
    def from_faces(cls, n: int, faces: Iterable[Iterable[int]], labels: Optional[Sequence[str]] = None) -> "SimplicialComplex":
        """Complex generated by arbitrary faces: only the maximal ones are kept."""
        return cls(n, maximal_sets(mask_of(f) for f in faces), tuple(labels) if labels is not None else None)

    @classmethod
    def void(cls, n: int = 0) -> "SimplicialComplex":
        return cls(n, frozenset())

    @classmethod
    def empty(cls, n: int = 0) -> "SimplicialComplex":
        return cls(n, frozenset({0}))

    @classmethod
    def simplex(cls, vertices: Iterable[int], n: Optional[int] = None) -> "SimplicialComplex":
        m = mask_of(vertices)
        return cls(n if n is not None else m.bit_length(), frozenset({m}))

    @property
    def is_void(self) -> bool:
        return not self.facets

    def sorted_facets(self) -> List[Tuple[int, ...]]:
        return sorted(members(F) for F in self.facets)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def __contains__(self, face: object) -> bool:
        m = face if isinstance(face, int) else mask_of(face)  # type: ignore[arg-type]
        return any(m & F == m for F in self.facets)


def maximal_sets(sets: Iterable[int]) -> FrozenSet[int]:
    """Inclusion-maximal members of a family of bitmasks."""
    uniq = sorted(set(sets), key=popcount, reverse=True)
    kept: List[int] = []
    for s in uniq:
        if not any(s & k == s for k in kept):
            kept.append(s)
    return frozenset(kept)


def _require_nonvoid(delta: SimplicialComplex, what: str) -> None:
    if delta.is_void:
        raise DomainError(f"{what} is undefined for the void complex")


# ---------- Independence complex ----------
def independence_complex(G: Graph) -> SimplicialComplex:
    """Facets are the maximal independent sets (maximal cliques of the complement)."""
    if G.n == 0:
        return SimplicialComplex(0, frozenset({0}), G.labels)
    comp = nx.complement(G.to_networkx())
    facets = frozenset(mask_of(c) for c in nx.find_cliques(comp))
    logger.debug("Ind on %d vertices: %d facets", G.n, len(facets))
    return SimplicialComplex(G.n, facets, G.labels)


# ---------- Faces ----------
def faces(delta: SimplicialComplex) -> Set[int]:
    out: Set[int] = set()
    for F in delta.facets:
        if F in out:
            continue
        out.update(submasks(F))
    return out


def vertex_mask(delta: SimplicialComplex) -> int:
    return reduce(lambda a, b: a | b, delta.facets, 0)


def vertices(delta: SimplicialComplex) -> Tuple[int, ...]:
    return members(vertex_mask(delta))


def dim(delta: SimplicialComplex) -> int:
    _require_nonvoid(delta, "dimension")
    return max(popcount(F) for F in delta.facets) - 1


def faces_by_dimension(delta: SimplicialComplex) -> List[List[Tuple[int, ...]]]:
    """Entry k holds the (k-1)-dimensional faces, sorted lexicographically."""
    d = dim(delta) + 1
    buckets: List[List[Tuple[int, ...]]] = [[] for _ in range(d + 1)]
    for s in faces(delta):
        buckets[popcount(s)].append(members(s))
    for b in buckets:
        b.sort()
    return buckets


def is_simplex(delta: SimplicialComplex) -> bool:
    return len(delta.facets) == 1


def is_cone(delta: SimplicialComplex) -> bool:
    """Some vertex lies in every facet."""
    if delta.is_void:
        return False
    return reduce(lambda a, b: a & b, delta.facets) != 0


def is_pure(delta: SimplicialComplex) -> bool:
    _require_nonvoid(delta, "purity")
    return len({popcount(F) for F in delta.facets}) == 1


# ---------- f- and h-vectors ----------
def f_vector(delta: SimplicialComplex) -> IntVector:
    """(f_{-1}, ..., f_{d-1}) by exact face enumeration."""
    _require_nonvoid(delta, "f-vector")
    d = dim(delta) + 1
    counts = [0] * (d + 1)
    for s in faces(delta):
        counts[popcount(s)] += 1
    return tuple(counts)


def h_from_f(f: Sequence[int]) -> IntVector:
    """h_j = sum_i (-1)^(j-i) C(d-i, j-i) f_{i-1}, with d = len(f) - 1."""
    d = len(f) - 1
    return tuple(
        sum((-1) ** (j - i) * comb(d - i, j - i) * f[i] for i in range(j + 1))
        for j in range(d + 1)
    )


def h_vector(delta: SimplicialComplex) -> IntVector:
    return h_from_f(f_vector(delta))


def f_from_h(h: Sequence[int]) -> IntVector:
    """f_{j-1} = sum_i C(d-i, j-i) h_i, with d = len(h) - 1."""
    if len(h) == 0:
        raise DomainError("h-vector must have at least one entry")
    d = len(h) - 1
    return tuple(sum(comb(d - i, j - i) * h[i] for i in range(j + 1)) for j in range(d + 1))


def strip_zeros(vec: Sequence[int]) -> IntVector:
    """The nonzero part: trailing zeros removed, at least one entry kept."""
    out = list(vec)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def pad(vec: Sequence[int], length: int) -> IntVector:
    if len(vec) > length:
        raise DomainError(f"vector of length {len(vec)} does not fit in {length}")
    return tuple(vec) + (0,) * (length - len(vec))


def euler_characteristic(delta: SimplicialComplex) -> int:
    """Unreduced: sum over non-empty faces of (-1)^dim."""
    f = f_vector(delta)
    return sum((-1) ** k * f[k + 1] for k in range(len(f) - 1))


def h_polynomial(delta: SimplicialComplex) -> sp.Poly:
    return sp.Poly(list(reversed(h_vector(delta))), T)


def hilbert_numerator(delta: SimplicialComplex) -> IntVector:
    """Numerator coefficients of the Hilbert series over (1-t)^d; equal to h."""
    return h_vector(delta)


def hilbert_series(delta: SimplicialComplex) -> sp.Expr:
    d = dim(delta) + 1
    return h_polynomial(delta).as_expr() / (1 - T) ** d


# ---------- Link, deletion, join ----------
def link(delta: SimplicialComplex, sigma: Iterable[int] | int) -> SimplicialComplex:
    s = sigma if isinstance(sigma, int) else mask_of(sigma)
    _require_nonvoid(delta, "link")
    containing = [F for F in delta.facets if F & s == s]
    if not containing:
        raise DomainError(f"{members(s)} is not a face")
    return SimplicialComplex(delta.n, frozenset(F & ~s for F in containing), delta.labels)


def deletion(delta: SimplicialComplex, sigma: Iterable[int] | int) -> SimplicialComplex:
    """Faces not containing sigma; sigma must be non-empty."""
    s = sigma if isinstance(sigma, int) else mask_of(sigma)
    if s == 0:
        raise DomainError("deletion of the empty face is undefined")
    generators: List[int] = []
    for F in delta.facets:
        if F & s != s:
            generators.append(F)
        else:
            generators.extend(F & ~(1 << v) for v in members(s))
    return SimplicialComplex(delta.n, maximal_sets(generators), delta.labels)


def join(delta: SimplicialComplex, sigma: SimplicialComplex) -> SimplicialComplex:
    """
    Join on disjoint ground sets: sigma's indices are shifted by delta.n.
    This is the complex whose Stanley-Reisner ring is the tensor product,
    i.e. the operation with multiplicative Hilbert series.
    """
    n = delta.n + sigma.n
    if delta.is_void or sigma.is_void:
        return SimplicialComplex.void(n)
    labels = None
    if delta.labels is not None or sigma.labels is not None:
        labels = tuple(delta.label(v) for v in range(delta.n)) + tuple(sigma.label(v) for v in range(sigma.n))
    facets = frozenset(F | (G << delta.n) for F in delta.facets for G in sigma.facets)
    return SimplicialComplex(n, facets, labels)


def cone(delta: SimplicialComplex) -> SimplicialComplex:
    """Join with a new apex vertex appended at index delta.n."""
    return join(delta, SimplicialComplex(1, frozenset({1})))


# ---------- Stanley-Reisner ideal ----------
def minimal_nonfaces(delta: SimplicialComplex) -> List[Tuple[int, ...]]:
    _require_nonvoid(delta, "Stanley-Reisner ideal")
    face_set = faces(delta)
    found: Set[int] = set()
    for tau in face_set:
        for v in range(delta.n):
            bit = 1 << v
            if tau & bit:
                continue
            s = tau | bit
            if s in face_set or s in found:
                continue
            if all((s & ~(1 << u)) in face_set for u in members(s)):
                found.add(s)
    return sorted((members(s) for s in found), key=lambda t: (len(t), t))


def stanley_reisner_generators(delta: SimplicialComplex) -> List[Tuple[int, ...]]:
    return minimal_nonfaces(delta)


def is_flag(delta: SimplicialComplex) -> bool:
    return all(len(g) == 2 for g in minimal_nonfaces(delta))


def flag_graph(delta: SimplicialComplex) -> Graph:
    """The graph G with Ind(G) = delta; delta must be flag."""
    gens = minimal_nonfaces(delta)
    bad = [g for g in gens if len(g) != 2]
    if bad:
        raise DomainError(f"not a flag complex: minimal non-face {bad[0]}")
    return Graph.from_edges(delta.n, gens, delta.labels)
