from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from errors import DomainError
from graph_core import (
    CliquePartition,
    Graph,
    Restriction,
    induced_subgraph,
    is_clique,
    mask_of,
    members,
    validate_partition,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WhiskeredGraph:
    """G^pi: base vertices keep their indices, whisker w_i sits at base_n + i."""

    graph: Graph
    base_n: int
    whisker_map: Tuple[int, ...]
    partition: CliquePartition

    @property
    def whisker_mask(self) -> int:
        return mask_of(self.whisker_map)

    def base(self) -> Restriction:
        """Remove every whisker vertex."""
        return induced_subgraph(self.graph, self.graph.full_mask & ~self.whisker_mask)


def _whisker_labels(G: Graph, count: int) -> Optional[Tuple[str, ...]]:
    if G.labels is None:
        return None
    return tuple(G.labels) + tuple(f"w{i + 1}" for i in range(count))


def clique_whisker(G: Graph, pi: CliquePartition) -> WhiskeredGraph:
    """Add one vertex per clique of pi, adjacent exactly to that clique."""
    report = validate_partition(G, pi)
    if not report.ok:
        raise DomainError(f"invalid clique partition: {report.message}")
    t = len(pi)
    edges = set(G.edges)
    whiskers = tuple(G.n + i for i in range(t))
    for i, clique in enumerate(pi.cliques):
        edges.update((v, whiskers[i]) for v in clique)
    graph = Graph(G.n + t, frozenset(edges), _whisker_labels(G, t))
    return WhiskeredGraph(graph, G.n, whiskers, pi)


def whisker_clique(G: Graph, W: Iterable[int]) -> Graph:
    """G^W: one new vertex joined to the clique W."""
    mask = mask_of(W)
    if mask & ~G.full_mask:
        raise DomainError(f"{members(mask)} leaves the vertex set")
    if not is_clique(G, mask):
        raise DomainError(f"{members(mask)} is not a clique")
    edges = set(G.edges)
    edges.update((v, G.n) for v in members(mask))
    return Graph(G.n + 1, frozenset(edges), _whisker_labels(G, 1))


def full_whiskering(G: Graph) -> WhiskeredGraph:
    """G^tau, a whisker at every vertex."""
    return clique_whisker(G, CliquePartition(tuple(frozenset({v}) for v in range(G.n))))


@dataclass(frozen=True)
class WhiskeringWitness:
    """How a graph arises as a full clique-whiskering."""

    base: Restriction
    partition: CliquePartition  # in base indices
    whiskers: Tuple[int, ...]  # whisker vertex per clique, in the input graph's indices

    def to_json(self) -> Dict[str, object]:
        return {
            "base_vertices": list(self.base.kept),
            "partition": self.partition.as_lists(),
            "whiskers": list(self.whiskers),
        }


def is_full_clique_whiskering(G: Graph) -> Optional[WhiskeringWitness]:
    """
    A full clique-whiskering needs a clique partition where each block holds a
    vertex whose neighbourhood stays inside the block; such a block is then the
    closed neighbourhood of that vertex. So the search is an exact cover of V by
    closed neighbourhoods of simplicial vertices, lowest uncovered vertex first.
    """
    closed = [G.adj[v] | (1 << v) for v in range(G.n)]
    simplicial = [v for v in range(G.n) if is_clique(G, closed[v])]
    chosen: List[int] = []

    def cover(covered: int) -> bool:
        if covered == G.full_mask:
            return True
        rest = G.full_mask & ~covered
        u = (rest & -rest).bit_length() - 1
        for w in simplicial:
            block = closed[w]
            if block >> u & 1 and block & covered == 0:
                chosen.append(w)
                if cover(covered | block):
                    return True
                chosen.pop()
        return False

    if not cover(0):
        return None

    whiskers = tuple(chosen)
    base = induced_subgraph(G, G.full_mask & ~mask_of(whiskers))
    index = {old: new for new, old in enumerate(base.kept)}
    cliques = tuple(
        frozenset(index[v] for v in members(closed[w] & ~(1 << w))) for w in whiskers
    )
    logger.debug("whiskering witness: whiskers=%s", whiskers)
    return WhiskeringWitness(base, CliquePartition(cliques), whiskers)



def strip_whiskers(wg: WhiskeredGraph) -> Graph:
    """The base graph back; must equal the graph the whiskers were added to."""
    rest = wg.base()
    if rest.kept != tuple(range(wg.base_n)):
        raise DomainError("whisker vertices are not the trailing indices")
    return rest.graph
