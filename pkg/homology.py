"""
Reduced simplicial homology over the rationals, and the Reisner / Buchsbaum
oracles built on it.

Ranks are exact: boundary matrices are integer DomainMatrix objects and sympy
eliminates without floating point. No torsion information is kept, so every
verdict here is the characteristic-zero one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from complex_core import (
    IntVector,
    SimplicialComplex,
    dim,
    faces,
    faces_by_dimension,
    is_cone,
    is_pure,
    link,
    vertices,
)
from errors import DomainError
from graph_core import members, popcount

logger = logging.getLogger(__name__)


# ---------- Boundary matrices ----------
@dataclass(frozen=True)
class BoundaryMatrix:
    """
    The k-th boundary map C_k -> C_{k-1} of the augmented chain complex.
    Columns are k-faces, rows (k-1)-faces; k = 0 maps vertices onto the empty face.
    Orientation follows ascending vertex order.
    """

    k: int
    rows: Tuple[Tuple[int, ...], ...]
    cols: Tuple[Tuple[int, ...], ...]
    entries: Tuple[Tuple[int, ...], ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_domain_matrix(self) -> DomainMatrix:
        m, n = self.shape
        return DomainMatrix([[ZZ(x) for x in row] for row in self.entries], (m, n), ZZ)

    def rank(self) -> int:
        m, n = self.shape
        if m == 0 or n == 0:
            return 0
        return self.to_domain_matrix().rank()


def boundary_matrix(delta: SimplicialComplex, k: int) -> BoundaryMatrix:
    """k ranges over 0..dim; faces are indexed in lexicographic order."""
    by_size = faces_by_dimension(delta)
    if not (0 <= k < len(by_size) - 1):
        raise DomainError(f"no boundary map of degree {k} for a complex of dimension {len(by_size) - 2}")
    rows = tuple(by_size[k])
    cols = tuple(by_size[k + 1])
    row_index: Dict[Tuple[int, ...], int] = {face: i for i, face in enumerate(rows)}
    grid = [[0] * len(cols) for _ in rows]
    for j, face in enumerate(cols):
        for i in range(len(face)):
            sub = face[:i] + face[i + 1:]
            grid[row_index[sub]][j] = -1 if i % 2 else 1
    return BoundaryMatrix(k, rows, cols, tuple(tuple(r) for r in grid))


def compose(a: BoundaryMatrix, b: BoundaryMatrix) -> DomainMatrix:
    """a * b as integer matrices; a.k must be b.k - 1."""
    if a.k != b.k - 1:
        raise DomainError(f"cannot compose boundary maps of degrees {a.k} and {b.k}")
    m, inner = a.shape
    _, n = b.shape
    if m == 0 or n == 0 or inner == 0:
        return DomainMatrix.zeros((m, n), ZZ)
    return a.to_domain_matrix() * b.to_domain_matrix()


# ---------- Betti numbers ----------
@lru_cache(maxsize=65536)
def _betti(delta: SimplicialComplex) -> IntVector:
    d = dim(delta) + 1
    by_size = faces_by_dimension(delta)
    ranks = [0] * (d + 2)
    # ranks[k + 1] is rank of the boundary map out of the k-faces, k = 0..d-1
    for k in range(d):
        ranks[k + 1] = boundary_matrix(delta, k).rank()
    out: List[int] = []
    for k in range(-1, d):
        n_faces = len(by_size[k + 1])
        kernel = n_faces - ranks[k + 1] if k >= 0 else n_faces
        out.append(kernel - ranks[k + 2])
    return tuple(out)


def reduced_betti(delta: SimplicialComplex) -> IntVector:
    """(b_{-1}, ..., b_{d-1}) of the reduced homology over Q."""
    if delta.is_void:
        raise DomainError("reduced homology is undefined for the void complex")
    return _betti(SimplicialComplex(delta.n, delta.facets))


# ---------- Reisner ----------
def _low_homology_failure(lk: SimplicialComplex) -> Optional[int]:
    """First degree i < dim lk with nonzero reduced homology, if any."""
    top = dim(lk)
    if top <= 0:
        # only b_{-1} could matter, and it vanishes on any non-empty point set
        return None
    if is_cone(lk):
        return None
    betti = reduced_betti(lk)
    for i in range(-1, top):
        if betti[i + 1] != 0:
            return i
    return None


def cm_witness(delta: SimplicialComplex) -> Optional[Tuple[Tuple[int, ...], int]]:
    """
    Full Reisner scan: every face sigma (the empty face first) must have
    vanishing reduced homology of its link below the link's dimension.
    Returns (sigma, i) for the first violation, None when Cohen-Macaulay.
    """
    if delta.is_void:
        raise DomainError("Cohen-Macaulayness is undefined for the void complex")
    for s in sorted(faces(delta), key=lambda m: (popcount(m), members(m))):
        failure = _low_homology_failure(link(delta, s))
        if failure is not None:
            logger.debug("Reisner fails at face %s in degree %d", members(s), failure)
            return members(s), failure
    return None


def is_cm(delta: SimplicialComplex) -> bool:
    """Cohen-Macaulay over a field of characteristic zero (Reisner's criterion)."""
    if delta.is_void:
        raise DomainError("Cohen-Macaulayness is undefined for the void complex")
    if not is_pure(delta):
        return False
    return cm_witness(delta) is None


def is_buchsbaum(delta: SimplicialComplex) -> bool:
    """Pure, and the link of every vertex is Cohen-Macaulay."""
    if delta.is_void:
        raise DomainError("Buchsbaumness is undefined for the void complex")
    if not is_pure(delta):
        return False
    return all(is_cm(link(delta, 1 << v)) for v in vertices(delta))


def buchsbaum_witness(delta: SimplicialComplex) -> Optional[int]:
    """A vertex whose link is not Cohen-Macaulay, or None."""
    for v in vertices(delta):
        if not is_cm(link(delta, 1 << v)):
            return v
    return None
