"""Delaunay complexes in 2D and 3D with full face lattice and coface maps.

The top-dimensional triangulation is delegated to Qhull (scipy.spatial);
everything downstream needs the complete simplicial complex, so this module
derives all lower-dimensional simplices, coface adjacency (with the opposite
vertex of every coface, needed for attachment tests), and hull markers.

Simplex rows are sorted vertex indices, and each dimension's rows are in
lexicographic order, so a complex has one canonical representation
independent of point insertion order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay as _SciPyDelaunay
from scipy.spatial import QhullError

from .errors import DegenerateInputError
from .geometry import in_sphere


@dataclass
class CofaceMap:
    """CSR map from k-simplices to their (k+1)-cofaces.

    For k-simplex i, cofaces are ``index[indptr[i]:indptr[i+1]]`` and
    ``opposite[indptr[i]:indptr[i+1]]`` holds the vertex of each coface that
    is not in the simplex.
    """

    indptr: np.ndarray
    index: np.ndarray
    opposite: np.ndarray

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)


@dataclass
class SimplicialComplex:
    """Simplices of all dimensions 0..dim with coface adjacency.

    ``simplices[k]`` is an (m_k, k+1) int array of sorted vertex indices;
    ``cofacets[k]`` maps k-simplices to (k+1)-simplices; ``hull_facets`` marks
    the (dim-1)-simplices with a single coface.
    """

    dim: int
    points: np.ndarray
    labels: np.ndarray
    simplices: dict = field(default_factory=dict)
    cofacets: dict = field(default_factory=dict)
    hull_facets: np.ndarray | None = None

    def n_simplices(self, k: int) -> int:
        return len(self.simplices[k]) if k in self.simplices else 0

    def euler_characteristic(self) -> int:
        return int(sum((-1) ** k * self.n_simplices(k) for k in range(self.dim + 1)))


def _encode_rows(rows: np.ndarray, base: int) -> np.ndarray:
    """Pack each sorted row into one integer key (falls back to None if the
    key would overflow 63 bits)."""
    k = rows.shape[1]
    if base ** k >= 2 ** 62:
        return None
    key = rows[:, 0].astype(np.int64)
    for c in range(1, k):
        key = key * base + rows[:, c]
    return key


def _unique_rows(rows: np.ndarray, base: int):
    """Unique rows plus inverse indices, via integer keys when possible."""
    key = _encode_rows(rows, base)
    if key is None:
        uniq, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
        return uniq, inverse.ravel(), first
    uniq_key, first, inverse = np.unique(key, return_index=True, return_inverse=True)
    return rows[first], inverse, first


def _faces_with_parents(cells: np.ndarray):
    """All facets of each cell, with parent cell index and opposite vertex."""
    m, kp1 = cells.shape
    faces = np.empty((kp1 * m, kp1 - 1), dtype=cells.dtype)
    opposite = np.empty(kp1 * m, dtype=cells.dtype)
    for drop in range(kp1):
        cols = [c for c in range(kp1) if c != drop]
        faces[drop * m:(drop + 1) * m] = cells[:, cols]
        opposite[drop * m:(drop + 1) * m] = cells[:, drop]
    parents = np.tile(np.arange(m, dtype=np.int64), kp1)
    return faces, parents, opposite


def _close_complex(top_cells: np.ndarray, n_points: int):
    """Derive all lower-dimensional simplices and coface CSR maps."""
    dim = top_cells.shape[1] - 1
    simplices = {dim: top_cells}
    cofacets = {}
    cells = top_cells
    for k in range(dim - 1, -1, -1):
        faces, parents, opposite = _faces_with_parents(cells)
        uniq, inverse, _ = _unique_rows(faces, n_points)
        order = np.argsort(inverse, kind="stable")
        counts = np.bincount(inverse, minlength=len(uniq))
        indptr = np.concatenate([[0], np.cumsum(counts)])
        cofacets[k] = CofaceMap(indptr=indptr.astype(np.int64),
                                index=parents[order],
                                opposite=opposite[order])
        simplices[k] = uniq
        cells = uniq
    return simplices, cofacets


def build_delaunay(points, labels=None) -> SimplicialComplex:
    """Delaunay complex of a 2D or 3D point set.

    Every top cell satisfies the empty-circumsphere property (delegated to
    Qhull); the returned complex is closed under taking faces.  Raises
    DegenerateInputError if the points are affinely dependent or coincident.
    """
    pts = np.ascontiguousarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise ValueError("points must be an (n, d) array with d in {2, 3}")
    d = pts.shape[1]
    if len(pts) < d + 1:
        raise DegenerateInputError("degenerate input: need at least d+1 points")
    if labels is None:
        labels = np.arange(len(pts), dtype=np.int64)
    else:
        labels = np.asarray(labels, dtype=np.int64)
    try:
        tri = _SciPyDelaunay(pts)
    except QhullError as exc:
        raise DegenerateInputError(f"degenerate input: {exc}") from exc
    if tri.coplanar.size:
        raise DegenerateInputError("degenerate input: coincident or unrepresentable points")
    top = np.sort(tri.simplices.astype(np.int64), axis=1)
    top = top[np.lexsort(top.T[::-1])]
    simplices, cofacets = _close_complex(top, len(pts))
    cpx = SimplicialComplex(dim=d, points=pts, labels=labels,
                            simplices=simplices, cofacets=cofacets)
    deg = cpx.cofacets[d - 1].degree()
    if deg.min() < 1 or deg.max() > 2:
        raise DegenerateInputError("degenerate input: non-manifold facet incidence")
    cpx.hull_facets = deg == 1
    return cpx


def verify_empty_circumsphere(cpx: SimplicialComplex) -> bool:
    """Brute-force Delaunay check with exact predicates (test-sized inputs).

    True iff no point lies strictly inside any top cell's circumsphere.
    """
    pts = cpx.points
    for cell in cpx.simplices[cpx.dim]:
        vertex_set = set(int(v) for v in cell)
        simplex = pts[cell]
        for j in range(len(pts)):
            if j in vertex_set:
                continue
            if in_sphere(simplex, pts[j]) > 0:
                return False
    return True
