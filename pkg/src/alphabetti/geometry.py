"""Exact-sign geometric predicates and circumsphere computations.

Predicates (`orient`, `in_sphere`) use a staged scheme: a fast floating-point
evaluation guarded by a conservative relative error bound, with an exact
rational fallback (`fractions.Fraction` converts doubles losslessly, so the
fallback sign is exact).  The filter thresholds below are at least an order
of magnitude above the certified Shewchuk-style bounds for the same
expressions, so a filter "accept" is always safe; a "reject" merely costs an
exact re-evaluation.

Sign conventions:
  * ``orient`` is the sign of det(p1-p0, ..., pd-p0); the standard basis
    simplex is +1 in both 2D and 3D.
  * ``in_sphere`` returns +1 strictly inside the circumsphere, 0 on it,
    -1 outside, independent of the simplex orientation.

Circumcenters are computed from the Gram system of edge vectors, which keeps
the center in the affine hull of the vertices for simplices of any dimension
k <= d.  A determinant-ratio guard (det G / prod(diag G), always <= 1 for a
Gram matrix) routes ill-conditioned inputs to the exact solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateSimplexError

# Filter thresholds, relative to a permanent-style magnitude of the same
# expression.  Certified bounds for these expansions are a few times machine
# epsilon; these values are 10-100x larger.
_ORIENT2D_EPS = 1e-14
_ORIENT3D_EPS = 1e-13
_INSPHERE_EPS = 1e-12

# Gram determinant ratio below which circumcenter solves go exact.  The bulk
# threshold pipeline tolerates ~cond(G)*eps relative error, so its guard is
# loose; the scalar entry point promises 1e-12 relative accuracy and uses a
# much stricter one.
_GRAM_GUARD = 1e-12
_GRAM_GUARD_STRICT = 1e-4


@dataclass(frozen=True)
class Circumsphere:
    """Smallest sphere through a set of affinely independent points.

    The center lies in the affine hull of the defining vertices.
    """

    center: np.ndarray
    radius: float

    @property
    def radius2(self) -> float:
        return self.radius * self.radius


def _sign(x) -> int:
    return int(x > 0) - int(x < 0)


def _det_fraction(rows) -> Fraction:
    """Exact determinant of a small square matrix of Fractions."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def _frac_rows_orient(points):
    p0 = [Fraction(x) for x in points[0]]
    return [[Fraction(x) - p0[i] for i, x in enumerate(p)] for p in points[1:]]


def orient(points) -> int:
    """Sign of the signed volume of a d-simplex in d dimensions (d = 2, 3).

    Exact: returns 0 only for genuinely degenerate input.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] != pts.shape[1] + 1 or pts.shape[1] not in (2, 3):
        raise ValueError("orient expects d+1 points in d dimensions, d in {2, 3}")
    if pts.shape[1] == 2:
        (ax, ay), (bx, by), (cx, cy) = pts
        t1 = (bx - ax) * (cy - ay)
        t2 = (by - ay) * (cx - ax)
        det = t1 - t2
        if abs(det) > _ORIENT2D_EPS * (abs(t1) + abs(t2)):
            return _sign(det)
    else:
        d = pts[1:] - pts[0]
        det, perm = _det3_with_perm(d)
        if abs(det) > _ORIENT3D_EPS * perm:
            return _sign(det)
    return _sign(_det_fraction(_frac_rows_orient(pts)))


def _det3_with_perm(rows):
    """3x3 determinant and its permanent-of-absolute-values companion."""
    (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = rows
    m0, p0 = b1 * c2 - b2 * c1, abs(b1 * c2) + abs(b2 * c1)
    m1, p1 = b0 * c2 - b2 * c0, abs(b0 * c2) + abs(b2 * c0)
    m2, p2 = b0 * c1 - b1 * c0, abs(b0 * c1) + abs(b1 * c0)
    det = a0 * m0 - a1 * m1 + a2 * m2
    perm = abs(a0) * p0 + abs(a1) * p1 + abs(a2) * p2
    return det, perm


def _det4_with_perm(rows):
    """4x4 determinant via last-column cofactors, with permanent companion."""
    det = 0.0
    perm = 0.0
    sign = 1.0
    for i in range(4):
        sub = [rows[j][:3] for j in range(4) if j != i]
        d3, p3 = _det3_with_perm(sub)
        det += sign * rows[i][3] * d3
        perm += abs(rows[i][3]) * p3
        sign = -sign
    # cofactor order: expansion along the 4th column gives alternating signs
    # starting at (-1)^(0+3) = -1; fold that global flip into the result.
    return -det, perm


def _insphere_rows(pts, q):
    rows = []
    for p in pts:
        d = [p[i] - q[i] for i in range(len(q))]
        rows.append(d + [sum(x * x for x in d)])
    return rows


def _insphere_rows_fraction(pts, q):
    qf = [Fraction(x) for x in q]
    rows = []
    for p in pts:
        d = [Fraction(p[i]) - qf[i] for i in range(len(qf))]
        rows.append(d + [sum(x * x for x in d)])
    return rows


def in_sphere(simplex, query) -> int:
    """+1 if `query` lies strictly inside the circumsphere of the d-simplex,
    0 on it, -1 outside.  Exact sign; raises on a flat simplex."""
    pts = np.asarray(simplex, dtype=float)
    q = np.asarray(query, dtype=float)
    d = pts.shape[1]
    s = orient(pts)
    if s == 0:
        raise DegenerateSimplexError("flat simplex")
    rows = _insphere_rows(pts.tolist(), q.tolist())
    if d == 2:
        det, perm = _det3_with_perm(rows)
        inside_sign = 1
    else:
        det, perm = _det4_with_perm(rows)
        inside_sign = -1
    if abs(det) > _INSPHERE_EPS * perm:
        return inside_sign * s * _sign(det)
    det_exact = _det_fraction(_insphere_rows_fraction(pts.tolist(), q.tolist()))
    return inside_sign * s * _sign(det_exact)


def in_sphere_perturbed(simplex, query, labels) -> int:
    """`in_sphere` with symbolic perturbation keyed on point labels.

    Cospherical configurations are resolved as if each point's lifted
    coordinate were lowered by an infinitesimal weight eps^(label+1), so the
    decision depends only on labels and coordinate differences.  Translated
    copies of a configuration (sharing labels) therefore get identical
    answers.  Never returns 0.
    """
    base = in_sphere(simplex, query)
    if base != 0:
        return base
    pts = [list(map(float, p)) for p in simplex] + [list(map(float, query))]
    labels = [int(l) for l in labels]
    if len(labels) != len(pts):
        raise ValueError("need one label per point (simplex vertices then query)")
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be distinct for symbolic perturbation")
    d = len(pts[0])
    s = orient(simplex)
    inside_sign = 1 if d == 2 else -1
    # Lifted matrix rows (x, |x|^2, 1); subtracting eps^(label+1) from the
    # lifted entry of row i contributes -eps^(label+1) * M_i to the
    # determinant, where M_i replaces row i by the lift unit vector.  The
    # smallest label with a nonzero cofactor decides.
    lifted = []
    for p in pts:
        pf = [Fraction(x) for x in p]
        lifted.append(pf + [sum(x * x for x in pf), Fraction(1)])
    n = len(lifted)
    unit = [Fraction(0)] * (d + 2)
    unit[d] = Fraction(1)
    for _, i in sorted((lab, i) for i, lab in enumerate(labels)):
        rows = [unit if j == i else lifted[j] for j in range(n)]
        cof = _det_fraction(rows)
        if cof != 0:
            return inside_sign * s * _sign(-cof)
    raise DegenerateSimplexError("flat simplex")


def circumsphere(points) -> Circumsphere:
    """Circumsphere of k+1 affinely independent points in d dimensions, k <= d.

    For k < d this is the smallest sphere through the points (center in their
    affine hull).  Raises DegenerateSimplexError for affinely dependent input.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("expected an array of points")
    if pts.shape[0] == 1:
        return Circumsphere(center=pts[0].copy(), radius=0.0)
    centers, r2 = circumcenters_batch(pts[None, :, :], guard=_GRAM_GUARD_STRICT)
    return Circumsphere(center=centers[0], radius=float(np.sqrt(r2[0])))


def circumcenters_batch(pts, guard=_GRAM_GUARD):
    """Circumcenters and squared radii for a batch of simplices.

    `pts` has shape (n, k+1, d) with 1 <= k <= 3, k <= d.  Returns
    (centers (n, d), r2 (n,)).  Rows failing the Gram conditioning guard are
    recomputed exactly; exactly-degenerate rows raise.
    """
    pts = np.asarray(pts, dtype=float)
    n, m, dim = pts.shape
    k = m - 1
    if k == 0:
        return pts[:, 0, :].copy(), np.zeros(n)
    b = pts[:, 1:, :] - pts[:, :1, :]                     # (n, k, d)
    gram = np.einsum("nid,njd->nij", b, b)                # (n, k, k)
    rhs = 0.5 * np.einsum("nii->ni", gram)                # (n, k)
    if k == 1:
        det = gram[:, 0, 0]
        y = rhs / np.where(det == 0.0, 1.0, det)[:, None]
        scale = det
    elif k == 2:
        g00, g01, g11 = gram[:, 0, 0], gram[:, 0, 1], gram[:, 1, 1]
        det = g00 * g11 - g01 * g01
        safe = np.where(det == 0.0, 1.0, det)
        y = np.empty((n, 2))
        y[:, 0] = (rhs[:, 0] * g11 - rhs[:, 1] * g01) / safe
        y[:, 1] = (rhs[:, 1] * g00 - rhs[:, 0] * g01) / safe
        scale = g00 * g11
    else:
        det = np.linalg.det(gram)
        # adjugate via cross products of Gram columns
        adj = np.empty_like(gram)
        adj[:, :, 0] = np.cross(gram[:, :, 1], gram[:, :, 2])
        adj[:, :, 1] = np.cross(gram[:, :, 2], gram[:, :, 0])
        adj[:, :, 2] = np.cross(gram[:, :, 0], gram[:, :, 1])
        safe = np.where(det == 0.0, 1.0, det)
        y = np.einsum("nij,nj->ni", adj, rhs) / safe[:, None]
        scale = gram[:, 0, 0] * gram[:, 1, 1] * gram[:, 2, 2]
    centers = pts[:, 0, :] + np.einsum("ni,nid->nd", y, b)
    r2 = np.einsum("ni,ni->n", y, rhs)
    bad = ~(det > guard * scale)                          # catches NaN too
    if np.any(bad):
        for i in np.nonzero(bad)[0]:
            centers[i], r2[i] = _circumcenter_exact(pts[i])
    return centers, r2


def _circumcenter_exact(pts):
    """Rational Gram solve for one simplex; raises if affinely dependent."""
    p0 = [Fraction(x) for x in pts[0]]
    b = [[Fraction(x) - p0[i] for i, x in enumerate(p)] for p in pts[1:]]
    k = len(b)
    gram = [[sum(bi[t] * bj[t] for t in range(len(p0))) for bj in b] for bi in b]
    rhs = [gram[i][i] / 2 for i in range(k)]
    det = _det_fraction(gram)
    if det == 0:
        raise DegenerateSimplexError("degenerate simplex")
    y = []
    for col in range(k):
        m = [[rhs[r] if c == col else gram[r][c] for c in range(k)] for r in range(k)]
        y.append(_det_fraction(m) / det)
    center = [p0[i] + sum(y[j] * b[j][i] for j in range(k)) for i in range(len(p0))]
    r2 = sum(y[i] * rhs[i] for i in range(k))
    return np.array([float(c) for c in center]), float(r2)
