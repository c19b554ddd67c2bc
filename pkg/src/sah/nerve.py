"""Cech nerve of a union of equal-radius balls.

A simplex belongs to the nerve exactly when the balls around its vertices
have a common point, which holds iff the minimum enclosing ball of the
vertices has radius below the common ball radius.  The minimum enclosing
ball is computed by Welzl's randomized recursion, seeded deterministically
per simplex so the complex is reproducible.
"""

from __future__ import annotations

import math
import random
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation

# Relative width of the band around the radius threshold inside which a
# simplex is flagged as numerically ambiguous.
SLACK_BAND = 1e-9


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float


@dataclass
class SimplicialComplex:
    """Abstract simplicial complex on integer vertices.

    simplices maps dimension k to the sorted list of k-simplices, each a
    strictly increasing vertex tuple.  Vertices themselves are listed under
    dimension 0.
    """

    num_vertices: int
    simplices: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)
    boundary_ambiguous: bool = False

    def simplex_count(self, k: int) -> int:
        return len(self.simplices.get(k, []))

    @property
    def dimension(self) -> int:
        return max((k for k, v in self.simplices.items() if v), default=-1)

    def is_closed(self) -> bool:
        """Every face of every simplex is present."""
        for k, simps in self.simplices.items():
            if k == 0:
                continue
            lower = set(self.simplices.get(k - 1, []))
            for s in simps:
                for i in range(len(s)):
                    if s[:i] + s[i + 1:] not in lower:
                        return False
        return True


def _solve_gram(a: list[list[float]], b: list[float]) -> list[float] | None:
    """Gaussian elimination with partial pivoting on a tiny dense system.

    Returns None when the matrix is numerically singular; callers fall
    back to dropping the offending boundary point.
    """
    m = len(b)
    mat = [row[:] + [b[i]] for i, row in enumerate(a)]
    for c in range(m):
        piv = max(range(c, m), key=lambda r: abs(mat[r][c]))
        if abs(mat[piv][c]) < 1e-14:
            return None
        mat[c], mat[piv] = mat[piv], mat[c]
        inv = 1.0 / mat[c][c]
        for r in range(m):
            if r != c and mat[r][c] != 0.0:
                f = mat[r][c] * inv
                for k in range(c, m + 1):
                    mat[r][k] -= f * mat[c][k]
    return [mat[i][m] / mat[i][i] for i in range(m)]


def _ball_from_boundary(pts: list) -> Ball:
    """Smallest ball with all the given points on its boundary.

    The center lies in the affine hull of the points; writing it as
    p0 + sum lam_i (p_i - p0) reduces the equal-distance conditions to a
    Gram system.  Affinely dependent sets are handled by retrying without
    the point that made the system singular.
    """
    p0 = pts[0]
    if len(pts) == 1:
        return Ball(np.array(p0, dtype=float), 0.0)
    dim = len(p0)
    edges = [[p[k] - p0[k] for k in range(dim)] for p in pts[1:]]
    m = len(edges)
    gram = [[sum(edges[i][k] * edges[j][k] for k in range(dim))
             for j in range(m)] for i in range(m)]
    rhs = [0.5 * gram[i][i] for i in range(m)]
    lam = _solve_gram(gram, rhs)
    if lam is None:
        return _ball_from_boundary(pts[:-1])
    offset = [sum(lam[i] * edges[i][k] for i in range(m)) for k in range(dim)]
    center = np.array([p0[k] + offset[k] for k in range(dim)])
    return Ball(center, math.sqrt(sum(v * v for v in offset)))


def min_enclosing_ball(points, rng: random.Random | None = None) -> Ball:
    """Welzl's move-to-front algorithm for the minimum enclosing ball."""
    pts = [tuple(float(v) for v in p) for p in points]
    if not pts:
        raise ContractViolation("the minimum enclosing ball needs a point")
    rng = rng or random.Random(0)
    order = list(range(len(pts)))
    rng.shuffle(order)
    dim = len(pts[0])

    def welzl(count: int, boundary: list) -> Ball:
        if count == 0 or len(boundary) == dim + 1:
            if not boundary:
                return Ball(np.zeros(dim), -1.0)
            return _ball_from_boundary(boundary)
        i = order[count - 1]
        ball = welzl(count - 1, boundary)
        p = pts[i]
        if ball.radius >= 0.0:
            c = ball.center
            d2 = sum((p[k] - c[k]) ** 2 for k in range(dim))
            bound = ball.radius * (1.0 + 1e-12) + 1e-15
            if d2 <= bound * bound:
                return ball
        return welzl(count - 1, boundary + [p])

    return welzl(len(order), [])


def _simplex_rng(vertices: tuple[int, ...]) -> random.Random:
    seed = zlib.crc32(np.array(vertices, dtype=np.int64).tobytes())
    return random.Random(seed)


def cech_nerve(points: np.ndarray, epsilon: float,
               max_dim: int | None = None) -> SimplicialComplex:
    """Nerve of the closed balls of radius epsilon around the points.

    The 1-skeleton comes from pairwise distances; higher simplices are
    found by expanding cliques in lexicographic order and testing the
    minimum enclosing ball radius against epsilon.  Simplices whose test
    value falls within the relative slack band of epsilon set the
    boundary_ambiguous flag on the output.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ContractViolation("points must form a 2d array")
    if epsilon <= 0.0:
        raise ContractViolation("epsilon must be positive")
    npts = len(pts)
    if max_dim is None:
        max_dim = pts.shape[1]
    complex_ = SimplicialComplex(num_vertices=npts)
    complex_.simplices[0] = [(i,) for i in range(npts)]
    if max_dim == 0 or npts < 2:
        return complex_

    gram = pts @ pts.T
    sq = np.diag(gram)
    d2 = sq[:, None] + sq[None, :] - 2.0 * gram
    np.maximum(d2, 0.0, out=d2)
    dist = np.sqrt(d2)
    ambiguous = False
    # two balls of radius eps intersect iff the midpoint works: dist <= 2 eps
    edge_ok = dist <= 2.0 * epsilon
    band = np.abs(dist - 2.0 * epsilon) <= SLACK_BAND * (2.0 * epsilon)
    if bool(np.any(band & ~np.eye(npts, dtype=bool))):
        ambiguous = True
    neighbors = [set(np.nonzero(edge_ok[i])[0].tolist()) - {i} for i in range(npts)]
    edges = [(i, j) for i in range(npts) for j in sorted(neighbors[i]) if j > i]
    complex_.simplices[1] = edges

    tpts = [tuple(float(v) for v in p) for p in pts]
    prev = edges
    for k in range(2, max_dim + 1):
        cur: list[tuple[int, ...]] = []
        for s in prev:
            common = set.intersection(*(neighbors[v] for v in s))
            for w in sorted(common):
                if w <= s[-1]:
                    continue
                cand = s + (w,)
                ball = min_enclosing_ball([tpts[i] for i in cand],
                                          _simplex_rng(cand))
                if ball.radius < epsilon:
                    cur.append(cand)
                if abs(ball.radius - epsilon) <= SLACK_BAND * epsilon:
                    ambiguous = True
        if not cur:
            break
        complex_.simplices[k] = cur
        prev = cur
    complex_.boundary_ambiguous = ambiguous
    return complex_
