"""Condition numbers of homogeneous systems at points of the sphere.

The two mu numbers measure the sensitivity of a zero to perturbations of
the coefficients (in the Weyl metric); kappa blends the projective mu with
the normalized residual so that it stays meaningful far from the zero set.
The subtuple maximum extends kappa to systems with inequalities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .linalg import RANK_RTOL, tangent_basis
from .polysys import HomoPoly, HomoSystem, weyl_norm

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Subtuple:
    """Sorted subset of inequality indices appended to the equalities."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if list(idx) != sorted(set(idx)):
            raise ContractViolation("subtuple indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class ConditionReport:
    """Condition diagnostics of a system at a point of the sphere."""

    kappa: float
    mu_norm: float
    mu_proj: float
    residual_ratio: float
    reach_lower: float
    dist_to_illposed_lower: float


def _check_unit(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
        raise ContractViolation("point must lie on the unit sphere")
    return x


def _scaled_jacobian(polys: tuple[HomoPoly, ...], x: np.ndarray) -> np.ndarray:
    """Jacobian with each row divided by sqrt of the row's degree."""
    nv = polys[0].num_vars
    out = np.empty((len(polys), nv))
    for i, p in enumerate(polys):
        s = math.sqrt(p.degree)
        for j in range(nv):
            out[i, j] = p.partial(j)(x) / s
    return out


def _sigma_min_or_inf(a: np.ndarray, rank: int) -> float:
    """Smallest of the first `rank` singular values, or 0.0 when deficient."""
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0 or s[rank - 1] < RANK_RTOL * s[0]:
        return 0.0
    return float(s[rank - 1])


def mu_norm(polys, x) -> float:
    """||F|| times the spectral norm of pinv(DF(x)) with degree row-scaling."""
    polys = tuple(polys)
    if not polys:
        raise ContractViolation("mu is undefined for an empty system")
    x = _check_unit(x)
    nv = polys[0].num_vars
    q = len(polys)
    norm = weyl_norm(polys)
    if norm == 0.0 or q > nv:
        return math.inf
    sj = _scaled_jacobian(polys, x)
    smin = _sigma_min_or_inf(sj, q)
    if smin == 0.0:
        return math.inf
    return norm / smin


def mu_proj(polys, x) -> float:
    """Variant of mu_norm for the restriction of F to the tangent space at x."""
    polys = tuple(polys)
    if not polys:
        raise ContractViolation("mu is undefined for an empty system")
    x = _check_unit(x)
    nv = polys[0].num_vars
    q = len(polys)
    norm = weyl_norm(polys)
    if norm == 0.0 or q > nv - 1:
        return math.inf
    sj = _scaled_jacobian(polys, x) @ tangent_basis(x)
    smin = _sigma_min_or_inf(sj, q)
    if smin == 0.0:
        return math.inf
    return norm / smin


def kappa(polys, x) -> float:
    """Condition number of a homogeneous system at a sphere point.

    Harmonic combination of the inverse projective mu and the normalized
    residual; reduces to the norm-to-residual ratio in the overdetermined
    case.  The empty system has kappa 1 by convention, the zero system
    kappa infinity.
    """
    polys = tuple(polys)
    x = _check_unit(x)
    if not polys:
        return 1.0
    nv = polys[0].num_vars
    q = len(polys)
    n = nv - 1
    norm = weyl_norm(polys)
    if norm == 0.0:
        return math.inf
    resid = float(np.linalg.norm([p(x) for p in polys])) / norm
    if q > n:
        return math.inf if resid == 0.0 else 1.0 / resid
    mp = mu_proj(polys, x)
    inv_sq = 0.0 if math.isinf(mp) else 1.0 / (mp * mp)
    total = inv_sq + resid * resid
    if total == 0.0:
        return math.inf
    return 1.0 / math.sqrt(total)


def subtuples(s: int, max_len: int):
    """All sorted index subsets of {0..s-1} with at most max_len elements."""
    for ell in range(min(s, max_len) + 1):
        for combo in itertools.combinations(range(s), ell):
            yield Subtuple(combo)


def kappa_subtuple_max(sys: HomoSystem, x) -> tuple[float, Subtuple]:
    """Maximum of kappa over the admissible inequality subtuples at x.

    Admissible subtuples L satisfy q + |L| <= n + 1.  Returns the maximum
    and the first subtuple attaining it (enumeration order: by length, then
    lexicographic).
    """
    q = sys.pattern.q
    n = sys.sphere_dim
    if q > n + 1:
        raise ContractViolation("too many equalities for the subtuple maximum")
    best = -math.inf
    best_sub = Subtuple(())
    for sub in subtuples(sys.pattern.s, n + 1 - q):
        polys = sys.F + tuple(sys.G[i] for i in sub.indices)
        val = kappa(polys, x)
        if val > best:
            best = val
            best_sub = sub
    return best, best_sub


def reach_lower_bound(kappa_star: float, max_degree: int) -> float:
    """Certified lower bound 1/(7 D^{3/2} kappa_star) on the reach."""
    if math.isinf(kappa_star):
        return 0.0
    if kappa_star < 1.0:
        raise ContractViolation("kappa_star is at least 1 for any system")
    return 1.0 / (7.0 * max_degree ** 1.5 * kappa_star)


def condition_report(polys, x, max_degree: int | None = None) -> ConditionReport:
    """Bundle of condition diagnostics for a tuple of equalities at x."""
    polys = tuple(polys)
    x = _check_unit(x)
    if max_degree is None:
        max_degree = max((p.degree for p in polys), default=1)
    k = kappa(polys, x)
    norm = weyl_norm(polys) if polys else 0.0
    resid = (float(np.linalg.norm([p(x) for p in polys])) / norm
             if norm > 0.0 else 0.0)
    return ConditionReport(
        kappa=k,
        mu_norm=mu_norm(polys, x) if polys else math.inf,
        mu_proj=mu_proj(polys, x) if polys else math.inf,
        residual_ratio=resid,
        reach_lower=reach_lower_bound(max(k, 1.0), max_degree),
        dist_to_illposed_lower=0.0 if math.isinf(k) else norm / k,
    )


# ---------------------------------------------------------------------------
# Vectorized kappa over many sphere points (used by the grid scans)

class SubtupleKernel:
    """Precompiled data to evaluate kappa(F^L, .) on batches of points."""

    def __init__(self, polys: tuple[HomoPoly, ...], sphere_dim: int):
        self.polys = polys
        self.n = sphere_dim
        self.q = len(polys)
        self.norm = weyl_norm(polys) if polys else 0.0
        self.overdetermined = self.q > sphere_dim
        if polys:
            self.inv_sqrt_deg = np.array([1.0 / math.sqrt(p.degree) for p in polys])
            self.partials = [[p.partial(j) for j in range(p.num_vars)] for p in polys]

    def kappa_many(self, pts: np.ndarray) -> np.ndarray:
        """kappa(F^L, x) for an (N, n+1) array of unit vectors."""
        npts = len(pts)
        if self.q == 0:
            return np.ones(npts)
        if self.norm == 0.0:
            return np.full(npts, math.inf)
        vals = np.column_stack([p.eval_many(pts) for p in self.polys])
        resid = np.linalg.norm(vals, axis=1) / self.norm
        if self.overdetermined:
            with np.errstate(divide="ignore"):
                return np.where(resid == 0.0, math.inf, 1.0 / resid)
        nv = pts.shape[1]
        jac = np.empty((npts, self.q, nv))
        for i in range(self.q):
            for j in range(nv):
                jac[:, i, j] = self.partials[i][j].eval_many(pts) * self.inv_sqrt_deg[i]
        # project each row onto the tangent space of its point
        proj = jac - np.einsum("nqv,nv->nq", jac, pts)[:, :, None] * pts[:, None, :]
        svals = np.linalg.svd(proj, compute_uv=False)
        smax, smin = svals[:, 0], svals[:, self.q - 1]
        deficient = (smax == 0.0) | (smin < RANK_RTOL * smax)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv_mu_sq = np.where(deficient, 0.0, (smin / self.norm) ** 2)
            total = inv_mu_sq + resid * resid
            out = np.where(total == 0.0, math.inf, 1.0 / np.sqrt(total))
        return out
