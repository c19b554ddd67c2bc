"""End-to-end homology computation and the file formats.

The pipeline replaces strict inequalities by their closures, lifts the
affine system to the sphere with the scaled homogenization, runs the
covering stage, builds the nerve of the resulting ball union and computes
its integer homology.  Homology is only claimed when the covering stage
certifies; fixed-radius runs report an audit value instead.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .condition import ConditionReport, condition_report
from .covering import (CoveringResult, approx_member_mask, covering,
                       covering_fixed, DEFAULT_MAX_ITERATIONS, DEFAULT_MIN_R)
from .errors import ContractViolation, ParseError
from .homology import HomologyGroups, homology_of_complex
from .nerve import cech_nerve
from .polysys import (AffinePoly, AffineSystem, DegreePattern,
                      scaled_homogenization)

SCHEMA_INPUT = "sah-system/1"


@dataclass(frozen=True)
class RunOptions:
    """User-facing knobs of a pipeline run."""

    mode: str = "certified"
    r_override: float | None = None
    epsilon_override: float | None = None
    max_dim: int | None = None
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    min_r: float = DEFAULT_MIN_R
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("certified", "fixed"):
            raise ContractViolation("mode must be 'certified' or 'fixed'")
        has_r = self.r_override is not None
        has_eps = self.epsilon_override is not None
        if self.mode == "fixed" and not (has_r and has_eps):
            raise ContractViolation("fixed mode requires both r and epsilon")
        if self.mode == "certified" and (has_r or has_eps):
            raise ContractViolation("certified mode forbids r and epsilon overrides")
        if self.threads < 1:
            raise ContractViolation("threads must be >= 1")


@dataclass(frozen=True)
class RunResult:
    """Everything a run produced; homology is None when nothing is claimed."""

    homology: HomologyGroups | None
    covering: CoveringResult
    condition: ConditionReport | None
    max_dim: int
    num_simplices: int
    boundary_ambiguous: bool
    wall_time_ms: float

    @property
    def certified(self) -> bool:
        return self.covering.certified


def normalize_strictness(sys: AffineSystem) -> AffineSystem:
    """Replace every strict inequality by its closure.

    The solution set changes, but not its homotopy type, provided the
    system has a finite subtuple condition maximum; the pipeline relies on
    this and records no further distinction.
    """
    return replace(sys, strict=(False,) * len(sys.G))


def _trivial_result(sys: AffineSystem, max_dim: int, t0: float) -> RunResult:
    """Unconstrained input: the set is all of R^n, one contractible piece."""
    betti = (1,) + (0,) * (max_dim - 1)
    cov = CoveringResult(points=np.zeros((0, sys.n + 1)), epsilon=0.0,
                         r_final=1.0, k_star=1.0, iterations=0,
                         certified=True, grid_size=0)
    return RunResult(
        homology=HomologyGroups(betti, ((),) * max_dim),
        covering=cov, condition=None, max_dim=max_dim, num_simplices=0,
        boundary_ambiguous=False,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


def homology_algorithm(sys: AffineSystem, opts: RunOptions) -> RunResult:
    """Run the full pipeline on an affine basic semialgebraic system."""
    t0 = time.perf_counter()
    max_dim = opts.max_dim if opts.max_dim is not None else sys.n + 1
    if max_dim < 1:
        raise ContractViolation("max_dim must be >= 1")
    if sys.pattern.q == 0 and sys.pattern.s == 0:
        return _trivial_result(sys, max_dim, t0)
    hsys = scaled_homogenization(normalize_strictness(sys))
    if opts.mode == "certified":
        cov = covering(hsys, max_iterations=opts.max_iterations,
                       min_r=opts.min_r)
    else:
        cov = covering_fixed(hsys, opts.r_override, opts.epsilon_override)
        d = hsys.pattern.max_degree
        mask = approx_member_mask(hsys, math.sqrt(d) * cov.r_final, cov.points)
        if not bool(mask.all()):
            raise ContractViolation("fixed-mode audit failed: X not in Approx")
    cond = None
    if cov.witness_point is not None:
        polys = hsys.F + tuple(hsys.G[i] for i in cov.witness_subtuple.indices)
        cond = condition_report(polys, cov.witness_point,
                                max_degree=hsys.pattern.max_degree)
    homology = None
    num_simplices = 0
    ambiguous = False
    if cov.certified or opts.mode == "fixed":
        nerve = cech_nerve(cov.points, cov.epsilon, max_dim=max_dim)
        num_simplices = sum(len(v) for v in nerve.simplices.values())
        ambiguous = nerve.boundary_ambiguous
        groups = homology_of_complex(nerve, max_degree=max_dim - 1)
        betti = list(groups.betti) + [0] * (max_dim - len(groups.betti))
        torsion = list(groups.torsion) + [()] * (max_dim - len(groups.torsion))
        homology = HomologyGroups(tuple(betti[:max_dim]),
                                  tuple(torsion[:max_dim]))
    return RunResult(
        homology=homology,
        covering=cov,
        condition=cond,
        max_dim=max_dim,
        num_simplices=num_simplices,
        boundary_ambiguous=ambiguous,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


# ---------------------------------------------------------------------------
# File formats

def _parse_poly(entry: dict, n: int, where: str) -> tuple[AffinePoly, int]:
    if not isinstance(entry, dict):
        raise ParseError(f"{where}: polynomial entry must be an object")
    try:
        degree = int(entry["degree"])
        raw_terms = entry["terms"]
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc}") from None
    terms = {}
    for t in raw_terms:
        try:
            coeff = float(Fraction(str(t["coeff"])))
            exps = tuple(int(e) for e in t["exponents"])
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: bad term ({exc})") from None
        if len(exps) != n:
            raise ParseError(
                f"{where}: exponent vector has length {len(exps)}, expected {n}")
        if any(e < 0 for e in exps):
            raise ParseError(f"{where}: negative exponent")
        if sum(exps) > degree:
            raise ParseError(f"{where}: term degree exceeds declared degree")
        terms[exps] = terms.get(exps, 0.0) + coeff
    return AffinePoly(n, terms), degree


def parse_system(path: str) -> AffineSystem:
    """Read an affine system from a schema 'sah-system/1' document."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid document: {exc}") from None
    if doc.get("schema") != SCHEMA_INPUT:
        raise ParseError(f"schema field must be '{SCHEMA_INPUT}'")
    try:
        n = int(doc["n"])
    except (KeyError, ValueError):
        raise ParseError("field 'n' must be a positive integer") from None
    if n < 1:
        raise ParseError("field 'n' must be a positive integer")
    eqs, ineqs, strict, degrees = [], [], [], []
    for i, entry in enumerate(doc.get("equalities", [])):
        p, d = _parse_poly(entry, n, f"equalities[{i}]")
        eqs.append(p)
        degrees.append(d)
    for i, entry in enumerate(doc.get("inequalities", [])):
        p, d = _parse_poly(entry, n, f"inequalities[{i}]")
        ineqs.append(p)
        degrees.append(d)
        strict.append(bool(entry.get("strict", False)))
    q, s = len(eqs), len(ineqs)
    if q > n:
        raise ParseError(
            f"q = {q} equalities exceed n = {n}; the algorithm requires q <= n")
    pattern = DegreePattern(tuple(degrees), q, s)
    return AffineSystem(n, tuple(eqs), tuple(ineqs), tuple(strict), pattern)


def system_to_document(sys: AffineSystem) -> dict:
    """Inverse of parse_system up to coefficient formatting."""
    def poly_doc(p: AffinePoly, degree: int, strict: bool | None) -> dict:
        terms = [{"coeff": str(Fraction(c).limit_denominator(10 ** 12)),
                  "exponents": list(e)}
                 for e, c in sorted(p.terms.items())]
        out = {"degree": degree, "terms": terms}
        if strict is not None:
            out["strict"] = strict
        return out

    return {
        "schema": SCHEMA_INPUT,
        "n": sys.n,
        "equalities": [poly_doc(p, d, None) for p, d in
                       zip(sys.F, sys.pattern.equality_degrees())],
        "inequalities": [poly_doc(p, d, st) for p, d, st in
                         zip(sys.G, sys.pattern.inequality_degrees(), sys.strict)],
    }


def _num(x: float):
    """Floats become JSON numbers; infinities become the string 'inf'."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def emit_result(result: RunResult, include_timing: bool = False) -> dict:
    """Result document; timing is omitted by default so outputs are
    reproducible byte for byte."""
    cov = result.covering
    doc = {
        "certified": cov.certified,
        "betti": list(result.homology.betti) if result.homology else None,
        "torsion": ([list(t) for t in result.homology.torsion]
                    if result.homology else None),
        "r": _num(cov.r_final),
        "epsilon": _num(cov.epsilon),
        "k_star": _num(cov.k_star),
        "grid_size": str(cov.grid_size),
        "num_points": int(len(cov.points)),
        "iterations": cov.iterations,
        "max_dim": result.max_dim,
        "wall_time_ms": result.wall_time_ms if include_timing else None,
    }
    if cov.audit_hypothesis is not None:
        doc["audit_hypothesis"] = _num(cov.audit_hypothesis)
    if result.boundary_ambiguous:
        doc["boundary_ambiguous"] = True
    return doc


def serialize_result(result: RunResult, include_timing: bool = False) -> str:
    return json.dumps(emit_result(result, include_timing),
                      indent=2, sort_keys=True) + "\n"
