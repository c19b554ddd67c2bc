"""Integer simplicial homology via the Smith normal form.

Boundary matrices are built with the usual alternating signs over sorted
vertex tuples.  The Smith reduction works on sparse row dictionaries with
arbitrary-precision integers; pivots are chosen by minimal absolute value
(ties by lowest column index) to limit coefficient growth, and a final
pass restores the divisibility chain of the invariant factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContractViolation
from .nerve import SimplicialComplex


@dataclass
class BoundaryMatrix:
    """Sparse integer matrix with named rows and columns.

    rows[i] maps column index to a nonzero integer entry.  Rows correspond
    to (k-1)-simplices and columns to k-simplices of the originating
    complex.
    """

    num_rows: int
    num_cols: int
    rows: list[dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.rows:
            self.rows = [dict() for _ in range(self.num_rows)]
        if len(self.rows) != self.num_rows:
            raise ContractViolation("row count mismatch")

    def entry(self, i: int, j: int) -> int:
        return self.rows[i].get(j, 0)

    def dense(self) -> list[list[int]]:
        return [[self.rows[i].get(j, 0) for j in range(self.num_cols)]
                for i in range(self.num_rows)]


def boundary_matrix(complex_: SimplicialComplex, k: int) -> BoundaryMatrix:
    """Boundary operator from k-chains to (k-1)-chains.

    The boundary of [v_0..v_k] is the alternating sum of the faces obtained
    by dropping one vertex.  For k = 0 the matrix has zero rows (reduced
    boundaries are not used here).
    """
    if k < 0:
        raise ContractViolation("chain degree must be nonnegative")
    cols = complex_.simplices.get(k, [])
    if k == 0:
        return BoundaryMatrix(0, len(cols))
    faces = complex_.simplices.get(k - 1, [])
    index = {s: i for i, s in enumerate(faces)}
    mat = BoundaryMatrix(len(faces), len(cols))
    for j, s in enumerate(cols):
        for drop in range(len(s)):
            face = s[:drop] + s[drop + 1:]
            i = index.get(face)
            if i is None:
                raise ContractViolation("complex is not closed under faces")
            mat.rows[i][j] = 1 if drop % 2 == 0 else -1
    return mat


def _gcd_chain_fixup(factors: list[int]) -> list[int]:
    """Restore divisibility d_1 | d_2 | ... among positive diagonal values."""
    import math

    d = sorted(factors)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            if d[j] % d[i] != 0:
                g = math.gcd(d[i], d[j])
                lcm = d[i] // g * d[j]
                d[i], d[j] = g, lcm
        d = d[:i + 1] + sorted(d[i + 1:])
    return d


def smith_normal_form(mat: BoundaryMatrix) -> list[int]:
    """Invariant factors (positive, in divisibility order) of the matrix.

    Gaussian-style elimination over the integers: repeatedly pick the
    remaining nonzero entry of least absolute value (ties broken by lowest
    column, then lowest row), clear its row and column with exact division
    steps, and retire it to the diagonal once it divides everything it
    meets.
    """
    import heapq

    rows = [dict(r) for r in mat.rows]
    col_rows: dict[int, set[int]] = {}
    # lazily validated heap realizing min-abs pivoting with ties broken by
    # lowest column, then lowest row; stale entries are skipped on pop
    heap: list[tuple[int, int, int, int]] = []
    for i, r in enumerate(rows):
        for j, v in r.items():
            col_rows.setdefault(j, set()).add(i)
            heap.append((abs(v), j, i, v))
    heapq.heapify(heap)
    remaining = sum(len(r) for r in rows)
    factors: list[int] = []

    def set_entry(i: int, j: int, v: int) -> None:
        nonlocal remaining
        had = j in rows[i]
        if v:
            rows[i][j] = v
            col_rows.setdefault(j, set()).add(i)
            heapq.heappush(heap, (abs(v), j, i, v))
            if not had:
                remaining += 1
        else:
            if had:
                del rows[i][j]
                remaining -= 1
            s = col_rows.get(j)
            if s is not None:
                s.discard(i)
                if not s:
                    del col_rows[j]

    def add_row(src: int, dst: int, mult: int) -> None:
        for j, v in list(rows[src].items()):
            set_entry(dst, j, rows[dst].get(j, 0) + mult * v)

    def add_col(src: int, dst: int, mult: int) -> None:
        for i in list(col_rows.get(src, ())):
            set_entry(i, dst, rows[i].get(dst, 0) + mult * rows[i][src])

    while remaining:
        while True:
            _, pj, pi, pv = heapq.heappop(heap)
            if rows[pi].get(pj) == pv:
                break
        # alternate between clearing the pivot column and the pivot row;
        # any nonzero remainder becomes a strictly smaller pivot, so the
        # loop terminates
        while True:
            moved = False
            for i in list(col_rows.get(pj, ())):
                if i == pi:
                    continue
                add_row(pi, i, -(rows[i][pj] // pv))
                if rows[i].get(pj, 0):
                    pi, pv = i, rows[i][pj]
                    moved = True
                    break
            if moved:
                continue
            for j in list(rows[pi]):
                if j == pj:
                    continue
                add_col(pj, j, -(rows[pi][j] // pv))
                if rows[pi].get(j, 0):
                    pj, pv = j, rows[pi][j]
                    moved = True
                    break
            if not moved:
                break
        factors.append(abs(pv))
        set_entry(pi, pj, 0)

    return _gcd_chain_fixup(factors)


def matrix_rank_and_torsion(mat: BoundaryMatrix) -> tuple[int, tuple[int, ...]]:
    """Rank over Q and the invariant factors exceeding 1."""
    factors = smith_normal_form(mat)
    return len(factors), tuple(d for d in factors if d > 1)


@dataclass(frozen=True)
class HomologyGroups:
    """Betti numbers and torsion coefficients per degree.

    torsion[k] lists the invariant factors greater than 1 of H_k, in
    divisibility order.
    """

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.betti) != len(self.torsion):
            raise ContractViolation("betti and torsion lengths differ")

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


def homology_of_complex(complex_: SimplicialComplex,
                        max_degree: int | None = None) -> HomologyGroups:
    """Integer homology of the complex up to its dimension (or max_degree).

    betti_k = (#k-simplices) - rank d_k - rank d_{k+1}; torsion in degree k
    comes from the invariant factors of d_{k+1}.
    """
    top = complex_.dimension
    if top < 0:
        return HomologyGroups((), ())
    if max_degree is None:
        max_degree = top
    betti = []
    torsion = []
    rank_here, _ = matrix_rank_and_torsion(boundary_matrix(complex_, 0))
    for k in range(min(top, max_degree) + 1):
        nk = complex_.simplex_count(k)
        rank_up, tor_up = matrix_rank_and_torsion(boundary_matrix(complex_, k + 1))
        betti.append(nk - rank_here - rank_up)
        torsion.append(tor_up)
        rank_here = rank_up
    return HomologyGroups(tuple(betti), tuple(torsion))
