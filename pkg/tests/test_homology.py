import itertools
import math

import numpy as np
import pytest

from sah.errors import ContractViolation
from sah.homology import (BoundaryMatrix, HomologyGroups, boundary_matrix,
                          homology_of_complex, matrix_rank_and_torsion,
                          smith_normal_form)
from sah.nerve import SimplicialComplex


def full_complex(vertices: tuple[int, ...]) -> SimplicialComplex:
    """Complex of all faces of the simplex on the given vertices."""
    simps = {}
    for k in range(len(vertices)):
        simps[k] = sorted(itertools.combinations(vertices, k + 1))
    return SimplicialComplex(len(vertices), simps)


def hollow_triangle() -> SimplicialComplex:
    return SimplicialComplex(3, {0: [(0,), (1,), (2,)],
                                 1: [(0, 1), (0, 2), (1, 2)]})


def rp2_complex() -> SimplicialComplex:
    """Minimal 6-vertex triangulation of the real projective plane."""
    faces = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
             (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    faces = sorted(tuple(sorted(v - 1 for v in f)) for f in faces)
    edges = sorted({(a, b) for f in faces
                    for a, b in itertools.combinations(f, 2)})
    return SimplicialComplex(6, {0: [(i,) for i in range(6)],
                                 1: edges, 2: faces})


def octahedron() -> SimplicialComplex:
    """Boundary of the octahedron, a triangulated 2-sphere."""
    # vertices 0/1, 2/3, 4/5 are antipodal pairs; faces avoid both members
    faces = sorted(tuple(sorted(f)) for f in
                   itertools.product((0, 1), (2, 3), (4, 5)))
    edges = sorted({(a, b) for f in faces
                    for a, b in itertools.combinations(f, 2)})
    return SimplicialComplex(6, {0: [(i,) for i in range(6)],
                                 1: edges, 2: faces})


def integer_det(m: list[list[int]]) -> int:
    """Bareiss fraction-free determinant over the integers."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def gcd_minors_snf(dense: list[list[int]]) -> list[int]:
    """Determinant-divisor oracle: d_k = gcd of k x k minors ratios."""
    nr = len(dense)
    nc = len(dense[0]) if nr else 0
    divisors = [1]
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for ri in itertools.combinations(range(nr), k):
            for ci in itertools.combinations(range(nc), k):
                sub = [[dense[i][j] for j in ci] for i in ri]
                g = math.gcd(g, abs(integer_det(sub)))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


def test_snf_examples():
    assert smith_normal_form(BoundaryMatrix(2, 2, [{0: 2, 1: 4},
                                                   {0: 6, 1: 8}])) == [2, 4]
    eye = BoundaryMatrix(3, 3, [{0: 1}, {1: 1}, {2: 1}])
    assert smith_normal_form(eye) == [1, 1, 1]
    assert smith_normal_form(BoundaryMatrix(3, 2)) == []


def test_snf_against_gcd_minor_oracle(rng):
    for _ in range(60):
        nr = int(rng.integers(1, 7))
        nc = int(rng.integers(1, 7))
        dense = [[int(v) for v in rng.integers(-9, 10, nc)]
                 for _ in range(nr)]
        mat = BoundaryMatrix(nr, nc,
                             [{j: v for j, v in enumerate(row) if v}
                              for row in dense])
        assert smith_normal_form(mat) == gcd_minors_snf(dense)


def test_snf_invariant_under_unimodular_ops(rng):
    dense = [[int(v) for v in rng.integers(-5, 6, 4)] for _ in range(4)]
    base = smith_normal_form(BoundaryMatrix(
        4, 4, [{j: v for j, v in enumerate(r) if v} for r in dense]))
    for _ in range(10):
        m = [row[:] for row in dense]
        i, j = rng.choice(4, size=2, replace=False)
        c = int(rng.integers(-3, 4))
        if rng.random() < 0.5:
            m[i], m[j] = m[j], m[i]
        for k in range(4):
            m[i][k] += c * m[j][k]
        got = smith_normal_form(BoundaryMatrix(
            4, 4, [{jj: v for jj, v in enumerate(r) if v} for r in m]))
        assert got == base


def test_boundary_matrix_shapes_and_signs():
    tri = full_complex((0, 1, 2))
    d2 = boundary_matrix(tri, 2)
    assert (d2.num_rows, d2.num_cols) == (3, 1)
    # boundary of (0,1,2): +(1,2) - (0,2) + (0,1)
    col = [d2.entry(i, 0) for i in range(3)]
    assert col == [1, -1, 1]  # rows ordered (0,1), (0,2), (1,2)


def test_boundary_of_boundary_is_zero(rng):
    for verts in [(0, 1, 2, 3), (0, 1, 2, 3, 4)]:
        k_ = full_complex(verts)
        for k in range(2, len(verts)):
            a = np.array(boundary_matrix(k_, k - 1).dense())
            b = np.array(boundary_matrix(k_, k).dense())
            assert not np.any(a @ b)


def test_boundary_matrix_rejects_open_complex():
    bad = SimplicialComplex(3, {0: [(0,), (1,)], 1: [(0, 2)]})
    with pytest.raises(ContractViolation):
        boundary_matrix(bad, 1)


def test_hollow_triangle_homology():
    h = homology_of_complex(hollow_triangle())
    assert h.betti == (1, 1)
    assert h.torsion == ((), ())


def test_full_simplex_contractible():
    h = homology_of_complex(full_complex((0, 1, 2)))
    assert h.betti == (1, 0, 0)


def test_octahedron_is_sphere():
    h = homology_of_complex(octahedron())
    assert h.betti == (1, 0, 1)
    assert h.torsion == ((), (), ())


def test_rp2_torsion():
    k = rp2_complex()
    assert k.is_closed()
    h = homology_of_complex(k)
    assert h.betti == (1, 0, 0)
    assert h.torsion == ((), (2,), ())


def test_euler_characteristic_identity():
    for k_ in (hollow_triangle(), full_complex((0, 1, 2, 3)), rp2_complex(),
               octahedron()):
        h = homology_of_complex(k_)
        chi_simplices = sum((-1) ** k * len(v)
                            for k, v in k_.simplices.items())
        assert h.euler_characteristic == chi_simplices


def test_rank_matches_float_rank(rng):
    k_ = octahedron()
    for k in (1, 2):
        mat = boundary_matrix(k_, k)
        rank, _ = matrix_rank_and_torsion(mat)
        assert rank == np.linalg.matrix_rank(np.array(mat.dense(), dtype=float))


def test_homology_groups_validation():
    with pytest.raises(ContractViolation):
        HomologyGroups((1, 0), ((),))


def test_empty_complex():
    h = homology_of_complex(SimplicialComplex(0, {}))
    assert h.betti == ()
