"""Nullcone constructors, Pfaffians and minors, and the closed-form
height / arithmetic-rank / STCI formulas against Groebner computation."""

import random

import pytest

from nullcone.fields import GF, QQ
from nullcone.ideals import Ideal, height, intersect_many, radical_equal
from nullcone.nullcones import (DEFAULT_FIELD, FamilyParams, ara_formula, binom,
                                coordinate_ring, generic_nullcone, height_formula,
                                height_pij, indet_matrix, invariant_ring_dim,
                                minimal_generator_count, minors, nullcone_ideal,
                                pfaffian_nullcone, presentation_ideal,
                                principal_pfaffians, stci_predicate,
                                symmetric_nullcone, variety_of_complexes)
from nullcone.linalg import sym_det
from nullcone.poly import PolyRing, parse_poly

F = DEFAULT_FIELD  # F_32003


def test_family_params_validation():
    with pytest.raises(ValueError):
        FamilyParams("generic", 1, 1)          # missing m
    with pytest.raises(ValueError):
        FamilyParams("pfaffian", 1, 1, m=2)    # stray m
    with pytest.raises(ValueError):
        FamilyParams("weird", 1, 1)


def test_pfaffian_nullcone_small():
    # t=1, n=2: the single generator is det Y
    I = pfaffian_nullcone(FamilyParams("pfaffian", 1, 2), F)
    ring = I.ring
    assert len(I.generators) == 1
    det = parse_poly(ring, "y_1_1*y_2_2 - y_1_2*y_2_1")
    assert I.generators[0] == det
    # t=1, n=3: the three 2x2 minors of a 2x3 matrix
    I = pfaffian_nullcone(FamilyParams("pfaffian", 1, 3), F)
    Y = indet_matrix(I.ring, "y", 2, 3)
    assert sorted(map(str, I.generators)) == sorted(map(str, minors(Y, 2)))
    # any t, n=1: zero ideal
    assert pfaffian_nullcone(FamilyParams("pfaffian", 3, 1), F).generators == ()


def test_symmetric_nullcone_small():
    # t=1, n=2: the square of the maximal ideal
    I = symmetric_nullcone(FamilyParams("symmetric", 1, 2), F)
    assert sorted(map(str, I.generators)) == ["y_1_1*y_1_2", "y_1_1^2", "y_1_2^2"]


def test_generic_nullcone_small():
    I = generic_nullcone(FamilyParams("generic", 1, 1, m=1), F)
    assert [str(g) for g in I.generators] == ["y_1_1*z_1_1"]
    I = generic_nullcone(FamilyParams("generic", 1, 2, m=2), F)
    assert len(I.generators) == 4
    assert all(len(g.terms) == 1 for g in I.generators)  # rank-1 products


def test_minimal_generator_counts():
    assert len(pfaffian_nullcone(FamilyParams("pfaffian", 2, 4), F).generators) == binom(4, 2)
    assert len(symmetric_nullcone(FamilyParams("symmetric", 2, 3), F).generators) == binom(4, 2)
    p = FamilyParams("generic", 2, 3, m=2)
    assert len(generic_nullcone(p, F).generators) == 6 == minimal_generator_count(p)


def test_pfaffian_square_is_determinant():
    rng = random.Random(0)
    field = GF(101)
    for n in (2, 4, 6):
        names = [f"x_{i}_{j}" for i in range(n) for j in range(n)]
        ring = PolyRing(names, field)
        for _ in range(20):
            vals = {}
            M = [[ring.zero()] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    c = field.from_int(rng.randrange(101))
                    M[i][j] = ring.constant(c)
                    M[j][i] = ring.constant(field.neg(c))
            pf = principal_pfaffians(M, n, ring.zero())[0]
            det = sym_det(M)
            assert pf * pf == det


def test_pfaffian_requires_alternating():
    ring = PolyRing(["a", "b", "c", "d"], F)
    M = [[ring.var("a"), ring.var("b")], [ring.var("c"), ring.var("d")]]
    with pytest.raises(ValueError):
        principal_pfaffians(M, 2, ring.zero())


def test_minors_of_generic_2x2():
    ring = PolyRing(["x_1_1", "x_1_2", "x_2_1", "x_2_2"], F)
    X = indet_matrix(ring, "x", 2, 2)
    out = minors(X, 2)
    assert len(out) == 1
    assert out[0] == parse_poly(ring, "x_1_1*x_2_2 - x_1_2*x_2_1")


def test_presentation_ideal_shapes():
    # Pf_4 of a 4x4 alternating matrix of indeterminates: one cubic-free quadric
    I = presentation_ideal(FamilyParams("pfaffian", 1, 4), QQ)
    assert len(I.generators) == 1
    assert str(I.generators[0]) == "x_1_4*x_2_3 - x_1_3*x_2_4 + x_1_2*x_3_4"
    # n <= 2t+1 gives the zero ideal (no principal submatrices of that size)
    assert presentation_ideal(FamilyParams("pfaffian", 1, 3), QQ).generators == ()


def test_formula_examples_from_the_theorems():
    assert ara_formula(FamilyParams("pfaffian", 1, 3)) == 3
    assert height_formula(FamilyParams("pfaffian", 1, 3)) == 2
    assert ara_formula(FamilyParams("generic", 1, 2, m=2)) == 3
    assert ara_formula(FamilyParams("symmetric", 2, 2)) == 3
    assert height_formula(FamilyParams("symmetric", 2, 2)) == 2
    assert height_pij(2, 2, 2, 1, 1) == 3
    # regular-sequence regime: pfaffian n <= t+1 means height = generator count
    p = FamilyParams("pfaffian", 2, 3)
    assert stci_predicate(p) and height_formula(p) == binom(3, 2) == ara_formula(p)


def test_ara_at_least_height_with_equality_iff_stci():
    cases = []
    for t in range(1, 5):
        for n in range(1, 7):
            cases.append(FamilyParams("pfaffian", t, n))
            cases.append(FamilyParams("symmetric", t, n))
            for m in range(1, 5):
                cases.append(FamilyParams("generic", t, n, m=m))
    assert len(cases) > 100
    for p in cases:
        ara, ht = ara_formula(p), height_formula(p)
        assert ara >= ht, p.label()
        assert (ara == ht) == stci_predicate(p), p.label()
        assert invariant_ring_dim(p) == ara


def _height_grid_cases(max_vars=12):
    for t in range(1, 4):
        for n in range(1, 7):
            if 2 * t * n <= max_vars:
                yield FamilyParams("pfaffian", t, n)
            if t * n <= max_vars:
                yield FamilyParams("symmetric", t, n)
            for m in range(1, 4):
                if m * t + t * n <= max_vars:
                    yield FamilyParams("generic", t, n, m=m)


def test_computed_height_matches_formula_on_small_grid():
    for p in _height_grid_cases():
        I = nullcone_ideal(p, F)
        if not I.generators:
            assert height_formula(p) == 0
            continue
        assert height(I) == height_formula(p), p.label()


def test_variety_of_complexes_heights():
    p = FamilyParams("generic", 2, 2, m=2)
    for i in range(3):
        for j in range(3 - i):
            I = variety_of_complexes(p, i, j, F)
            assert height(I) == height_pij(2, 2, 2, i, j), (i, j)
    with pytest.raises(ValueError):
        variety_of_complexes(p, 2, 1, F)  # i + j > t


def test_p0t_absorbs_product_entries():
    # p_{0,t} is I_1(Y) up to radical (the YZ entries are absorbed)
    p = FamilyParams("generic", 2, 2, m=2)
    I = variety_of_complexes(p, 0, 2, F)
    ring = I.ring
    I1Y = Ideal(ring, [ring.var(f"y_{i}_{j}") for i in (1, 2) for j in (1, 2)])
    ok, _ = radical_equal(I, I1Y)
    assert ok
    # and symmetrically p_{t,0} is I_1(Z) up to radical
    J = variety_of_complexes(p, 2, 0, F)
    I1Z = Ideal(ring, [ring.var(f"z_{i}_{j}") for i in (1, 2) for j in (1, 2)])
    ok, _ = radical_equal(J, I1Z)
    assert ok


def test_nullcone_is_intersection_of_rank_varieties():
    # (m,t,n) = (2,2,2): the nullcone radical-equals the i+j=t intersection
    p = FamilyParams("generic", 2, 2, m=2)
    A = generic_nullcone(p, F)
    inter = intersect_many([variety_of_complexes(p, i, 2 - i, F) for i in range(3)])
    ok, _ = radical_equal(A, inter)
    assert ok
    # (m,t,n) = (2,1,2): the t=1 case decomposes as I_1(Y) cap I_1(Z)
    p = FamilyParams("generic", 1, 2, m=2)
    A = generic_nullcone(p, F)
    ring = A.ring
    I1Y = Ideal(ring, [ring.var(f"y_{i}_1") for i in (1, 2)])
    I1Z = Ideal(ring, [ring.var(f"z_1_{j}") for j in (1, 2)])
    from nullcone.ideals import intersect
    ok, _ = radical_equal(A, intersect(I1Y, I1Z))
    assert ok


def test_generator_order_is_byte_stable():
    p = FamilyParams("pfaffian", 2, 3)
    a = [str(g) for g in pfaffian_nullcone(p, F).generators]
    b = [str(g) for g in pfaffian_nullcone(p, F).generators]
    assert a == b
    assert len(a) == 3  # (1,2), (1,3), (2,3) in lexicographic pair order
