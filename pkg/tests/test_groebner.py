"""Buchberger engine: worked examples, an independent sympy oracle,
uniqueness of the reduced basis, and budget enforcement."""

import random

import pytest
import sympy as sp

from nullcone.fields import GF, QQ
from nullcone.groebner import Budget, ResourceLimitError, buchberger, normal_form
from nullcone.poly import PolyRing, Polynomial, format_poly

F = GF(32003)


def test_already_reduced_singleton():
    R = PolyRing(["x", "y"], F)
    x, y = R.gens()
    assert buchberger([x]) == [x]


def test_hand_worked_spoly_example():
    # {x^2 + y^2, x*y} in grevlex(x > y): one S-polynomial reduction gives y^3
    R = PolyRing(["x", "y"], F)
    x, y = R.gens()
    gb = buchberger([x * x + y * y, x * y])
    assert set(map(format_poly, gb)) == {"x^2 + y^2", "x*y", "y^3"}


def test_principal_pfaffian_ideal_is_its_own_basis():
    R = PolyRing(["x12", "x13", "x14", "x23", "x24", "x34"], QQ)
    x12, x13, x14, x23, x24, x34 = R.gens()
    pf4 = x12 * x34 - x13 * x24 + x14 * x23
    assert buchberger([pf4]) == [pf4]


def test_unit_and_zero_ideals():
    R = PolyRing(["x"], F)
    assert buchberger([R.zero()]) == []
    gb = buchberger([R.from_int(5)])
    assert len(gb) == 1 and gb[0].is_one()


def _to_sympy(ring, polys, order):
    dom = sp.QQ if ring.field.kind == "rational" else sp.GF(ring.field.characteristic)
    R, *gens = sp.ring(",".join(ring.variables), dom, order)
    out = []
    for p in polys:
        acc = R.zero
        for m, c in p.terms.items():
            term = R.one * (int(c) if ring.field.kind != "rational" else c)
            for g, e in zip(gens, m):
                term *= g ** e
            acc += term
        out.append(acc)
    return R, out


def _sympy_gb_monomials(ring, polys, order="grevlex"):
    R, fs = _to_sympy(ring, polys, order)
    gb = sp.polys.groebnertools.groebner(fs, R, method="buchberger")
    return sorted(sorted(g.monoms()) for g in gb)


def _our_gb_monomials(gb):
    return sorted(sorted(g.terms.keys()) for g in gb)


@pytest.mark.parametrize("seed", range(6))
def test_reduced_basis_matches_sympy(seed):
    rng = random.Random(seed)
    R = PolyRing(["x", "y", "z"], F)
    gens = []
    for _ in range(3):
        terms = {tuple(rng.randrange(3) for _ in range(3)):
                 F.from_int(rng.randrange(1, 32003)) for _ in range(3)}
        gens.append(Polynomial(R, terms))
    gens = [g for g in gens if not g.is_zero()]
    ours = buchberger(gens)
    assert _our_gb_monomials(ours) == _sympy_gb_monomials(R, gens)


def test_reduced_basis_independent_of_generator_order():
    rng = random.Random(7)
    R = PolyRing(["x", "y", "z", "w"], F)
    gens = []
    for _ in range(4):
        terms = {tuple(rng.randrange(3) for _ in range(4)):
                 F.from_int(rng.randrange(1, 32003)) for _ in range(3)}
        gens.append(Polynomial(R, terms))
    reference = buchberger(gens)
    for _ in range(5):
        shuffled = gens[:]
        rng.shuffle(shuffled)
        assert buchberger(shuffled) == reference


def test_normal_form_examples():
    R = PolyRing(["x", "y"], F)
    x, y = R.gens()
    gb = buchberger([y])
    assert normal_form(x, gb) == x
    gb = buchberger([x * x + y * y, x * y])
    # an ideal member normal-forms to zero
    member = (x * x + y * y) * y + (x * y) * x
    assert normal_form(member, gb).is_zero()
    # every generator normal-forms to zero against the cached basis
    for g in (x * x + y * y, x * y):
        assert normal_form(g, gb).is_zero()


def test_normal_form_is_linear_for_fixed_basis():
    rng = random.Random(3)
    R = PolyRing(["x", "y", "z"], F)
    x, y, z = R.gens()
    gb = buchberger([x * x - y, y * z - x])
    for _ in range(30):
        f = Polynomial(R, {tuple(rng.randrange(3) for _ in range(3)):
                           F.from_int(rng.randrange(1, 32003)) for _ in range(3)})
        g = Polynomial(R, {tuple(rng.randrange(3) for _ in range(3)):
                           F.from_int(rng.randrange(1, 32003)) for _ in range(3)})
        a, b = F.from_int(rng.randrange(1, 32003)), F.from_int(rng.randrange(1, 32003))
        combo = f.scale(a) + g.scale(b)
        assert normal_form(combo, gb) == \
            normal_form(f, gb).scale(a) + normal_form(g, gb).scale(b)


def test_random_span_members_reduce_to_zero():
    rng = random.Random(11)
    R = PolyRing(["x", "y", "z"], F)
    gens = [R.var("x") * R.var("y") - R.var("z"), R.var("x") ** 2 - R.var("y")]
    gb = buchberger(gens)
    for _ in range(20):
        f = R.zero()
        for g in gens:
            mult = Polynomial(R, {tuple(rng.randrange(2) for _ in range(3)):
                                  F.from_int(rng.randrange(32003)) for _ in range(2)})
            f = f + mult * g
        assert normal_form(f, gb).is_zero()


def test_budget_errors():
    R = PolyRing([f"x{i}" for i in range(6)], QQ)
    gens = []
    rng = random.Random(0)
    for _ in range(5):
        terms = {tuple(rng.randrange(3) for _ in range(6)):
                 QQ.from_int(rng.randrange(1, 50)) for _ in range(4)}
        gens.append(Polynomial(R, terms))
    with pytest.raises(ResourceLimitError):
        buchberger(gens, budget=Budget(max_terms=10, max_seconds=300))
    with pytest.raises(ResourceLimitError):
        buchberger(gens, budget=Budget(max_terms=10 ** 6, max_seconds=0.0))
