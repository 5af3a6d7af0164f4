"""Ideals with cached Groebner bases, and the ideal-theoretic toolkit.

Saturation and radical membership go through the Rabinowitsch construction
in an auxiliary variable; intersection uses the s*I + (1-s)*J trick.  The
Krull dimension of R/I is read combinatorially off the leading-term ideal.
"""

import threading

from .groebner import Budget, DEFAULT_BUDGET, buchberger, normal_form
from .orders import GREVLEX, BlockOrder, MonomialOrder
from .poly import Polynomial, PolyRing, RingMismatchError

AUX_SAT = "_w"
AUX_INTERSECT = "_s"


class Ideal:
    """An ideal given by generators, with a one-slot reduced-GB cache."""

    def __init__(self, ring: PolyRing, generators):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatchError("generator in a different ring")
            gens.append(g)
        self.generators = tuple(gens)
        self._gb = None
        self._gb_order = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal({len(self.generators)} gens in {self.ring!r})"

    def groebner_basis(self, order: MonomialOrder = None, budget: Budget = DEFAULT_BUDGET):
        order = order or self.ring.order
        with self._lock:
            if self._gb is not None and self._gb_order == order:
                return self._gb
        gb = tuple(buchberger(self.generators, order, budget))
        with self._lock:
            if self._gb is None or self._gb_order != order:
                self._gb = gb
                self._gb_order = order
        return gb

    @property
    def gb_cache(self):
        with self._lock:
            if self._gb is None:
                return None
            return {"order": self._gb_order, "basis": self._gb}

    def contains(self, f: Polynomial, budget: Budget = DEFAULT_BUDGET) -> bool:
        gb = self.groebner_basis(budget=budget)
        order = self._gb_order
        return normal_form(f, gb, order).is_zero()

    def is_unit_ideal(self, budget: Budget = DEFAULT_BUDGET) -> bool:
        gb = self.groebner_basis(budget=budget)
        return len(gb) == 1 and gb[0].is_constant() and not gb[0].is_zero()

    def is_zero_ideal(self, budget: Budget = DEFAULT_BUDGET) -> bool:
        return not self.groebner_basis(budget=budget)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor(),
            "generators": [str(g) for g in self.generators],
        }


def _transport(polys, src: PolyRing, dst: PolyRing):
    """Map polynomials between rings sharing variable names (any order).

    Source variables absent from the target are allowed only if they do not
    occur in the transported polynomials (e.g. eliminated auxiliaries).
    """
    var_map = [dst.var_index(v) if v in dst._index else None for v in src.variables]
    return [p.map_ring(dst, var_map) for p in polys]


def eliminate(ideal: Ideal, front_vars, budget: Budget = DEFAULT_BUDGET) -> Ideal:
    """Generators of ideal ∩ K[vars outside front_vars], in the same ring."""
    front = [v for v in ideal.ring.variables if v in set(front_vars)]
    if set(front) != set(front_vars):
        missing = set(front_vars) - set(front)
        raise ValueError(f"not ring variables: {sorted(missing)}")
    rest = [v for v in ideal.ring.variables if v not in set(front)]
    work = PolyRing(tuple(front) + tuple(rest), ideal.ring.field, BlockOrder(len(front)))
    gens = _transport(ideal.generators, ideal.ring, work)
    gb = buchberger(gens, work.order, budget)
    k = len(front)
    kept = [g for g in gb if all(m[:k] == (0,) * k for m in g.terms)]
    return Ideal(ideal.ring, _transport(kept, work, ideal.ring))


def intersect(I: Ideal, J: Ideal, budget: Budget = DEFAULT_BUDGET) -> Ideal:
    """I ∩ J via the auxiliary-variable construction s*I + (1-s)*J."""
    if I.ring != J.ring:
        raise RingMismatchError("ideals in different rings")
    ring = I.ring
    work = ring.with_front_vars([AUX_INTERSECT], BlockOrder(1))
    s = work.var(AUX_INTERSECT)
    one = work.one()
    gi = _transport(I.generators, ring, work)
    gj = _transport(J.generators, ring, work)
    gens = [s * g for g in gi] + [(one - s) * g for g in gj]
    gb = buchberger(gens, work.order, budget)
    kept = [g for g in gb if all(m[0] == 0 for m in g.terms)]
    return Ideal(ring, _transport(kept, work, ring))


def intersect_many(ideals, budget: Budget = DEFAULT_BUDGET) -> Ideal:
    result = ideals[0]
    for J in ideals[1:]:
        result = intersect(result, J, budget)
    return result


def saturate(I: Ideal, f: Polynomial, budget: Budget = DEFAULT_BUDGET) -> Ideal:
    """(I : f^infinity) by eliminating w from I + (1 - w*f)."""
    if f.is_zero():
        raise ValueError("cannot saturate by zero")
    ring = I.ring
    work = ring.with_front_vars([AUX_SAT], BlockOrder(1))
    w = work.var(AUX_SAT)
    gens = _transport(list(I.generators) + [f], ring, work)
    gens, (fw,) = gens[:-1], gens[-1:]
    gens.append(work.one() - w * fw)
    gb = buchberger(gens, work.order, budget)
    kept = [g for g in gb if all(m[0] == 0 for m in g.terms)]
    return Ideal(ring, _transport(kept, work, ring))


def radical_member(f: Polynomial, I: Ideal, budget: Budget = DEFAULT_BUDGET) -> bool:
    """f in rad(I), decided by the Rabinowitsch trick: 1 in I + (1 - w*f)."""
    if f.ring != I.ring:
        raise RingMismatchError("polynomial and ideal in different rings")
    if f.is_zero():
        return True
    ring = I.ring
    # plain grevlex on the extended ring suffices for unit-ideal detection
    work = ring.with_front_vars([AUX_SAT], GREVLEX)
    w = work.var(AUX_SAT)
    gens = _transport(list(I.generators) + [f], ring, work)
    gens, (fw,) = gens[:-1], gens[-1:]
    gens.append(work.one() - w * fw)
    gb = buchberger(gens, GREVLEX, budget)
    return len(gb) == 1 and gb[0].is_constant()


def radical_equal(I: Ideal, J: Ideal, budget: Budget = DEFAULT_BUDGET):
    """Whether rad(I) = rad(J); on failure also return the failing witness.

    Returns (True, None) or (False, {"direction": ..., "generator": Polynomial}).
    """
    if I.ring != J.ring:
        raise RingMismatchError("ideals in different rings")
    for g in J.generators:
        if not radical_member(g, I, budget):
            return False, {"direction": "second not in rad(first)", "generator": g}
    for g in I.generators:
        if not radical_member(g, J, budget):
            return False, {"direction": "first not in rad(second)", "generator": g}
    return True, None


def _max_independent_set(supports, nvars: int) -> int:
    """Max size of a variable set meeting no support entirely; via min cover."""
    supports = [s for s in supports if s]
    best_cover = [nvars]

    def cover(rem, size):
        if size >= best_cover[0]:
            return
        if not rem:
            best_cover[0] = size
            return
        pivot = min(rem, key=len)
        for v in sorted(pivot):
            nxt = [s for s in rem if v not in s]
            cover(nxt, size + 1)

    cover(supports, 0)
    return nvars - best_cover[0]


def krull_dimension(I: Ideal, budget: Budget = DEFAULT_BUDGET) -> int:
    """dim(ring/I) from the leading-term ideal; -1 for the unit ideal."""
    gb = I.groebner_basis(budget=budget)
    if not gb:
        return I.ring.nvars
    order = I._gb_order
    supports = []
    for g in gb:
        lm = g.leading_monomial(order)
        supp = frozenset(i for i, e in enumerate(lm) if e)
        if not supp:
            return -1  # unit ideal
        supports.append(supp)
    # drop non-minimal supports
    supports = sorted(set(supports), key=len)
    minimal = []
    for s in supports:
        if not any(t <= s for t in minimal):
            minimal.append(s)
    return _max_independent_set(minimal, I.ring.nvars)


def height(I: Ideal, budget: Budget = DEFAULT_BUDGET) -> int:
    """Codimension: number of variables minus dim(ring/I)."""
    d = krull_dimension(I, budget)
    if d < 0:
        raise ValueError("height of the unit ideal is undefined")
    return I.ring.nvars - d
