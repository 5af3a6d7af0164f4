"""Buchberger's algorithm and polynomial division.

Pair selection is the normal strategy (smallest lcm in the monomial order,
ties by pair index), with the coprime and chain criteria.  Output is the
unique reduced Groebner basis, so results do not depend on the processing
order of pairs.  Budgets guard against desk-infeasible inputs.
"""

import time
from dataclasses import dataclass

from .orders import MonomialOrder
from .poly import Polynomial, RingMismatchError


class ResourceLimitError(RuntimeError):
    """A Groebner computation exceeded its term or time budget."""


@dataclass(frozen=True)
class Budget:
    max_terms: int = 1_000_000
    max_seconds: float = 300.0


DEFAULT_BUDGET = Budget()


def _divides(m, n):
    for a, b in zip(m, n):
        if a > b:
            return False
    return True


def _lcm(m, n):
    return tuple(a if a > b else b for a, b in zip(m, n))


def _sub_exps(m, n):
    return tuple(a - b for a, b in zip(m, n))


def normal_form(f: Polynomial, basis, order: MonomialOrder = None) -> Polynomial:
    """Remainder of f on division by `basis`; no remainder term is divisible
    by any basis leading term.  Unique when `basis` is a Groebner basis."""
    if not basis:
        return f
    ring = f.ring
    for g in basis:
        if g.ring != ring:
            raise RingMismatchError("divisor in a different ring")
    order = order or ring.order
    key = order.key
    field = ring.field
    reducers = [(g.leading_monomial(order), g.leading_coefficient(order), g)
                for g in basis if not g.is_zero()]
    work = dict(f.terms)
    remainder: dict = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        hit = None
        for lm, lc, g in reducers:
            if _divides(lm, m):
                hit = (lm, lc, g)
                break
        if hit is None:
            remainder[m] = c
            continue
        lm, lc, g = hit
        factor = field.div(c, lc)
        shift = _sub_exps(m, lm)
        for gm, gc in g.terms.items():
            if gm == lm:
                continue
            tm = tuple(a + b for a, b in zip(gm, shift))
            s = field.sub(work.get(tm, field.zero), field.mul(gc, factor))
            if s == field.zero:
                work.pop(tm, None)
            else:
                work[tm] = s
    return Polynomial(ring, remainder, _clean=False)


def _spoly(f, g, lmf, lmg, order):
    ring = f.ring
    field = ring.field
    lcm = _lcm(lmf, lmg)
    a = f.mul_term(_sub_exps(lcm, lmf), field.inv(f.terms[lmf]))
    b = g.mul_term(_sub_exps(lcm, lmg), field.inv(g.terms[lmg]))
    return a - b


def _canonicalize(p: Polynomial, order) -> Polynomial:
    """Monic over F_p; primitive with positive leading coefficient over Q."""
    if p.is_zero():
        return p
    field = p.ring.field
    if field.kind == "rational":
        from math import gcd
        num_gcd = 0
        den_lcm = 1
        for c in p.terms.values():
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        from fractions import Fraction
        factor = Fraction(den_lcm, num_gcd)
        if p.leading_coefficient(order) < 0:
            factor = -factor
        return p.scale(factor)
    return p.monic(order)


def buchberger(generators, order: MonomialOrder = None, budget: Budget = DEFAULT_BUDGET):
    """Return the reduced Groebner basis of the given generators.

    The result is monic over F_p and primitive-integral with positive leading
    coefficient over Q, sorted by decreasing leading monomial.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("generators in different rings")
    order = order or ring.order
    key = order.key
    deadline = time.monotonic() + budget.max_seconds

    basis = []
    lms = []
    for g in sorted(gens, key=lambda h: key(h.leading_monomial(order))):
        basis.append(_canonicalize(g, order))
        lms.append(basis[-1].leading_monomial(order))

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    done = set()

    def over_budget():
        if time.monotonic() > deadline:
            return "time budget exceeded"
        total = sum(len(g.terms) for g in basis)
        if total > budget.max_terms:
            return f"term budget exceeded ({total} terms)"
        if len(pairs) > budget.max_terms:
            return "pair queue budget exceeded"
        return None

    while pairs:
        reason = over_budget()
        if reason:
            raise ResourceLimitError(reason)
        i, j = min(pairs, key=lambda p: (key(_lcm(lms[p[0]], lms[p[1]])), p))
        pairs.discard((i, j))
        done.add((i, j))
        lcm = _lcm(lms[i], lms[j])
        # coprime criterion
        if lcm == tuple(a + b for a, b in zip(lms[i], lms[j])):
            continue
        # chain criterion: some k divides the lcm and both side pairs are done
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(lms[k], lcm):
                continue
            pik = (min(i, k), max(i, k))
            pjk = (min(j, k), max(j, k))
            if pik in done and pjk in done:
                skip = True
                break
        if skip:
            continue
        s = _spoly(basis[i], basis[j], lms[i], lms[j], order)
        r = normal_form(s, basis, order)
        if r.is_zero():
            continue
        r = _canonicalize(r, order)
        m = len(basis)
        basis.append(r)
        lms.append(r.leading_monomial(order))
        pairs.update((k, m) for k in range(m))

    return reduce_basis(basis, order)


def reduce_basis(basis, order):
    """Minimalize and self-reduce a Groebner basis; canonical output order."""
    key = order.key
    live = sorted((g for g in basis if not g.is_zero()),
                  key=lambda g: key(g.leading_monomial(order)))
    minimal = []
    for g in live:
        lm = g.leading_monomial(order)
        if not any(_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = normal_form(g, others, order)
        if not r.is_zero():
            reduced.append(r.monic(order))
    reduced.sort(key=lambda g: key(g.leading_monomial(order)), reverse=True)
    return reduced
