"""Sparse multivariate polynomials over an exact field.

A PolyRing fixes the variable list, the coefficient field, and a monomial
order; a Polynomial is an immutable dict from exponent tuples to nonzero
coefficients.  The text format used for JSON output and test fixtures is:
terms sorted descending in the ring order, coefficients printed as "a" or
"a/b", variables as name or name^exp joined by "*".
"""

import re

from .fields import Field, QQ, field_from_descriptor
from .orders import GREVLEX, MonomialOrder, order_from_name


class RingMismatchError(ValueError):
    """Operands live in different rings."""


class PolyRing:
    """An ordered polynomial ring K[x_1, ..., x_n]."""

    def __init__(self, variables, field: Field = QQ, order: MonomialOrder = GREVLEX):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be unique")
        self.variables = variables
        self.nvars = len(variables)
        self.field = field
        self.order = order
        self._index = {v: i for i, v in enumerate(variables)}
        self._zero_exps = (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.field == other.field
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.variables, self.field, self.order))

    def __repr__(self):
        return f"PolyRing({','.join(self.variables)}; {self.field.descriptor()}; {self.order})"

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.constant(self.field.one)

    def constant(self, c):
        if c == self.field.zero:
            return self.zero()
        return Polynomial(self, {self._zero_exps: c})

    def from_int(self, n: int):
        return self.constant(self.field.from_int(n))

    def var(self, name: str):
        i = self._index[name]
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {exps: self.field.one})

    def gens(self):
        return [self.var(v) for v in self.variables]

    def var_index(self, name: str) -> int:
        return self._index[name]

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.variables, self.field, order)

    def with_front_vars(self, names, order: MonomialOrder) -> "PolyRing":
        """Ring with `names` prepended, under the given order."""
        clash = set(names) & set(self.variables)
        if clash:
            raise ValueError(f"variable clash: {sorted(clash)}")
        return PolyRing(tuple(names) + self.variables, self.field, order)

    def descriptor(self) -> dict:
        return {
            "variables": list(self.variables),
            "field": self.field.descriptor(),
            "order": self.order.name,
        }

    @staticmethod
    def from_descriptor(desc: dict) -> "PolyRing":
        return PolyRing(
            desc["variables"],
            field_from_descriptor(desc["field"]),
            order_from_name(desc["order"]),
        )


class Polynomial:
    """Immutable sparse polynomial; terms maps exponent tuple -> coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict, _clean: bool = True):
        self.ring = ring
        if _clean:
            zero = ring.field.zero
            terms = {m: c for m, c in terms.items() if c != zero}
        self.terms = terms

    # -- basic predicates -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_one(self):
        f = self.ring.field
        return self.terms == {self.ring._zero_exps: f.one}

    def is_constant(self):
        return not self.terms or self.terms.keys() == {self.ring._zero_exps}

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError("polynomials live in different rings")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        f = self.ring.field
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(res.get(m, f.zero), c)
            if s == f.zero:
                res.pop(m, None)
            else:
                res[m] = s
        return Polynomial(self.ring, res, _clean=False)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        f = self.ring.field
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = f.sub(res.get(m, f.zero), c)
            if s == f.zero:
                res.pop(m, None)
            else:
                res[m] = s
        return Polynomial(self.ring, res, _clean=False)

    def __neg__(self):
        f = self.ring.field
        return Polynomial(self.ring, {m: f.neg(c) for m, c in self.terms.items()}, _clean=False)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        f = self.ring.field
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        res: dict = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = f.add(res.get(m, f.zero), f.mul(ca, cb))
                if s == f.zero:
                    res.pop(m, None)
                else:
                    res[m] = s
        return Polynomial(self.ring, res, _clean=False)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def scale(self, c):
        """Multiply by a field element."""
        f = self.ring.field
        if c == f.zero:
            return self.ring.zero()
        return Polynomial(self.ring, {m: f.mul(v, c) for m, v in self.terms.items()}, _clean=False)

    def mul_term(self, mono, c):
        """Multiply by the term c * x^mono."""
        f = self.ring.field
        if c == f.zero:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): f.mul(v, c) for m, v in self.terms.items()},
            _clean=False,
        )

    # -- leading data -------------------------------------------------------

    def leading_monomial(self, order: MonomialOrder = None):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        order = order or self.ring.order
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = None):
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = None):
        if not self.terms:
            return self
        f = self.ring.field
        lc = self.leading_coefficient(order)
        if lc == f.one:
            return self
        inv = f.inv(lc)
        return Polynomial(self.ring, {m: f.mul(c, inv) for m, c in self.terms.items()}, _clean=False)

    def sorted_terms(self, order: MonomialOrder = None):
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- calculus and evaluation ---------------------------------------------

    def derivative(self, var_index: int):
        f = self.ring.field
        res: dict = {}
        for m, c in self.terms.items():
            e = m[var_index]
            if e == 0:
                continue
            dm = m[:var_index] + (e - 1,) + m[var_index + 1:]
            s = f.add(res.get(dm, f.zero), f.mul(c, f.from_int(e)))
            if s == f.zero:
                res.pop(dm, None)
            else:
                res[dm] = s
        return Polynomial(self.ring, res, _clean=False)

    def evaluate(self, point):
        """Evaluate at a full point (sequence of field values)."""
        f = self.ring.field
        total = f.zero
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = f.mul(v, f.pow(x, e))
            total = f.add(total, v)
        return total

    def map_ring(self, ring: PolyRing, var_map):
        """Reinterpret in `ring`; var_map[i] is the target index of variable i,
        or None for a variable that must not occur."""
        res = {}
        for m, c in self.terms.items():
            exps = [0] * ring.nvars
            for i, e in enumerate(m):
                if e:
                    if var_map[i] is None:
                        raise ValueError(
                            f"variable {self.ring.variables[i]} has no image in target ring")
                    exps[var_map[i]] = e
            res[tuple(exps)] = c
        return Polynomial(ring, res, _clean=False)

    # -- text format ----------------------------------------------------------

    def __repr__(self):
        return format_poly(self)

    def __str__(self):
        return format_poly(self)


def format_poly(p: Polynomial) -> str:
    """Canonical text form (wire format)."""
    if p.is_zero():
        return "0"
    field = p.ring.field
    names = p.ring.variables
    pieces = []
    for m, c in p.sorted_terms():
        text = field.format(c)
        negative = text.startswith("-")
        mag = text[1:] if negative else text
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if factors:
            body = "*".join(factors) if mag == "1" else mag + "*" + "*".join(factors)
        else:
            body = mag
        if not pieces:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    return "".join(pieces)


_TERM_SPLIT = re.compile(r"(?<=[\w)^])\s*([+-])\s*")
_FACTOR = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z_0-9]*)(\^(?P<exp>\d+))?$")


def parse_poly(ring: PolyRing, text: str) -> Polynomial:
    """Parse the canonical text form (also tolerates extra whitespace)."""
    text = text.strip()
    if text in ("", "0"):
        return ring.zero()
    field = ring.field
    # split into signed terms
    chunks = []
    sign = 1
    if text.startswith("-"):
        sign = -1
        text = text[1:].strip()
    elif text.startswith("+"):
        text = text[1:].strip()
    parts = _TERM_SPLIT.split(text)
    terms = [(sign, parts[0])]
    for i in range(1, len(parts), 2):
        terms.append((-1 if parts[i] == "-" else 1, parts[i + 1]))
    result = ring.zero()
    for sgn, chunk in terms:
        coeff = field.one
        exps = [0] * ring.nvars
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {chunk!r}")
            m = _FACTOR.match(factor)
            if m and m.group("name") in ring._index:
                exps[ring._index[m.group("name")]] += int(m.group("exp") or 1)
            else:
                coeff = field.mul(coeff, field.parse(factor))
        if sgn < 0:
            coeff = field.neg(coeff)
        result = result + Polynomial(ring, {tuple(exps): coeff})
    return result
