"""Exact coefficient fields: the rationals and prime fields F_p.

Field elements are plain Python values (Fraction for the rationals, int in
[0, p) for F_p); a Field object supplies the arithmetic.  This keeps the hot
loops of the Groebner engine on native int/Fraction operations.
"""

from fractions import Fraction
from math import isqrt


class NonResidueError(ArithmeticError):
    """Raised when a square root is requested for a quadratic nonresidue."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3 * 10^24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Common interface; subclasses implement exact arithmetic on raw values."""

    kind = "abstract"
    characteristic = 0

    def __eq__(self, other):
        return isinstance(other, Field) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    def descriptor(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"Field({self.descriptor()})"


class RationalField(Field):
    """The field Q with Fraction values."""

    kind = "rational"
    characteristic = 0

    zero = Fraction(0)
    one = Fraction(1)

    def descriptor(self):
        return "rational"

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def pow(self, a, e):
        return a ** e

    def is_square(self, a):
        if a < 0:
            return False
        n, d = a.numerator, a.denominator
        rn, rd = isqrt(n), isqrt(d)
        return rn * rn == n and rd * rd == d

    def sqrt(self, a):
        if not self.is_square(a):
            raise NonResidueError(f"{a} is not a square in Q")
        return Fraction(isqrt(a.numerator), isqrt(a.denominator))

    def format(self, a):
        return str(a)  # "3" or "-1/2"

    def parse(self, text):
        return Fraction(text)


class PrimeField(Field):
    """The field F_p for a 64-bit prime p; values are ints in [0, p)."""

    kind = "prime-field"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 1 << 64:
            raise ValueError("prime must fit in 64 bits")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def descriptor(self):
        return f"p={self.p}"

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        c = a + b
        return c - self.p if c >= self.p else c

    def sub(self, a, b):
        c = a - b
        return c + self.p if c < 0 else c

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return self.p - a if a else 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, e):
        return pow(a, e, self.p)

    def legendre(self, a):
        if a % self.p == 0:
            return 0
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1

    def is_square(self, a):
        return self.legendre(a) >= 0

    def sqrt(self, a):
        """Square root mod p by Tonelli-Shanks."""
        p = self.p
        a %= p
        if a == 0:
            return 0
        if p == 2:
            return a
        if self.legendre(a) != 1:
            raise NonResidueError(f"{a} is a quadratic nonresidue mod {p}")
        if p % 4 == 3:
            return pow(a, (p + 1) // 4, p)
        # write p - 1 = q * 2^s with q odd
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while self.legendre(z) != -1:
            z += 1
        m, c = s, pow(z, q, p)
        t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            t2, i = t, 0
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return r

    def format(self, a):
        return str(a)

    def parse(self, text):
        return int(text) % self.p


QQ = RationalField()

_prime_fields: dict = {}


def GF(p: int) -> PrimeField:
    """Return the (cached) prime field F_p."""
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def field_from_descriptor(desc: str) -> Field:
    """Parse "rational" or "p=<prime>" into a Field."""
    if desc == "rational":
        return QQ
    if desc.startswith("p="):
        return GF(int(desc[2:]))
    raise ValueError(f"unknown field descriptor {desc!r}")
