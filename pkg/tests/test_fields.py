"""Field arithmetic: axioms by random sampling, square roots, primality."""

import random
from fractions import Fraction

import pytest

from nullcone.fields import GF, QQ, NonResidueError, field_from_descriptor, is_prime


def test_primality_check_rejects_composites():
    for n in (1, 4, 6, 9, 32004, 2 ** 20):
        with pytest.raises(ValueError):
            GF(n)
    for p in (2, 3, 5, 101, 3203, 32003, 32009):
        assert GF(p).characteristic == p


def test_is_prime_on_a_range():
    sieve = [True] * 2000
    sieve[0] = sieve[1] = False
    for i in range(2, 2000):
        if sieve[i]:
            for j in range(2 * i, 2000, i):
                sieve[j] = False
    for n in range(2000):
        assert is_prime(n) == sieve[n]


def test_field_axioms_by_sampling():
    rng = random.Random(0)
    for field in (GF(7), GF(101), GF(32003), QQ):
        for _ in range(200):
            if field.kind == "prime-field":
                a = rng.randrange(1, field.characteristic)
                b = rng.randrange(field.characteristic)
                c = rng.randrange(field.characteristic)
            else:
                a = Fraction(rng.randrange(1, 50), rng.randrange(1, 9))
                b = Fraction(rng.randrange(-40, 40), rng.randrange(1, 9))
                c = Fraction(rng.randrange(-40, 40), rng.randrange(1, 9))
            assert field.mul(a, field.inv(a)) == field.one
            assert field.add(a, field.neg(a)) == field.zero
            assert field.mul(a, field.add(b, c)) == \
                field.add(field.mul(a, b), field.mul(a, c))


def test_residues_kept_reduced():
    F = GF(7)
    assert F.from_int(-1) == 6
    assert F.add(5, 5) == 3
    assert F.sub(2, 5) == 4


def test_sqrt_against_brute_force():
    for p in (3, 5, 7, 13, 101, 3203):
        F = GF(p)
        squares = {(x * x) % p for x in range(p)}
        for a in range(p):
            if a in squares:
                r = F.sqrt(a)
                assert r * r % p == a
            else:
                with pytest.raises(NonResidueError):
                    F.sqrt(a)


def test_sqrt_large_prime():
    F = GF(32003)
    rng = random.Random(1)
    for _ in range(50):
        x = rng.randrange(32003)
        r = F.sqrt(F.mul(x, x))
        assert F.mul(r, r) == F.mul(x, x)


def test_rational_squares():
    assert QQ.is_square(Fraction(4, 9))
    assert QQ.sqrt(Fraction(4, 9)) == Fraction(2, 3)
    assert not QQ.is_square(Fraction(2))
    assert not QQ.is_square(Fraction(-4))


def test_descriptor_round_trip():
    for desc in ("rational", "p=32003", "p=2"):
        assert field_from_descriptor(desc).descriptor() == desc
    with pytest.raises(ValueError):
        field_from_descriptor("galois")
