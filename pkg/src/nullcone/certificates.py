"""Arithmetic-rank certificates and the localization-structure checks.

A certificate takes ara-many random linear combinations of the invariant
entries, checks that they cut the presentation ring K[X]/(defining ideal)
down to dimension zero (so they are a homogeneous system of parameters),
and that in the coordinate ring they generate the nullcone ideal up to
radical, in both directions.  Everything is seeded and reproducible.
"""

import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .fields import Field, GF, QQ
from .groebner import Budget, DEFAULT_BUDGET, normal_form
from .ideals import Ideal, krull_dimension, radical_equal, radical_member, saturate
from .linalg import ExactMatrix, sym_matmul, sym_transpose
from .nullcones import (
    FamilyParams,
    ara_formula,
    binom,
    coordinate_ring,
    formulas_block,
    indet_matrix,
    invariant_entries,
    nullcone_ideal,
    omega_matrix,
    presentation_ideal,
    presentation_ring,
)
from .poly import Polynomial, PolyRing


class RetryExhaustedError(RuntimeError):
    """No random attempt produced a verifiable certificate / general position."""


class ConstructionDegenerateError(RuntimeError):
    """Random evaluation points kept landing on a singular chart."""


MIN_CERTIFICATE_PRIME = 101


def derived_seed(seed: int, attempt: int) -> int:
    return seed * 1_000_003 + attempt


@dataclass
class CheckReport:
    name: str
    passed: bool
    witness: Optional[str] = None
    elapsed_ms: int = 0
    detail: dict = dc_field(default_factory=dict)

    def to_json(self, include_timing: bool = False) -> dict:
        rec = {"name": self.name, "pass": self.passed, "witness": self.witness,
               "elapsed_ms": self.elapsed_ms if include_timing else 0}
        if self.detail:
            rec["detail"] = self.detail
        return rec


@dataclass
class HsopSample:
    params: FamilyParams
    field: Field
    seed: int
    coeffs: tuple                 # coeffs[i][j]: candidate i, invariant entry j
    generators_in_R: tuple
    generators_in_S: tuple


@dataclass
class AraCertificate:
    params: FamilyParams
    field: Field
    seed: int
    attempt: int
    candidate_count: int
    generators_in_R: tuple
    generators_in_S: tuple
    transcript: list
    verified: bool

    def to_json(self, include_timing: bool = False) -> dict:
        p = self.params
        return {
            "kind": "ara-certificate",
            "params": {"family": p.family, "t": p.t, "n": p.n, "m": p.m},
            "field": self.field.descriptor(),
            "seed": self.seed,
            "attempt": self.attempt,
            "derived_seed": derived_seed(self.seed, self.attempt),
            "candidate_count": self.candidate_count,
            "formulas": formulas_block(p),
            "generators_in_R": [str(g) for g in self.generators_in_R],
            "generators_in_S": [str(g) for g in self.generators_in_S],
            "transcript": [r.to_json(include_timing) for r in self.transcript],
            "verified": self.verified,
        }


def _check_certificate_field(field: Field, min_prime: int = MIN_CERTIFICATE_PRIME):
    if field.kind == "rational":
        return
    if field.characteristic == 2:
        raise ValueError("certificate pipeline refuses characteristic two; "
                         "use check_char2_example for the F_2 behavior")
    if field.characteristic < min_prime:
        raise ValueError(f"certificate pipeline wants p >= {min_prime}")


def _random_coeff(rng: random.Random, field: Field):
    if field.kind == "rational":
        v = rng.randrange(40)  # uniform on {-20..-1, 1..20}
        return field.from_int(v - 20 if v < 20 else v - 19)
    return field.from_int(rng.randrange(field.characteristic))


def sample_hsop(params: FamilyParams, field: Field, seed: int,
                count: Optional[int] = None,
                min_prime: int = MIN_CERTIFICATE_PRIME) -> HsopSample:
    """Draw `count` (default ara) random linear combinations of the invariant
    entries, in both the presentation ring and the coordinate ring."""
    _check_certificate_field(field, min_prime)
    if count is None:
        count = ara_formula(params)
    rng = random.Random(seed)
    ring_S = coordinate_ring(params, field)
    ring_R = presentation_ring(params, field)
    entries_S = invariant_entries(params, ring_S)
    entries_R = ring_R.gens()
    assert len(entries_S) == len(entries_R)
    coeffs = []
    gens_R = []
    gens_S = []
    for _ in range(count):
        row = tuple(_random_coeff(rng, field) for _ in entries_S)
        coeffs.append(row)
        acc_R = ring_R.zero()
        acc_S = ring_S.zero()
        for c, xr, xs in zip(row, entries_R, entries_S):
            if c != field.zero:
                acc_R = acc_R + xr.scale(c)
                acc_S = acc_S + xs.scale(c)
        gens_R.append(acc_R)
        gens_S.append(acc_S)
    return HsopSample(params, field, seed, tuple(coeffs), tuple(gens_R), tuple(gens_S))


def hsop_from_coeffs(params: FamilyParams, field: Field, coeffs) -> HsopSample:
    """Build a candidate set from an externally supplied coefficient matrix."""
    ring_S = coordinate_ring(params, field)
    ring_R = presentation_ring(params, field)
    entries_S = invariant_entries(params, ring_S)
    entries_R = ring_R.gens()
    gens_R, gens_S = [], []
    for row in coeffs:
        if len(row) != len(entries_S):
            raise ValueError("coefficient row length must match invariant entry count")
        acc_R, acc_S = ring_R.zero(), ring_S.zero()
        for c, xr, xs in zip(row, entries_R, entries_S):
            c = field.from_int(c) if isinstance(c, int) else c
            acc_R = acc_R + xr.scale(c)
            acc_S = acc_S + xs.scale(c)
        gens_R.append(acc_R)
        gens_S.append(acc_S)
    return HsopSample(params, field, -1, tuple(tuple(r) for r in coeffs),
                      tuple(gens_R), tuple(gens_S))


def verify_certificate(sample: HsopSample, nullcone: Optional[Ideal] = None,
                       budget: Budget = DEFAULT_BUDGET,
                       attempt: int = 0) -> AraCertificate:
    """Run the three certificate checks and assemble the transcript.

    (1) hsop-check: the candidates cut K[X]/(defining ideal) to dimension 0;
    (2) radical-subset: every candidate image lies in the nullcone ideal;
    (3) radical-superset: every nullcone generator lies in the radical of the
        candidate ideal.
    """
    params, field = sample.params, sample.field
    transcript = []

    t0 = time.monotonic()
    defining = presentation_ideal(params, field)
    hsop_ideal = Ideal(defining.ring, list(defining.generators) + list(sample.generators_in_R))
    dim = krull_dimension(hsop_ideal, budget)
    ok1 = dim == 0
    transcript.append(CheckReport(
        "hsop-check", ok1,
        witness=None if ok1 else f"dimension {dim} != 0 in presentation ring",
        elapsed_ms=int(1000 * (time.monotonic() - t0)),
        detail={"presentation_dim": dim}))

    if nullcone is None:
        nullcone = nullcone_ideal(params, field)
    t0 = time.monotonic()
    gb = nullcone.groebner_basis(budget=budget)
    bad = None
    for g in sample.generators_in_S:
        if not normal_form(g, gb).is_zero():
            bad = g
            break
    transcript.append(CheckReport(
        "radical-subset", bad is None,
        witness=None if bad is None else str(bad),
        elapsed_ms=int(1000 * (time.monotonic() - t0))))

    t0 = time.monotonic()
    cand_ideal = Ideal(nullcone.ring, list(sample.generators_in_S))
    bad = None
    for g in nullcone.generators:
        if not radical_member(g, cand_ideal, budget):
            bad = g
            break
    transcript.append(CheckReport(
        "radical-superset", bad is None,
        witness=None if bad is None else str(bad),
        elapsed_ms=int(1000 * (time.monotonic() - t0))))

    verified = all(r.passed for r in transcript)
    return AraCertificate(params, field, sample.seed, attempt,
                          len(sample.generators_in_S),
                          sample.generators_in_R, sample.generators_in_S,
                          transcript, verified)


def certify(params: FamilyParams, field: Field, seed: int = 0, retries: int = 20,
            budget: Budget = DEFAULT_BUDGET) -> AraCertificate:
    """Produce a verified certificate, retrying with derived seeds.

    Raises RetryExhaustedError when no attempt verifies; the paper guarantees
    existence over infinite fields, so exhaustion indicates a too-small field
    rather than a refutation.
    """
    nullcone = nullcone_ideal(params, field)
    last = None
    for attempt in range(max(1, retries)):
        sample = sample_hsop(params, field, derived_seed(seed, attempt))
        sample = HsopSample(params, field, seed, sample.coeffs,
                            sample.generators_in_R, sample.generators_in_S)
        cert = verify_certificate(sample, nullcone, budget, attempt=attempt)
        if cert.verified:
            return cert
        last = cert
    raise RetryExhaustedError(
        f"no passing hsop in {retries} attempts for {params.label()} over "
        f"{field.descriptor()}; last transcript: "
        f"{[(r.name, r.passed) for r in last.transcript]}")


# -- Example 4.2: characteristic two ------------------------------------------


def check_char2_example(n: int, prime: int = 2, budget: Budget = DEFAULT_BUDGET) -> CheckReport:
    """Over F_2 the radical of the symmetric nullcone for a 2 x n matrix is
    generated by the n column-sum linear forms; over an odd prime this fails."""
    t0 = time.monotonic()
    field = GF(prime)
    params = FamilyParams("symmetric", 2, n)
    B = nullcone_ideal(params, field)
    ring = B.ring
    forms = [ring.var(f"y_1_{j}") + ring.var(f"y_2_{j}") for j in range(1, n + 1)]
    ok, wit = radical_equal(B, Ideal(ring, forms), budget)
    return CheckReport(
        f"char2-example(n={n},p={prime})", ok,
        witness=None if ok else f"{wit['direction']}: {wit['generator']}",
        elapsed_ms=int(1000 * (time.monotonic() - t0)),
        detail={"linear_forms": [str(f) for f in forms]})


# -- localized elements num / u^k ----------------------------------------------


class LocalElem:
    """An element num / u^k of the localization of a polynomial ring at the
    coordinate u.  Supports ring arithmetic, derivatives, and evaluation."""

    __slots__ = ("ring", "u_index", "num", "k")

    def __init__(self, ring: PolyRing, u_index: int, num: Polynomial, k: int = 0):
        self.ring = ring
        self.u_index = u_index
        self.num = num
        self.k = 0 if num.is_zero() else k

    @staticmethod
    def lift(poly: Polynomial, u_index: int) -> "LocalElem":
        return LocalElem(poly.ring, u_index, poly, 0)

    def _u(self) -> Polynomial:
        name = self.ring.variables[self.u_index]
        return self.ring.var(name)

    def _match(self, other: "LocalElem"):
        a, b = self, other
        if a.k == b.k:
            return a.num, b.num, a.k
        u = self._u()
        if a.k < b.k:
            return a.num * u ** (b.k - a.k), b.num, b.k
        return a.num, b.num * u ** (a.k - b.k), a.k

    def __add__(self, other):
        n1, n2, k = self._match(other)
        return LocalElem(self.ring, self.u_index, n1 + n2, k)

    def __sub__(self, other):
        n1, n2, k = self._match(other)
        return LocalElem(self.ring, self.u_index, n1 - n2, k)

    def __mul__(self, other):
        return LocalElem(self.ring, self.u_index, self.num * other.num, self.k + other.k)

    def __neg__(self):
        return LocalElem(self.ring, self.u_index, -self.num, self.k)

    def is_zero(self):
        return self.num.is_zero()

    def cleared(self) -> Polynomial:
        """The numerator: the element scaled by u^k into the polynomial ring."""
        return self.num

    def derivative(self, var_index: int) -> "LocalElem":
        dnum = self.num.derivative(var_index)
        if self.k == 0:
            return LocalElem(self.ring, self.u_index, dnum, 0)
        u = self._u()
        num = dnum * u
        if var_index == self.u_index:
            num = num - self.num.scale(self.num.ring.field.from_int(self.k))
        return LocalElem(self.ring, self.u_index, num, self.k + 1)

    def evaluate(self, point):
        f = self.ring.field
        denom = f.pow(point[self.u_index], self.k)
        return f.div(self.num.evaluate(point), denom)

    def __repr__(self):
        if self.k == 0:
            return str(self.num)
        return f"({self.num})/{self.ring.variables[self.u_index]}^{self.k}"


def _local_matrix(rows, u_index):
    return [[LocalElem.lift(p, u_index) for p in row] for row in rows]


def _jacobian_full_rank(elements, ring: PolyRing, field: Field, rng: random.Random,
                        unit_index: int, tries: int = 8) -> bool:
    """Jacobian rank of `elements` at a random point with the unit nonzero."""
    nvars = ring.nvars
    derivs = [[e.derivative(j) for j in range(nvars)] for e in elements]
    for _ in range(tries):
        point = [field.from_int(rng.randrange(1, field.characteristic))
                 if field.kind == "prime-field" else field.from_int(rng.randrange(1, 50))
                 for _ in range(nvars)]
        if point[unit_index] == field.zero:
            continue
        rows = [[d.evaluate(point) for d in row] for row in derivs]
        if ExactMatrix(field, rows).rank() == nvars:
            return True
    raise ConstructionDegenerateError(
        "Jacobian rank deficient at every sampled chart point")


# -- Lemma 2.5 / Lemma 3.6: localization structure ------------------------------


def check_localization_pfaffian(t: int, n: int, field: Field = None, seed: int = 0,
                                budget: Budget = DEFAULT_BUDGET) -> CheckReport:
    """Invert y_1_1 and verify the pfaffian nullcone splits as the nullcone of
    a (2t-2) x (n-1) matrix plus the first row of invariant entries."""
    t0 = time.monotonic()
    field = field or GF(32003)
    params = FamilyParams("pfaffian", t, n)
    P = nullcone_ideal(params, field)
    ring = P.ring
    u_index = ring.var_index("y_1_1")
    y11 = ring.var("y_1_1")
    Q = sym_matmul(sym_matmul(sym_transpose(indet_matrix(ring, "y", 2 * t, n)),
                              omega_matrix(ring, t)),
                   indet_matrix(ring, "y", 2 * t, n))
    fs = [Q[0][j] for j in range(1, n)]

    yprime_entries = []
    cleared_qprime = []
    if t >= 2:
        Y = indet_matrix(ring, "y", 2 * t, n)
        omega = omega_matrix(ring, t)
        v1 = [Y[i][0] for i in range(2 * t)]
        pairing = sym_matmul([v1], omega)[0]  # <v1, e_i> as the i-th entry
        cols = []
        cols.append([LocalElem.lift(v, u_index) for v in v1])
        e2_over = [LocalElem(ring, u_index, ring.one() if i == 1 else ring.zero(), 1)
                   for i in range(2 * t)]
        cols.append(e2_over)
        for i in range(2, 2 * t):  # c_i = e_i - (<v1,e_i>/y11) e_2
            col = [LocalElem(ring, u_index, ring.zero(), 0) for _ in range(2 * t)]
            col[i] = LocalElem.lift(ring.one(), u_index)
            col[1] = LocalElem(ring, u_index, -pairing[i], 1)
            cols.append(col)
        Pmat = [[cols[j][i] for j in range(2 * t)] for i in range(2 * t)]
        omegaL = _local_matrix(omega, u_index)
        Minv = Pmat
        M = [[-x for x in row]
             for row in sym_matmul(sym_matmul(omegaL, sym_transpose(Minv)), omegaL)]
        MY = sym_matmul(M, _local_matrix(Y, u_index))
        Yp = [[MY[i][j] for j in range(1, n)] for i in range(2, 2 * t)]
        yprime_entries = [e for row in Yp for e in row]
        omega_small = _local_matrix(omega_matrix(ring, t - 1), u_index)
        Qp = sym_matmul(sym_matmul(sym_transpose(Yp), omega_small), Yp)
        for i in range(n - 1):
            for j in range(i + 1, n - 1):
                cleared_qprime.append(Qp[i][j].cleared())

    J = Ideal(ring, cleared_qprime + fs)
    satP = saturate(P, y11, budget)
    satJ = saturate(J, y11, budget)
    ok, wit = radical_equal(satP, satJ, budget)

    elements = list(yprime_entries)
    elements += [LocalElem.lift(ring.var(f"y_1_{j}"), u_index) for j in range(1, n + 1)]
    elements += [LocalElem.lift(ring.var(f"y_{i}_1"), u_index) for i in range(2, 2 * t + 1)]
    elements += [LocalElem.lift(f, u_index) for f in fs]
    assert len(elements) == 2 * t * n
    jac_ok = _jacobian_full_rank(elements, ring, field, random.Random(seed), u_index)

    passed = ok and jac_ok
    return CheckReport(
        f"localization-pfaffian(t={t},n={n})", passed,
        witness=None if ok else f"{wit['direction']}: {wit['generator']}",
        elapsed_ms=int(1000 * (time.monotonic() - t0)),
        detail={"degenerate_branch": t == 1,
                "independent_elements": len(elements),
                "jacobian_full_rank": jac_ok})


def check_localization_generic(m: int, t: int, n: int, field: Field = None, seed: int = 0,
                               budget: Budget = DEFAULT_BUDGET) -> CheckReport:
    """Invert y_1_1 and verify I_1(YZ) splits as I_1(Y'Z') plus the first row
    of YZ, with Y' the (m-1) x (t-1) matrix of 2x2 pivot minors of Y."""
    t0 = time.monotonic()
    field = field or GF(32003)
    params = FamilyParams("generic", t, n, m=m)
    A = nullcone_ideal(params, field)
    ring = A.ring
    u_index = ring.var_index("y_1_1")
    y11 = ring.var("y_1_1")
    Y = indet_matrix(ring, "y", m, t)
    Z = indet_matrix(ring, "z", t, n)
    YZ = sym_matmul(Y, Z)
    fs = [YZ[0][j] for j in range(n)]

    yprime_entries = []
    cleared = []
    if t >= 2 and m >= 2:
        Yp = [[LocalElem(ring, u_index, Y[i][k] * y11 - Y[0][k] * Y[i][0], 1)
               for k in range(1, t)] for i in range(1, m)]
        yprime_entries = [e for row in Yp for e in row]
        Zp = _local_matrix([row[:] for row in Z[1:]], u_index)
        prod = sym_matmul(Yp, Zp)
        cleared = [prod[i][j].cleared() for i in range(m - 1) for j in range(n)]

    J = Ideal(ring, cleared + fs)
    satA = saturate(A, y11, budget)
    satJ = saturate(J, y11, budget)
    ok, wit = radical_equal(satA, satJ, budget)

    elements = list(yprime_entries)
    elements += [LocalElem.lift(Z[i][j], u_index) for i in range(1, t) for j in range(n)]
    elements += [LocalElem.lift(ring.var(f"y_1_{k}"), u_index) for k in range(1, t + 1)]
    elements += [LocalElem.lift(ring.var(f"y_{i}_1"), u_index) for i in range(2, m + 1)]
    elements += [LocalElem.lift(f, u_index) for f in fs]
    assert len(elements) == m * t + t * n
    jac_ok = _jacobian_full_rank(elements, ring, field, random.Random(seed), u_index)

    passed = ok and jac_ok
    return CheckReport(
        f"localization-generic(m={m},t={t},n={n})", passed,
        witness=None if ok else f"{wit['direction']}: {wit['generator']}",
        elapsed_ms=int(1000 * (time.monotonic() - t0)),
        detail={"degenerate_branch": t == 1,
                "independent_elements": len(elements),
                "jacobian_full_rank": jac_ok})


def check_symmetric_localization(t: int, n: int, field: Field = None, seed: int = 0,
                                 retries: int = 20,
                                 budget: Budget = DEFAULT_BUDGET) -> CheckReport:
    """Lemma 4.4 chart: with the first column of Y specialized to a standard
    vector, the nullcone agrees up to radical with the first-row entries plus
    ell general combinations of the bottom-right block of Y^t*Y."""
    if t < 2:
        raise ValueError("symmetric localization needs t >= 2")
    if n < t:
        raise ValueError("the reduction chart needs n >= t")
    t0 = time.monotonic()
    field = field or GF(32009)  # 32009 = 1 mod 4, so -1 is a square
    if field.kind == "prime-field" and field.characteristic == 2:
        raise ValueError("characteristic two excluded")
    names = [f"y_{i}_{j}" for i in range(2, t + 1) for j in range(1, n + 1)]
    ring = PolyRing(names, field)
    one, zero = ring.one(), ring.zero()
    Y = [[one] + [zero] * (n - 1)]
    Y += [[ring.var(f"y_{i}_{j}") for j in range(1, n + 1)] for i in range(2, t + 1)]
    G = sym_matmul(sym_transpose(Y), Y)
    B = Ideal(ring, [G[i][j] for i in range(n) for j in range(i, n)])
    first_row = [G[0][j] for j in range(n)]
    ell = binom(n, 2) - binom(n + 2 - t, 2)
    block_entries = [G[i][j] for i in range(1, n) for j in range(i, n)]

    last_wit = None
    for attempt in range(max(1, retries)):
        rng = random.Random(derived_seed(seed, attempt))
        combos = []
        for _ in range(ell):
            acc = ring.zero()
            for e in block_entries:
                c = _random_coeff(rng, field)
                if c != field.zero:
                    acc = acc + e.scale(c)
            combos.append(acc)
        C = Ideal(ring, first_row + combos)
        ok, wit = radical_equal(C, B, budget)
        if ok:
            return CheckReport(
                f"localization-symmetric(t={t},n={n})", True,
                elapsed_ms=int(1000 * (time.monotonic() - t0)),
                detail={"generator_count": n + ell, "ell": ell, "attempt": attempt})
        last_wit = wit
    raise RetryExhaustedError(
        f"no general combination worked in {retries} attempts; last witness "
        f"{last_wit['direction']}: {last_wit['generator']}")


def check_remark_det_identity(n: int, field: Field = QQ) -> CheckReport:
    """det(Y^t*Y) = y11^2 * det(A^t*A) for Y in block form [[y11, 0], [v, A]]."""
    t0 = time.monotonic()
    names = ["y_1_1"]
    names += [f"y_{i}_1" for i in range(2, n + 1)]
    names += [f"a_{i}_{j}" for i in range(2, n + 1) for j in range(2, n + 1)]
    ring = PolyRing(names, field)
    zero = ring.zero()
    Y = [[ring.var("y_1_1")] + [zero] * (n - 1)]
    for i in range(2, n + 1):
        Y.append([ring.var(f"y_{i}_1")] + [ring.var(f"a_{i}_{j}") for j in range(2, n + 1)])
    from .linalg import sym_det
    lhs = sym_det(sym_matmul(sym_transpose(Y), Y))
    if n == 1:
        rhs = ring.var("y_1_1") * ring.var("y_1_1")
    else:
        A = [[Y[i][j] for j in range(1, n)] for i in range(1, n)]
        rhs = ring.var("y_1_1") * ring.var("y_1_1") * sym_det(sym_matmul(sym_transpose(A), A))
    ok = lhs == rhs
    return CheckReport(
        f"remark-det-identity(n={n})", ok,
        witness=None if ok else str(lhs - rhs),
        elapsed_ms=int(1000 * (time.monotonic() - t0)))
