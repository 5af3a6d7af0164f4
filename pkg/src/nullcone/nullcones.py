"""Constructors for the three nullcone ideal families and the closed-form
height / arithmetic-rank / invariant-ring-dimension formulas.

Families:
  pfaffian   Y a 2t x n matrix, nullcone generated by the entries of Y^t*Omega*Y
  generic    Y (m x t) and Z (t x n), nullcone generated by the entries of Y*Z
  symmetric  Y a t x n matrix, nullcone generated by the entries of Y^t*Y

Variety-of-complexes ideals p_{i,j} = I_{i+1}(Y) + I_{j+1}(Z) + I_1(YZ) for
the generic family.  Generator orderings are canonical (row-major entries,
lexicographic row/column subsets), so serialized output is byte-stable.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

from .fields import Field, GF
from .ideals import Ideal
from .linalg import sym_det, sym_matmul, sym_pfaffian, sym_transpose
from .orders import GREVLEX, MonomialOrder
from .poly import PolyRing

FAMILIES = ("pfaffian", "generic", "symmetric")


def binom(i: int, j: int) -> int:
    """Binomial coefficient with the convention C(i, j) = 0 for i < j."""
    if j < 0 or i < j:
        return 0
    return comb(i, j)


@dataclass(frozen=True)
class FamilyParams:
    family: str
    t: int
    n: int
    m: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.t < 1 or self.n < 1:
            raise ValueError("t and n must be positive")
        if self.family == "generic":
            if self.m is None or self.m < 1:
                raise ValueError("generic family requires a positive m")
        elif self.m is not None:
            raise ValueError(f"{self.family} family takes no m")

    def label(self) -> str:
        if self.family == "generic":
            return f"generic(m={self.m},t={self.t},n={self.n})"
        return f"{self.family}(t={self.t},n={self.n})"


# -- rings and matrices of indeterminates -------------------------------------


def _grid_names(prefix, rows, cols):
    return [f"{prefix}_{i}_{j}" for i in range(1, rows + 1) for j in range(1, cols + 1)]


def coordinate_ring(params: FamilyParams, field: Field, order: MonomialOrder = GREVLEX) -> PolyRing:
    """The polynomial ring S carrying the family's nullcone ideal."""
    if params.family == "pfaffian":
        return PolyRing(_grid_names("y", 2 * params.t, params.n), field, order)
    if params.family == "generic":
        names = _grid_names("y", params.m, params.t) + _grid_names("z", params.t, params.n)
        return PolyRing(names, field, order)
    return PolyRing(_grid_names("y", params.t, params.n), field, order)


def indet_matrix(ring: PolyRing, prefix: str, rows: int, cols: int):
    """rows x cols matrix whose entries are the ring variables prefix_i_j."""
    return [[ring.var(f"{prefix}_{i}_{j}") for j in range(1, cols + 1)]
            for i in range(1, rows + 1)]


def omega_matrix(ring: PolyRing, t: int):
    """2t x 2t symbolic Omega: block diagonal with blocks [[0,1],[-1,0]]."""
    zero, one = ring.zero(), ring.one()
    m = [[zero for _ in range(2 * t)] for _ in range(2 * t)]
    for b in range(t):
        m[2 * b][2 * b + 1] = one
        m[2 * b + 1][2 * b] = -one
    return m


def presentation_ring(params: FamilyParams, field: Field, order: MonomialOrder = GREVLEX) -> PolyRing:
    """The ring K[X] presenting the invariant ring (X alternating, generic,
    or symmetric according to the family)."""
    n = params.n
    if params.family == "pfaffian":
        names = [f"x_{i}_{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    elif params.family == "generic":
        names = _grid_names("x", params.m, n)
    else:
        names = [f"x_{i}_{j}" for i in range(1, n + 1) for j in range(i, n + 1)]
    return PolyRing(names, field, order)


def presentation_matrix(params: FamilyParams, ring: PolyRing):
    """The structured matrix X inside its presentation ring."""
    n = params.n
    if params.family == "pfaffian":
        m = [[ring.zero() for _ in range(n)] for _ in range(n)]
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                v = ring.var(f"x_{i}_{j}")
                m[i - 1][j - 1] = v
                m[j - 1][i - 1] = -v
        return m
    if params.family == "generic":
        return indet_matrix(ring, "x", params.m, n)
    m = [[None] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            v = ring.var(f"x_{i}_{j}")
            m[i - 1][j - 1] = v
            m[j - 1][i - 1] = v
    return m


def invariant_matrix(params: FamilyParams, ring: PolyRing):
    """Y^t*Omega*Y, Y*Z, or Y^t*Y in the coordinate ring."""
    if params.family == "pfaffian":
        Y = indet_matrix(ring, "y", 2 * params.t, params.n)
        return sym_matmul(sym_matmul(sym_transpose(Y), omega_matrix(ring, params.t)), Y)
    if params.family == "generic":
        Y = indet_matrix(ring, "y", params.m, params.t)
        Z = indet_matrix(ring, "z", params.t, params.n)
        return sym_matmul(Y, Z)
    Y = indet_matrix(ring, "y", params.t, params.n)
    return sym_matmul(sym_transpose(Y), Y)


def invariant_entries(params: FamilyParams, ring: PolyRing):
    """The distinct entries of the invariant matrix, canonically ordered.

    Pfaffian: strictly upper triangle; symmetric: upper triangle including
    the diagonal; generic: all entries, row-major.
    """
    Q = invariant_matrix(params, ring)
    n = params.n
    if params.family == "pfaffian":
        return [Q[i][j] for i in range(n) for j in range(i + 1, n)]
    if params.family == "generic":
        return [Q[i][j] for i in range(params.m) for j in range(n)]
    return [Q[i][j] for i in range(n) for j in range(i, n)]


# -- nullcone ideals -----------------------------------------------------------


def pfaffian_nullcone(params: FamilyParams, field: Field, order: MonomialOrder = GREVLEX) -> Ideal:
    if params.family != "pfaffian":
        raise ValueError("pfaffian params required")
    ring = coordinate_ring(params, field, order)
    return Ideal(ring, invariant_entries(params, ring))


def generic_nullcone(params: FamilyParams, field: Field, order: MonomialOrder = GREVLEX) -> Ideal:
    if params.family != "generic":
        raise ValueError("generic params required")
    ring = coordinate_ring(params, field, order)
    return Ideal(ring, invariant_entries(params, ring))


def symmetric_nullcone(params: FamilyParams, field: Field, order: MonomialOrder = GREVLEX) -> Ideal:
    if params.family != "symmetric":
        raise ValueError("symmetric params required")
    ring = coordinate_ring(params, field, order)
    return Ideal(ring, invariant_entries(params, ring))


def nullcone_ideal(params: FamilyParams, field: Field, order: MonomialOrder = GREVLEX) -> Ideal:
    builder = {
        "pfaffian": pfaffian_nullcone,
        "generic": generic_nullcone,
        "symmetric": symmetric_nullcone,
    }[params.family]
    return builder(params, field, order)


def minors(matrix, size: int):
    """All size x size minors, indexed by lexicographic row/column subsets."""
    rows, cols = len(matrix), len(matrix[0]) if matrix else 0
    if size <= 0:
        raise ValueError("minor size must be positive")
    if size > rows or size > cols:
        return []
    out = []
    for ri in combinations(range(rows), size):
        for ci in combinations(range(cols), size):
            out.append(sym_det([[matrix[r][c] for c in ci] for r in ri]))
    return out


def principal_pfaffians(matrix, size: int, zero):
    """Pfaffians of the size x size principal submatrices (size even)."""
    n = len(matrix)
    if size % 2 == 1 or size <= 0:
        raise ValueError("Pfaffian size must be a positive even integer")
    for i in range(n):
        if matrix[i][i] != zero:
            raise ValueError("alternating required")
        for j in range(i + 1, n):
            if matrix[i][j] != -matrix[j][i]:
                raise ValueError("alternating required")
    if size > n:
        return []
    out = []
    for idx in combinations(range(n), size):
        out.append(sym_pfaffian([[matrix[r][c] for c in idx] for r in idx], zero))
    return out


def variety_of_complexes(params: FamilyParams, i: int, j: int, field: Field,
                         order: MonomialOrder = GREVLEX) -> Ideal:
    """p_{i,j} = I_{i+1}(Y) + I_{j+1}(Z) + I_1(YZ) for the generic family."""
    if params.family != "generic":
        raise ValueError("variety of complexes lives in the generic family")
    m, t, n = params.m, params.t, params.n
    if i < 0 or j < 0 or i + j > t or i > m or j > n:
        raise ValueError(f"invalid rank bounds (i,j)=({i},{j}) for (m,t,n)=({m},{t},{n})")
    ring = coordinate_ring(params, field, order)
    Y = indet_matrix(ring, "y", m, t)
    Z = indet_matrix(ring, "z", t, n)
    gens = minors(Y, i + 1) + minors(Z, j + 1) + invariant_entries(params, ring)
    return Ideal(ring, gens)


def presentation_ideal(params: FamilyParams, field: Field, order: MonomialOrder = GREVLEX) -> Ideal:
    """Defining ideal of the invariant ring in K[X]: Pf_{2t+2}(X) for the
    pfaffian family, I_{t+1}(X) for the generic and symmetric families."""
    ring = presentation_ring(params, field, order)
    X = presentation_matrix(params, ring)
    if params.family == "pfaffian":
        gens = principal_pfaffians(X, 2 * params.t + 2, ring.zero())
    else:
        gens = minors(X, params.t + 1)
    return Ideal(ring, gens)


# -- closed-form formulas --------------------------------------------------------


def height_pij(m: int, t: int, n: int, i: int, j: int) -> int:
    """Height of p_{i,j} (requires i <= m and j <= n)."""
    return (m - i) * (t - i) + (n - j) * (t - j) + i * j


def _maximal_rank_pairs(m: int, t: int, n: int):
    """Rank pairs of the minimal primes of the generic nullcone."""
    imax, jmax = min(m, t), min(n, t)
    pairs = [(i, t - i) for i in range(max(0, t - jmax), imax + 1) if t - i <= jmax]
    if not pairs:
        pairs = [(imax, jmax)]
    return pairs


def height_formula(params: FamilyParams) -> int:
    """Height of the nullcone ideal, per the closed-form case splits."""
    t, n = params.t, params.n
    if params.family == "pfaffian":
        if n <= t + 1:
            return binom(n, 2)
        return n * t - binom(t + 1, 2)
    if params.family == "generic":
        m = params.m
        return min(height_pij(m, t, n, i, j) for i, j in _maximal_rank_pairs(m, t, n))
    # symmetric
    if 2 * n <= t + 1:
        return binom(n + 1, 2)
    s = t // 2
    if t % 2 == 0:
        return n * s - binom(s, 2)
    return n * s + n - binom(s + 1, 2)


def invariant_ring_dim(params: FamilyParams) -> int:
    """Krull dimension of the invariant ring."""
    t, n = params.t, params.n
    if params.family == "pfaffian":
        return binom(n, 2) - binom(n - 2 * t, 2)
    if params.family == "generic":
        m = params.m
        if t < min(m, n):
            return m * t + n * t - t * t
        return m * n
    return binom(n + 1, 2) - binom(n + 1 - t, 2)


def ara_formula(params: FamilyParams) -> int:
    """Arithmetic rank of the nullcone ideal (equals the invariant ring
    dimension in every family)."""
    return invariant_ring_dim(params)


def stci_predicate(params: FamilyParams) -> bool:
    """Whether the nullcone ideal is a set-theoretic complete intersection."""
    t, n = params.t, params.n
    if params.family == "pfaffian":
        return n <= t + 1
    if params.family == "generic":
        return params.m + n <= t + 1
    return t == 1 or 2 * n <= t + 1


def minimal_generator_count(params: FamilyParams) -> int:
    if params.family == "pfaffian":
        return binom(params.n, 2)
    if params.family == "generic":
        return params.m * params.n
    return binom(params.n + 1, 2)


def formulas_block(params: FamilyParams) -> dict:
    """All closed-form numerics for one parameter point (JSON-ready)."""
    return {
        "family": params.family,
        "t": params.t,
        "n": params.n,
        "m": params.m,
        "height": height_formula(params),
        "ara": ara_formula(params),
        "invariant_ring_dim": invariant_ring_dim(params),
        "stci": stci_predicate(params),
        "minimal_generators": minimal_generator_count(params),
    }


def standard_field(descriptor: str = "p=32003") -> Field:
    """Default working field for desk-scale verification."""
    from .fields import field_from_descriptor
    return field_from_descriptor(descriptor)


DEFAULT_PRIME = 32003
DEFAULT_FIELD = GF(DEFAULT_PRIME)
