"""Exact linear algebra over a coefficient field, plus generic symbolic
determinants and Pfaffians usable with polynomial (or localized) entries.
"""

from .fields import Field


class SingularMatrixError(ArithmeticError):
    """Inverse or pivot requested on a singular matrix."""


class ExactMatrix:
    """Immutable matrix with entries in an exact field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data):
        self.field = field
        self.data = tuple(tuple(row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.rows else 0
        if any(len(r) != self.cols for r in self.data):
            raise ValueError("ragged rows")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_ints(field, data):
        return ExactMatrix(field, [[field.from_int(x) for x in row] for row in data])

    @staticmethod
    def identity(field, n):
        one, zero = field.one, field.zero
        return ExactMatrix(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(field, rows, cols):
        z = field.zero
        return ExactMatrix(field, [[z] * cols for _ in range(rows)])

    @staticmethod
    def omega(field, t):
        """The 2t x 2t block-diagonal alternating form with blocks [[0,1],[-1,0]]."""
        m = [[field.zero] * (2 * t) for _ in range(2 * t)]
        for b in range(t):
            m[2 * b][2 * b + 1] = field.one
            m[2 * b + 1][2 * b] = field.neg(field.one)
        return ExactMatrix(field, m)

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.data))

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in row) for row in self.data)
        return f"ExactMatrix[{body}]"

    def transpose(self):
        return ExactMatrix(self.field, list(zip(*self.data))) if self.rows else \
            ExactMatrix(self.field, [[] for _ in range(self.cols)])

    def submatrix(self, row_idx, col_idx):
        return ExactMatrix(self.field, [[self.data[i][j] for j in col_idx] for i in row_idx])

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return ExactMatrix(self.field, [a + b for a, b in zip(self.data, other.data)])

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def with_entry(self, i, j, value):
        data = [list(r) for r in self.data]
        data[i][j] = value
        return ExactMatrix(self.field, data)

    @staticmethod
    def block_diag(field, blocks):
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        data = [[field.zero] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    data[r + i][c + j] = b.data[i][j]
            r += b.rows
            c += b.cols
        return ExactMatrix(field, data)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        f = self.field
        return ExactMatrix(f, [[f.add(a, b) for a, b in zip(ra, rb)]
                               for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other):
        f = self.field
        return ExactMatrix(f, [[f.sub(a, b) for a, b in zip(ra, rb)]
                               for ra, rb in zip(self.data, other.data)])

    def __neg__(self):
        f = self.field
        return ExactMatrix(f, [[f.neg(a) for a in row] for row in self.data])

    def scale(self, c):
        f = self.field
        return ExactMatrix(f, [[f.mul(a, c) for a in row] for row in self.data])

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        f = self.field
        bt = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for row in self.data:
            out_row = []
            for col in bt:
                acc = f.zero
                for a, b in zip(row, col):
                    acc = f.add(acc, f.mul(a, b))
                out_row.append(acc)
            out.append(out_row)
        if not out:
            out = []
        return ExactMatrix(f, out) if self.rows else ExactMatrix.zeros(f, 0, other.cols)

    # -- elimination ------------------------------------------------------------

    def _echelon(self):
        """Row echelon via exact Gaussian elimination; returns (matrix rows, rank)."""
        f = self.field
        m = [list(r) for r in self.data]
        rank = 0
        for col in range(self.cols):
            pivot = None
            for r in range(rank, self.rows):
                if m[r][col] != f.zero:
                    pivot = r
                    break
            if pivot is None:
                continue
            m[rank], m[pivot] = m[pivot], m[rank]
            inv = f.inv(m[rank][col])
            m[rank] = [f.mul(x, inv) for x in m[rank]]
            for r in range(self.rows):
                if r != rank and m[r][col] != f.zero:
                    c = m[r][col]
                    m[r] = [f.sub(x, f.mul(c, y)) for x, y in zip(m[r], m[rank])]
            rank += 1
            if rank == self.rows:
                break
        return m, rank

    def rank(self) -> int:
        return self._echelon()[1]

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        f = self.field
        if self.rows == 0:
            return f.one
        m = [list(r) for r in self.data]
        n = self.rows
        det = f.one
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if m[r][col] != f.zero:
                    pivot = r
                    break
            if pivot is None:
                return f.zero
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = f.neg(det)
            det = f.mul(det, m[col][col])
            inv = f.inv(m[col][col])
            for r in range(col + 1, n):
                if m[r][col] != f.zero:
                    c = f.mul(m[r][col], inv)
                    m[r] = [f.sub(x, f.mul(c, y)) for x, y in zip(m[r], m[col])]
        return det

    def inverse(self):
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        f = self.field
        n = self.rows
        m = [list(r) + [f.one if i == j else f.zero for j in range(n)]
             for i, r in enumerate(self.data)]
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if m[r][col] != f.zero:
                    pivot = r
                    break
            if pivot is None:
                raise SingularMatrixError("matrix is singular")
            m[col], m[pivot] = m[pivot], m[col]
            inv = f.inv(m[col][col])
            m[col] = [f.mul(x, inv) for x in m[col]]
            for r in range(n):
                if r != col and m[r][col] != f.zero:
                    c = m[r][col]
                    m[r] = [f.sub(x, f.mul(c, y)) for x, y in zip(m[r], m[col])]
        return ExactMatrix(f, [row[n:] for row in m])

    def solve(self, rhs):
        """Solve self * x = rhs exactly (requires full column rank, any rows).

        rhs is a list; returns a list of field values.  Raises if inconsistent
        or underdetermined.
        """
        f = self.field
        aug = ExactMatrix(f, [list(r) + [b] for r, b in zip(self.data, rhs)])
        m, _ = aug._echelon()
        n = self.cols
        x = [f.zero] * n
        for row in m:
            lead = next((j for j, v in enumerate(row) if v != f.zero), None)
            if lead is None:
                continue
            if lead == n:
                raise SingularMatrixError("inconsistent linear system")
        # echelon of augmented matrix: read off pivots
        pivots = {}
        for row in m:
            lead = next((j for j, v in enumerate(row) if v != f.zero), None)
            if lead is not None and lead < n:
                pivots[lead] = row
        if len(pivots) < n:
            raise SingularMatrixError("underdetermined linear system")
        for j in range(n - 1, -1, -1):
            row = pivots[j]
            acc = row[n]
            for k in range(j + 1, n):
                acc = f.sub(acc, f.mul(row[k], x[k]))
            x[j] = acc  # pivot is normalized to one by _echelon
        return x

    def null_space(self):
        """Basis of the right kernel, as a list of column vectors."""
        f = self.field
        m, _ = self._echelon()
        pivots = []
        for row in m:
            lead = next((j for j, v in enumerate(row) if v != f.zero), None)
            if lead is not None:
                pivots.append(lead)
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for j in free:
            v = [f.zero] * self.cols
            v[j] = f.one
            for p, row in zip(pivots, (r for r in m if any(x != f.zero for x in r))):
                v[p] = f.neg(row[j])
            basis.append(v)
        return basis

    def is_alternating(self):
        f = self.field
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            if self.data[i][i] != f.zero:
                return False
            for j in range(i + 1, self.cols):
                if self.data[i][j] != f.neg(self.data[j][i]):
                    return False
        return True

    def is_symmetric(self):
        if self.rows != self.cols:
            return False
        return all(self.data[i][j] == self.data[j][i]
                   for i in range(self.rows) for j in range(i + 1, self.cols))


# -- generic symbolic helpers (entries need +, -, *, and truthiness) ----------


def sym_matmul(A, B):
    """Product of matrices given as lists of lists of ring elements."""
    if not A or not B:
        return [[ ] for _ in A]
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for l in range(1, k):
                acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def sym_transpose(A):
    return [list(col) for col in zip(*A)]


def sym_det(A):
    """Determinant by cofactor expansion; entries are ring elements."""
    n = len(A)
    if n == 0:
        raise ValueError("empty determinant needs an explicit one element")
    if n == 1:
        return A[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * sym_det(minor)
        if j % 2 == 1:
            term = -term
        total = term if total is None else total + term
    return total


def sym_pfaffian(A, zero):
    """Pfaffian of an alternating matrix by first-row expansion."""
    n = len(A)
    if n % 2 == 1:
        return zero
    if n == 0:
        raise ValueError("empty Pfaffian needs an explicit one element")
    if n == 2:
        return A[0][1]
    total = None
    for j in range(1, n):
        keep = [r for r in range(n) if r not in (0, j)]
        minor = [[A[r][c] for c in keep] for r in keep]
        term = A[0][j] * sym_pfaffian(minor, zero)
        if j % 2 == 0:  # sign (-1)^j with 1-based column index j+1
            term = -term
        total = term if total is None else total + term
    return total
