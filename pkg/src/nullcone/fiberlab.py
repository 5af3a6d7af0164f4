"""Exact matrix constructions behind the fiber-bundle trivializations:
frame completions (alternating and orthogonal Gram-Schmidt), congruence
block reductions, square-root sections, kernel charts, and the chart
round-trip verifier.  The unitary-symmetric square root of the float
appendix lives here too, on double-precision complex matrices.
"""

import cmath
import random
from dataclasses import dataclass, field as dc_field

from .fields import Field, NonResidueError
from .linalg import ExactMatrix, SingularMatrixError


class PivotDegenerateError(ArithmeticError):
    """Every admissible pivot vanished (possible over tiny fields)."""


class OffChartError(ValueError):
    """The sample violates the chart's open (or section-existence) condition."""


class SpectrumClusteredError(ArithmeticError):
    """Eigenvalues too close for the interpolation formula."""


class NotUnitarySymmetricError(ValueError):
    """Input failed the unitary-symmetric precondition."""


# -- vector helpers over an exact field ----------------------------------------


def _dot(field, a, b):
    acc = field.zero
    for x, y in zip(a, b):
        acc = field.add(acc, field.mul(x, y))
    return acc


def _sympl(field, a, b):
    """<a, b> = a^t Omega b for the standard block form."""
    acc = field.zero
    for i in range(0, len(a), 2):
        acc = field.add(acc, field.sub(field.mul(a[i], b[i + 1]),
                                       field.mul(a[i + 1], b[i])))
    return acc


def _vec_axpy(field, a, c, b):
    """a + c*b."""
    return [field.add(x, field.mul(c, y)) for x, y in zip(a, b)]


def _vec_scale(field, c, a):
    return [field.mul(c, x) for x in a]


def _basis_vector(field, n, i):
    v = [field.zero] * n
    v[i] = field.one
    return v


# -- alternating Gram-Schmidt (symplectic frame completion) ---------------------


def symplectic_complete(partial: ExactMatrix) -> ExactMatrix:
    """Complete a 2t x 2k symplectic frame to an element of Sp(2t).

    The first 2k columns of the output equal `partial` and the output M
    satisfies M^t Omega M = Omega exactly.  Hyperbolic pivot pairs are drawn
    from the standard basis; all pair permutations are tried before a
    pivot-degenerate failure is reported.
    """
    field = partial.field
    two_t, two_k = partial.rows, partial.cols
    if two_t % 2 or two_k % 2:
        raise ValueError("shapes must be even")
    t, k = two_t // 2, two_k // 2
    if not 0 <= k <= t:
        raise ValueError("need 0 <= k <= t")
    omega_k = ExactMatrix.omega(field, k)
    if partial.transpose() * ExactMatrix.omega(field, t) * partial != omega_k:
        raise ValueError("partial frame is not symplectic: "
                         "partial^t Omega partial != Omega_2k")

    ws = [partial.column(2 * j) for j in range(k)]
    zs = [partial.column(2 * j + 1) for j in range(k)]
    ells = [field.one] * k

    def project(v):
        """v minus its span(w_j, z_j) components, per the displayed recursion."""
        out = list(v)
        for w, z, ell in zip(ws, zs, ells):
            inv = field.inv(ell)
            c1 = field.mul(_sympl(field, w, v), inv)   # <w_j/l_j, v>
            c2 = _sympl(field, z, v)                   # <z_j, v>
            out = _vec_axpy(field, out, field.neg(c1), z)
            out = _vec_axpy(field, out, c2, _vec_scale(field, inv, w))
        return out

    pairs = [( _basis_vector(field, two_t, 2 * p), _basis_vector(field, two_t, 2 * p + 1))
             for p in range(t)]

    def search(slot, unused):
        if slot == t:
            return True
        for p in list(unused):
            w = project(pairs[p][0])
            z = project(pairs[p][1])
            ell = _sympl(field, w, z)
            if ell == field.zero:
                continue
            ws.append(w)
            zs.append(z)
            ells.append(ell)
            unused.discard(p)
            if search(slot + 1, unused):
                return True
            unused.add(p)
            ws.pop(); zs.pop(); ells.pop()
        return False

    if not search(k, set(range(t))):
        raise PivotDegenerateError("no standard hyperbolic pair yields a unit pivot")

    cols = []
    for j in range(k):
        cols.append(ws[j])
        cols.append(zs[j])
    for j in range(k, t):
        cols.append(_vec_scale(field, field.inv(ells[j]), ws[j]))
        cols.append(zs[j])
    return ExactMatrix(field, [[cols[j][i] for j in range(two_t)] for i in range(two_t)])


# -- orthogonal Gram-Schmidt ------------------------------------------------------


def orthogonal_complete(partial: ExactMatrix) -> ExactMatrix:
    """Complete a t x k orthonormal frame to an element of O(t).

    Over F_p the pivot norms must be quadratic residues; a nonresidue pivot is
    reported, never silently retried (the section is etale, not rational).
    """
    field = partial.field
    t, k = partial.rows, partial.cols
    if not 0 <= k <= t:
        raise ValueError("need 0 <= k <= t")
    if partial.transpose() * partial != ExactMatrix.identity(field, k):
        raise ValueError("partial frame is not orthonormal: partial^t partial != 1")
    qs = [partial.column(j) for j in range(k)]
    unused = set(range(t))
    for _ in range(t - k):
        placed = False
        for p in sorted(unused):
            w = _basis_vector(field, t, p)
            for q in qs:
                c = _dot(field, w, q)
                if c != field.zero:
                    w = _vec_axpy(field, w, field.neg(c), q)
            ell = _dot(field, w, w)
            if ell == field.zero:
                continue
            s = field.sqrt(ell)  # NonResidueError propagates: etale obstruction
            qs.append(_vec_scale(field, field.inv(s), w))
            unused.discard(p)
            placed = True
            break
        if not placed:
            raise PivotDegenerateError("every remaining basis vector projects to "
                                       "an isotropic pivot")
    return ExactMatrix(field, [[qs[j][i] for j in range(t)] for i in range(t)])


def orthogonal_complete_float(partial, eps: float = 1e-12):
    """Float analogue of orthogonal_complete on complex lists (bilinear form)."""
    t, k = len(partial), len(partial[0]) if partial else 0
    qs = [[partial[i][j] for i in range(t)] for j in range(k)]
    unused = list(range(t))
    for _ in range(t - k):
        placed = False
        for p in unused:
            w = [1.0 + 0j if i == p else 0j for i in range(t)]
            for q in qs:
                c = sum(x * y for x, y in zip(w, q))
                w = [x - c * y for x, y in zip(w, q)]
            ell = sum(x * x for x in w)
            if abs(ell) < eps:
                continue
            s = cmath.sqrt(ell)
            qs.append([x / s for x in w])
            unused.remove(p)
            placed = True
            break
        if not placed:
            raise PivotDegenerateError("float pivots all below threshold")
    return [[qs[j][i] for j in range(t)] for i in range(t)]


# -- congruence block reductions ---------------------------------------------------


def alt_block_reduce(A: ExactMatrix, pivot=(0, 1)) -> ExactMatrix:
    """alpha with alpha^t A alpha = block-diag(Omega_2, A') for alternating A.

    The pivot entry A[i][j] must be nonzero; alpha is a product of a column
    permutation, a scaling, and column clearing operations.
    """
    field = A.field
    n = A.rows
    if not A.is_alternating():
        raise ValueError("alternating required")
    i, j = pivot
    if A[i, j] == field.zero:
        raise ZeroDivisionError(f"zero pivot at {pivot}")
    order = [i, j] + [r for r in range(n) if r not in (i, j)]
    P = ExactMatrix(field, [[field.one if order[c] == r else field.zero
                             for c in range(n)] for r in range(n)])
    B = P.transpose() * A * P
    D = ExactMatrix.identity(field, n).with_entry(1, 1, field.inv(B[0, 1]))
    B = D.transpose() * B * D
    E = ExactMatrix.identity(field, n)
    data = [list(r) for r in E.data]
    for c in range(2, n):
        data[0][c] = B[1, c]
        data[1][c] = field.neg(B[0, c])
    E = ExactMatrix(field, data)
    return P * D * E


def alt_sqrt_section(A: ExactMatrix) -> ExactMatrix:
    """M with M^t Omega M = A, for invertible alternating A (local section of
    the map GL -> Alt)."""
    field = A.field
    n = A.rows
    if not A.is_alternating() or n % 2:
        raise ValueError("invertible alternating input required")
    if A.det() == field.zero:
        raise SingularMatrixError("alternating matrix is singular")
    if n == 2:
        return ExactMatrix(field, [[A[0, 1], field.zero], [field.zero, field.one]])
    pivot = None
    for i in range(n):
        for j in range(i + 1, n):
            if A[i, j] != field.zero:
                pivot = (i, j)
                break
        if pivot:
            break
    alpha = alt_block_reduce(A, pivot)
    B = alpha.transpose() * A * alpha
    Aprime = B.submatrix(range(2, n), range(2, n))
    N = alt_sqrt_section(Aprime)
    M = ExactMatrix.block_diag(field, [ExactMatrix.identity(field, 2), N])
    return M * alpha.inverse()


def sym_block_reduce(A: ExactMatrix):
    """(alpha, u) with alpha^t A alpha = block-diag(u, A') for symmetric A != 0.

    Characteristic two is excluded; when the pivot u is a square it is
    normalized to 1.  A vanishing corner is fixed by adding a row (valid since
    2 != 0), a vanishing first row by a prior swap.
    """
    field = A.field
    n = A.rows
    if field.characteristic == 2:
        raise ValueError("characteristic two excluded")
    if not A.is_symmetric():
        raise ValueError("symmetric required")
    if all(A[i, j] == field.zero for i in range(n) for j in range(n)):
        raise ValueError("zero matrix")
    alpha = ExactMatrix.identity(field, n)

    def congr(T):
        nonlocal alpha, A
        alpha = alpha * T
        A = T.transpose() * A * T

    if A[0, 0] == field.zero:
        swap = next((kk for kk in range(1, n) if A[kk, kk] != field.zero), None)
        if swap is not None:
            P = ExactMatrix.identity(field, n)
            data = [list(r) for r in P.data]
            data[0][0] = data[swap][swap] = field.zero
            data[0][swap] = data[swap][0] = field.one
            congr(ExactMatrix(field, data))
        else:
            row = 0
            if all(A[0, kk] == field.zero for kk in range(n)):
                row = next(i for i in range(1, n)
                           if any(A[i, kk] != field.zero for kk in range(n)))
                P = ExactMatrix.identity(field, n)
                data = [list(r) for r in P.data]
                data[0][0] = data[row][row] = field.zero
                data[0][row] = data[row][0] = field.one
                congr(ExactMatrix(field, data))
            kk = next(c for c in range(1, n) if A[0, c] != field.zero)
            # add column kk to column 0 (and symmetrically); pivot becomes 2*A[0][kk]
            E = ExactMatrix.identity(field, n).with_entry(kk, 0, field.one)
            congr(E)
    u = A[0, 0]
    inv_u = field.inv(u)
    E = ExactMatrix.identity(field, n)
    data = [list(r) for r in E.data]
    for c in range(1, n):
        data[0][c] = field.neg(field.mul(A[0, c], inv_u))
    congr(ExactMatrix(field, data))
    if field.is_square(u):
        s = field.sqrt(u)
        congr(ExactMatrix.identity(field, n).with_entry(0, 0, field.inv(s)))
        u = field.one
    Aprime = A.submatrix(range(1, n), range(1, n))
    return alpha, u, Aprime


def sym_sqrt_section(A: ExactMatrix) -> ExactMatrix:
    """M with M^t M = A for invertible symmetric A; each pivot must be a
    square in the field (NonResidueError otherwise)."""
    field = A.field
    n = A.rows
    if not A.is_symmetric():
        raise ValueError("symmetric required")
    if A.det() == field.zero:
        raise SingularMatrixError("symmetric matrix is singular")
    if n == 1:
        return ExactMatrix(field, [[field.sqrt(A[0, 0])]])
    alpha, u, Aprime = sym_block_reduce(A)
    s = field.sqrt(u)  # one() when normalized; NonResidueError otherwise
    N = sym_sqrt_section(Aprime)
    M = ExactMatrix.block_diag(field, [ExactMatrix(field, [[s]]), N])
    return M * alpha.inverse()


def sym_sqrt_section_float(A, eps: float = 1e-12):
    """Float analogue on complex lists: M with M^t M = A (bilinear)."""
    n = len(A)
    work = [list(r) for r in A]
    alpha = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]

    def mul(X, Y):
        return [[sum(X[i][l] * Y[l][j] for l in range(len(Y))) for j in range(len(Y[0]))]
                for i in range(len(X))]

    diag = []
    for p in range(n):
        if abs(work[p][p]) < eps:
            kk = next((c for c in range(p + 1, n) if abs(work[p][c]) >= eps), None)
            if kk is None:
                raise PivotDegenerateError("float symmetric pivot degenerate")
            E = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
            E[kk][p] = 1.0 + 0j
            work = mul(mul([[E[j][i] for j in range(n)] for i in range(n)], work), E)
            alpha = mul(alpha, E)
        u = work[p][p]
        E = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
        for c in range(p + 1, n):
            E[p][c] = -work[p][c] / u
        work = mul(mul([[E[j][i] for j in range(n)] for i in range(n)], work), E)
        alpha = mul(alpha, E)
        diag.append(cmath.sqrt(u))
    # M = diag(sqrt u) * alpha^{-1}
    inv = _cinv(alpha)
    return [[diag[i] * inv[i][j] for j in range(n)] for i in range(n)]


# -- Grassmannian kernel chart -------------------------------------------------------


def grassmann_kernel_chart(A: ExactMatrix, d: int) -> ExactMatrix:
    """The unique unipotent M_W = [[1_d, *], [0, 1_{n-d}]] with ker(A M_W) =
    span(e_{d+1}, ..., e_n), for A of rank d whose leading d columns are
    independent."""
    field = A.field
    n = A.cols
    lead = A.submatrix(range(A.rows), range(d))
    if lead.rank() != d:
        raise SingularMatrixError("leading d columns are dependent")
    if A.rank() != d:
        raise ValueError(f"matrix rank is not {d}")
    data = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    for j in range(d, n):
        rhs = [field.neg(A[i, j]) for i in range(A.rows)]
        x = lead.solve(rhs)
        for i in range(d):
            data[i][j] = x[i]
    M = ExactMatrix(field, data)
    prod = A * M
    for j in range(d, n):
        if any(prod[i, j] != field.zero for i in range(A.rows)):
            raise ValueError("kernel condition failed; input rank exceeds d")
    return M


# -- unitary symmetric square roots (floats) -------------------------------------


def _cmat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)] for i in range(n)]


def _cmat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _ceye(n):
    return [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]


def _ctranspose(A):
    return [list(col) for col in zip(*A)]


def _cconj(A):
    return [[x.conjugate() for x in row] for row in A]


def frobenius_norm(A) -> float:
    return sum(abs(x) ** 2 for row in A for x in row) ** 0.5


def _cinv(A):
    n = len(A)
    m = [list(row) + [1.0 + 0j if i == j else 0j for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) < 1e-14:
            raise SingularMatrixError("float matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1.0 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _char_poly(U):
    """Monic characteristic polynomial, descending coefficients, by
    Faddeev-LeVerrier."""
    n = len(U)
    coeffs = [1.0 + 0j]
    M = _ceye(n)
    for k in range(1, n + 1):
        M = _cmat_mul(U, M)
        c = -sum(M[i][i] for i in range(n)) / k
        coeffs.append(c)
        for i in range(n):
            M[i][i] += c
    return coeffs


def _poly_eval(coeffs, z):
    acc = 0j
    for c in coeffs:
        acc = acc * z + c
    return acc


def _poly_deriv(coeffs):
    n = len(coeffs) - 1
    return [c * (n - i) for i, c in enumerate(coeffs[:-1])]


def _deflate(coeffs, r):
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * r)
    return out


def _newton_root(coeffs, starts=None, iters=400, tol=1e-13):
    d = _poly_deriv(coeffs)
    if starts is None:
        starts = [0.4 + 0.9j, -0.8 + 0.6j, 1.0 + 0j, -1.0 + 0.1j,
                  0.1 - 1.0j, 0.9 + 0.1j, -0.2 - 0.9j]
    for z in starts:
        for _ in range(iters):
            fz = _poly_eval(coeffs, z)
            if abs(fz) < tol:
                return z
            dz = _poly_eval(d, z)
            if dz == 0:
                break
            z = z - fz / dz
        if abs(_poly_eval(coeffs, z)) < 1e-9:
            return z
    raise ArithmeticError("root iteration failed to converge")


def _eigenvalues_normal(U):
    """Eigenvalues of a (normal) matrix by root-finding with deflation and a
    final polish pass on the original characteristic polynomial."""
    coeffs = _char_poly(U)
    work = coeffs[:]
    roots = []
    while len(work) > 1:
        r = _newton_root(work)
        roots.append(r)
        work = _deflate(work, r)
    d = _poly_deriv(coeffs)
    polished = []
    for r in roots:
        z = r
        for _ in range(50):
            fz = _poly_eval(coeffs, z)
            dz = _poly_eval(d, z)
            if dz == 0 or abs(fz) < 1e-15:
                break
            z = z - fz / dz
        polished.append(z)
    return polished


def _branch_sqrt(z, ray_angle):
    """Square root with branch cut along the ray at ray_angle; arguments are
    measured in [ray_angle - 2*pi, ray_angle)."""
    rel = (cmath.phase(z) - ray_angle) % (2 * cmath.pi)
    theta = ray_angle + rel - 2 * cmath.pi
    return abs(z) ** 0.5 * cmath.exp(1j * theta / 2)


def unitary_sym_sqrt(U, tol: float = 1e-9, separation: float = 1e-6):
    """V with V^2 = U, V unitary and symmetric, for unitary symmetric U.

    V is the interpolation polynomial f evaluated at U, with square roots
    taken on the branch whose cut ray stays farthest from the spectrum.
    """
    n = len(U)
    if any(len(r) != n for r in U):
        raise NotUnitarySymmetricError("square matrix required")
    scale = max(1.0, frobenius_norm(U))
    if frobenius_norm(_cmat_sub(U, _ctranspose(U))) > tol * scale:
        raise NotUnitarySymmetricError("matrix is not symmetric within tolerance")
    UstarU = _cmat_mul(_ctranspose(_cconj(U)), U)
    if frobenius_norm(_cmat_sub(UstarU, _ceye(n))) > tol * scale:
        raise NotUnitarySymmetricError("matrix is not unitary within tolerance")

    eigs = _eigenvalues_normal(U)
    # collapse numerically split multiple roots, then enforce separation;
    # a root of multiplicity m is recovered to full precision as a simple
    # root of the (m-1)-th derivative of the characteristic polynomial
    merge_eps = separation / 10
    reps = []
    for z in sorted(eigs, key=lambda w: (cmath.phase(w), abs(w))):
        if reps and abs(z - reps[-1][0] / reps[-1][1]) < merge_eps:
            s, c = reps[-1]
            reps[-1] = (s + z, c + 1)
        else:
            reps.append((z, 1))
    coeffs = _char_poly(U)
    mus = []
    for s, c in reps:
        z = s / c
        if c > 1:
            yp = coeffs
            for _ in range(c - 1):
                yp = _poly_deriv(yp)
            dyp = _poly_deriv(yp)
            for _ in range(60):
                fz = _poly_eval(yp, z)
                dz = _poly_eval(dyp, z)
                if dz == 0 or abs(fz) < 1e-15:
                    break
                z = z - fz / dz
        mus.append(z)
    if len(mus) > 1:
        for i in range(len(mus)):
            for j in range(i + 1, len(mus)):
                if abs(mus[i] - mus[j]) < separation:
                    raise SpectrumClusteredError(
                        f"eigenvalues {mus[i]:.6g} and {mus[j]:.6g} closer than "
                        f"{separation}")

    # ray through the largest angular gap of the spectrum
    angles = sorted(cmath.phase(m) % (2 * cmath.pi) for m in mus)
    best_gap, ray = -1.0, 0.0
    for a, b in zip(angles, angles[1:] + [angles[0] + 2 * cmath.pi]):
        if b - a > best_gap:
            best_gap, ray = b - a, (a + b) / 2
    rs = [_branch_sqrt(m, ray) for m in mus]

    V = [[0j] * n for _ in range(n)]
    for i, ri in enumerate(rs):
        term = _ceye(n)
        denom = 1.0 + 0j
        for j, rj in enumerate(rs):
            if j == i:
                continue
            shifted = [[U[a][b] - (rj * rj if a == b else 0) for b in range(n)]
                       for a in range(n)]
            term = _cmat_mul(term, shifted)
            denom *= ri * ri - rj * rj
        head = [[U[a][b] - ((ri * ri - ri) if a == b else 0) for b in range(n)]
                for a in range(n)]
        term = _cmat_mul(head, term)
        for a in range(n):
            for b in range(n):
                V[a][b] += term[a][b] / denom

    if frobenius_norm(_cmat_sub(_cmat_mul(V, V), U)) > tol * scale:
        raise ArithmeticError("square-root residual exceeds tolerance")
    if frobenius_norm(_cmat_sub(V, _ctranspose(V))) > tol * scale:
        raise ArithmeticError("symmetry residual exceeds tolerance")
    VstarV = _cmat_mul(_ctranspose(_cconj(V)), V)
    if frobenius_norm(_cmat_sub(VstarV, _ceye(n))) > tol * scale:
        raise ArithmeticError("unitarity residual exceeds tolerance")
    return V


# -- randomized samplers over exact fields ----------------------------------------


def random_scalar(field: Field, rng: random.Random):
    if field.kind == "prime-field":
        return field.from_int(rng.randrange(field.characteristic))
    return field.from_int(rng.randrange(-9, 10))


def random_matrix(field: Field, rows: int, cols: int, rng: random.Random) -> ExactMatrix:
    return ExactMatrix(field, [[random_scalar(field, rng) for _ in range(cols)]
                               for _ in range(rows)])


def random_invertible(field: Field, n: int, rng: random.Random) -> ExactMatrix:
    while True:
        M = random_matrix(field, n, n, rng)
        if M.det() != field.zero:
            return M


def random_symplectic(field: Field, t: int, rng: random.Random, steps: int = 10) -> ExactMatrix:
    """Product of random symplectic transvections x -> x + c <v, x> v."""
    two_t = 2 * t
    M = ExactMatrix.identity(field, two_t)
    omega = ExactMatrix.omega(field, t)
    for _ in range(steps):
        v = [random_scalar(field, rng) for _ in range(two_t)]
        c = random_scalar(field, rng)
        vO = (ExactMatrix(field, [v]) * omega).data[0]
        T = ExactMatrix(field, [[field.add(field.one if i == j else field.zero,
                                           field.mul(c, field.mul(v[i], vO[j])))
                                 for j in range(two_t)] for i in range(two_t)])
        M = T * M
    return M


def random_symplectic_frame(field: Field, t: int, k: int, rng: random.Random) -> ExactMatrix:
    """Random element of Sp(2t, 2k): random transvections applied to the
    standard frame."""
    T = random_symplectic(field, t, rng)
    return T.submatrix(range(2 * t), range(2 * k))


def random_orthogonal(field: Field, t: int, rng: random.Random, steps: int = 12) -> ExactMatrix:
    """Random element of O(t): a product of rational rotations, coordinate
    swaps, and sign flips."""
    M = ExactMatrix.identity(field, t)
    for _ in range(steps):
        kind = rng.randrange(3)
        data = [[field.one if i == j else field.zero for j in range(t)] for i in range(t)]
        if kind == 0 and t >= 2:
            i, j = sorted(rng.sample(range(t), 2))
            while True:
                u = random_scalar(field, rng)
                den = field.add(field.one, field.mul(u, u))
                if den != field.zero:
                    break
            c = field.div(field.sub(field.one, field.mul(u, u)), den)
            s = field.div(field.add(u, u), den)
            data[i][i] = c
            data[j][j] = c
            data[i][j] = s
            data[j][i] = field.neg(s)
        elif kind == 1 and t >= 2:
            i, j = sorted(rng.sample(range(t), 2))
            data[i][i] = data[j][j] = field.zero
            data[i][j] = data[j][i] = field.one
        else:
            i = rng.randrange(t)
            data[i][i] = field.neg(field.one)
        M = ExactMatrix(field, data) * M
    return M


def random_orthogonal_frame(field: Field, t: int, k: int, rng: random.Random) -> ExactMatrix:
    return random_orthogonal(field, t, rng).submatrix(range(t), range(k))


def random_alt_invertible(field: Field, two_k: int, rng: random.Random) -> ExactMatrix:
    while True:
        data = [[field.zero] * two_k for _ in range(two_k)]
        for i in range(two_k):
            for j in range(i + 1, two_k):
                v = random_scalar(field, rng)
                data[i][j] = v
                data[j][i] = field.neg(v)
        A = ExactMatrix(field, data)
        if A.det() != field.zero:
            return A


def random_sym_invertible(field: Field, k: int, rng: random.Random) -> ExactMatrix:
    while True:
        data = [[field.zero] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                v = random_scalar(field, rng)
                data[i][j] = v
                data[j][i] = v
        A = ExactMatrix(field, data)
        if A.det() != field.zero:
            return A


def _isotropic_basis(field: Field, dim: int):
    """Columns spanning a subspace of K^dim that is isotropic for the dot
    form (as large as cheaply available)."""
    cols = []
    if field.kind == "prime-field" and field.is_square(field.neg(field.one)):
        i = field.sqrt(field.neg(field.one))
        for b in range(dim // 2):
            v = [field.zero] * dim
            v[2 * b] = field.one
            v[2 * b + 1] = i
            cols.append(v)
    else:
        # x^2 + y^2 + 1 = 0 is solvable over any F_p; one vector per 3 coords
        if field.kind == "prime-field":
            p = field.characteristic
            sol = None
            for a in range(p):
                rest = field.neg(field.add(field.one, field.mul(a, a)))
                if field.is_square(rest):
                    sol = (field.from_int(a), field.sqrt(rest))
                    break
            if sol:
                for b in range(dim // 3):
                    v = [field.zero] * dim
                    v[3 * b] = sol[0]
                    v[3 * b + 1] = sol[1]
                    v[3 * b + 2] = field.one
                    cols.append(v)
    return cols


def _lagrangian_basis(field: Field, dim: int):
    """Columns spanning a Lagrangian of the standard symplectic form: the
    odd-indexed standard vectors."""
    cols = []
    for b in range(dim // 2):
        v = [field.zero] * dim
        v[2 * b] = field.one
        cols.append(v)
    return cols


def _matrix_from_columns(field, cols, dim):
    if not cols:
        return ExactMatrix.zeros(field, dim, 0)
    return ExactMatrix(field, [[c[i] for c in cols] for i in range(dim)])


def sample_isotropic_pair_matrix(field, rows, cols, rng, basis_cols):
    """rows x cols matrix whose column space lies in span(basis_cols)."""
    if rows == 0 or cols == 0:
        return ExactMatrix.zeros(field, rows, cols)
    L = _matrix_from_columns(field, basis_cols, rows)
    if L.cols == 0:
        return ExactMatrix.zeros(field, rows, cols)
    R = random_matrix(field, L.cols, cols, rng)
    return L * R


def sample_alt_stratum(space: str, field: Field, t: int, n: int, k: int,
                       rng: random.Random) -> ExactMatrix:
    """Random element of F/G/X^{2k} for 2t x n matrices (pfaffian family)."""
    two_t, two_k = 2 * t, 2 * k
    P = random_symplectic_frame(field, t, k, rng)
    alpha = symplectic_complete(P) if k < t else P
    N = sample_isotropic_pair_matrix(field, two_t - two_k, n - two_k, rng,
                                     _lagrangian_basis(field, two_t - two_k))
    top = ExactMatrix.identity(field, two_k).hstack(ExactMatrix.zeros(field, two_k, n - two_k))
    bottom = ExactMatrix.zeros(field, two_t - two_k, two_k).hstack(N)
    block = ExactMatrix(field, list(top.data) + list(bottom.data))
    F = random_symplectic(field, t, rng) * (alpha * block)
    if space == "F":
        return F
    G = F * ExactMatrix.block_diag(field, [random_invertible(field, two_k, rng),
                                           ExactMatrix.identity(field, n - two_k)])
    if space == "G":
        return G
    X = G * random_invertible(field, n, rng)
    return X


def sample_gen_stratum(space: str, field: Field, m: int, t: int, n: int, k: int,
                       rng: random.Random):
    """Random element of F/G/X^k for pairs (Y, Z) (generic family)."""
    C = random_matrix(field, m - k, t - k, rng)
    if t - k > 0:
        kern = C.null_space()
        E = sample_isotropic_pair_matrix(field, t - k, n - k, rng, kern) \
            if kern else ExactMatrix.zeros(field, t - k, n - k)
    else:
        E = ExactMatrix.zeros(field, 0, n - k)
    Y = ExactMatrix.block_diag(field, [ExactMatrix.identity(field, k), C])
    Z = ExactMatrix.block_diag(field, [ExactMatrix.identity(field, k), E])
    # block_diag pads shapes; rebuild with exact m x t and t x n shapes
    Ydata = [[Y[i, j] if i < Y.rows and j < Y.cols else field.zero
              for j in range(t)] for i in range(m)]
    Zdata = [[Z[i, j] if i < Z.rows and j < Z.cols else field.zero
              for j in range(n)] for i in range(t)]
    Y, Z = ExactMatrix(field, Ydata), ExactMatrix(field, Zdata)
    M = random_invertible(field, t, rng)
    Y, Z = Y * M.inverse(), M * Z
    if space == "F":
        return Y, Z
    T = random_invertible(field, m, rng)
    Y = T * Y
    if space == "G":
        return Y, Z
    return Y, Z * random_invertible(field, n, rng)


def sample_sym_stratum(space: str, field: Field, t: int, n: int, k: int,
                       rng: random.Random, max_draws: int = 200_000) -> ExactMatrix:
    """Random element of F/G/X^k for t x n matrices (symmetric family).

    F is built from an isotropic block and a random orthogonal twist; X is
    drawn by rejection on the Gram rank so both discriminant classes of the
    rank-k Gram block occur; G is the kernel-chart image of an X sample.
    """
    if space == "F":
        N = sample_isotropic_pair_matrix(field, t - k, n - k, rng,
                                         _isotropic_basis(field, t - k))
        data = [[field.one if i == j and i < k else field.zero for j in range(n)]
                for i in range(t)]
        for i in range(t - k):
            for j in range(n - k):
                data[k + i][k + j] = N[i, j]
        return random_orthogonal(field, t, rng) * ExactMatrix(field, data)
    # X: columns span a k-dimensional subspace with nondegenerate Gram; the
    # random frame W hits both discriminant classes of the rank-k block
    for _ in range(max_draws):
        W = random_matrix(field, t, k, rng)
        if (W.transpose() * W).det() == field.zero:
            continue
        R = random_matrix(field, k, n, rng)
        if R.rank() != k:
            continue
        M = W * R
        if space == "X":
            return M
        Q = M.transpose() * M
        if Q.submatrix(range(n), range(k)).rank() == k:
            return M * grassmann_kernel_chart(Q, k)
    raise OffChartError(f"no rank-{k} Gram sample found in {max_draws} draws")


# -- chart round trips ---------------------------------------------------------------


@dataclass
class RoundTripReport:
    which: str
    params: dict
    exact: bool
    fiber_ok: bool
    cover: str
    detail: dict = dc_field(default_factory=dict)

    @property
    def ok(self):
        return self.exact and self.fiber_ok

    def to_json(self):
        return {"which": self.which, "params": self.params, "exact": self.exact,
                "fiber_ok": self.fiber_ok, "ok": self.ok, "cover": self.cover}


def _omega_cols(field, t):
    """The paper's hyperbolic basis: e_i, f_i are the columns of Omega."""
    om = ExactMatrix.omega(field, t)
    es = [om.column(2 * i) for i in range(t)]
    fs = [om.column(2 * i + 1) for i in range(t)]
    return es, fs


def _chart_sp2(sample: ExactMatrix, params, field):
    t, i = params["t"], params.get("i", 1)
    es, fs = _omega_cols(field, t)
    e_i, f_i = es[i - 1], fs[i - 1]
    u, v = sample.column(0), sample.column(1)
    if _sympl(field, u, v) != field.one:
        raise ValueError("sample is not in Sp(2t,2)")
    denom = _sympl(field, u, f_i)
    if denom == field.zero:
        raise OffChartError("<u, f_i> = 0")
    vt = _vec_axpy(field, v, _sympl(field, v, e_i), f_i)
    fiber_ok = _sympl(field, e_i, vt) == field.zero  # lands in e_i-perp
    c = field.div(field.sub(field.one, _sympl(field, u, vt)), denom)
    back = _vec_axpy(field, vt, c, f_i)
    exact = back == v
    return RoundTripReport("sp2", dict(params), exact, fiber_ok, "zariski")


def _chart_sp_section(sample: ExactMatrix, params, field):
    t, k = params["t"], params["k"]
    if not 1 < k <= t:
        raise ValueError("sp_section chart needs 1 < k <= t")
    two_t = 2 * t
    A = sample.submatrix(range(two_t), range(2))
    try:
        alpha = symplectic_complete(A)
    except PivotDegenerateError as e:
        raise OffChartError(str(e))
    beta = alpha.inverse() * sample
    fiber_ok = all(beta[i, j] == (field.one if i == j else field.zero)
                   for i in range(two_t) for j in range(2)) \
        and all(beta[i, j] == field.zero for i in range(2) for j in range(2, 2 * k))
    Mp = beta.submatrix(range(2, two_t), range(2, 2 * k))
    om = ExactMatrix.omega(field, t - 1)
    fiber_ok = fiber_ok and (Mp.transpose() * om * Mp == ExactMatrix.omega(field, k - 1))
    top = ExactMatrix.identity(field, 2).hstack(ExactMatrix.zeros(field, 2, 2 * k - 2))
    bottom = ExactMatrix.zeros(field, two_t - 2, 2).hstack(Mp)
    rebuilt = alpha * ExactMatrix(field, list(top.data) + list(bottom.data))
    return RoundTripReport("sp_section", dict(params), rebuilt == sample, fiber_ok, "zariski")


def _first_independent_rows(M: ExactMatrix, k: int):
    field = M.field
    rows = []
    for r in range(M.rows):
        trial = rows + [r]
        if M.submatrix(trial, range(M.cols)).rank() == len(trial):
            rows.append(r)
            if len(rows) == k:
                return rows
    raise OffChartError(f"matrix has rank below {k}")


def _lemma_pivot_matrices(A: ExactMatrix, S):
    """(N_A, P_S) of the GL chart lemma: N_A inverts the S-block in place,
    P_S moves the rows S to the top (S-order first, others in order)."""
    field = A.field
    m, k = A.rows, A.cols
    blk = A.submatrix(S, range(k)).inverse()
    data = [[field.one if i == j and i not in S else field.zero
             for j in range(m)] for i in range(m)]
    for a, ra in enumerate(S):
        for b, rb in enumerate(S):
            data[ra][rb] = blk[a, b]
    N = ExactMatrix(field, data)
    order = list(S) + [r for r in range(m) if r not in S]
    P = ExactMatrix(field, [[field.one if order[i] == j else field.zero
                             for j in range(m)] for i in range(m)])
    return N, P


def _chart_gl_forget(sample: ExactMatrix, params, field):
    t, k = params["t"], params["k"]
    A = sample.submatrix(range(t), range(k))
    S = _first_independent_rows(A, k)
    N, P = _lemma_pivot_matrices(A, S)
    C = P * (N * sample)
    base = C.submatrix(range(k, t), range(k))          # pi(B)_S, the chart coordinate
    b_top = [C[i, k] for i in range(k)]
    b_bot = [C[i, k] for i in range(k, t)]
    w = [field.sub(x, _dot(field, base.data[r], b_top)) for r, x in enumerate(b_bot)]
    fiber_ok = any(x != field.zero for x in w)          # independence of the new column
    # rebuild
    last = b_top + [field.add(w[r], _dot(field, base.data[r], b_top))
                    for r in range(t - k)]
    data = [[field.one if i == j and i < k else field.zero for j in range(k)]
            for i in range(t)]
    for i in range(t - k):
        for j in range(k):
            data[k + i][j] = base[i, j]
    rebuilt_C = ExactMatrix(field, [row + [last[i]] for i, row in enumerate(data)])
    rebuilt = N.inverse() * (P.inverse() * rebuilt_C)
    return RoundTripReport("gl_forget", dict(params), rebuilt == sample, fiber_ok, "zariski")


def _chart_pairs_fiber(sample, params, field):
    """Embed a P(t-k+1, 1) fiber point over a normalized P(t, k-1) base point
    and check it lands in P(t, k)."""
    t, k = params["t"], params["k"]
    if k < 2:
        raise ValueError("pairs_fiber chart needs k >= 2 (k = 1 is the base case)")
    B0, u, v = sample  # B0: (k-1) x (t-k+1); u: row, v: column
    if _dot(field, u, [v[i][0] for i in range(len(v))]) != field.one:
        raise ValueError("fiber sample must satisfy u v = 1")
    B0t = B0.transpose()
    uB0t = [(ExactMatrix(field, [u]) * B0t).data[0][j] for j in range(k - 1)]
    A = []
    for i in range(k - 1):
        A.append([field.one if i == j else field.zero for j in range(k - 1)]
                 + [field.zero] * (t - k + 1))
    A.append([field.neg(x) for x in uB0t] + list(u))
    B = []
    for i in range(k - 1):
        B.append([field.one if i == j else field.zero for j in range(k - 1)]
                 + [field.zero])
    for i in range(t - k + 1):
        B.append([B0t[i, j] for j in range(k - 1)] + [v[i][0]])
    Amat, Bmat = ExactMatrix(field, A), ExactMatrix(field, B)
    fiber_ok = (Amat * Bmat == ExactMatrix.identity(field, k))
    u_back = list(Amat.data[k - 1][k - 1:])
    v_back = [[Bmat[i, k - 1]] for i in range(k - 1, t)]
    exact = (u_back == list(u)) and (v_back == [[v[i][0]] for i in range(len(v))])
    return RoundTripReport("pairs_fiber", dict(params), exact, fiber_ok, "zariski")


def _block_pattern_ok(Q: ExactMatrix, k: int, field):
    """Q = [[N, 0], [0, 0]] with N invertible k x k."""
    n = Q.rows
    for i in range(n):
        for j in range(n):
            if (i >= k or j >= k) and Q[i, j] != field.zero:
                return False
    return Q.submatrix(range(k), range(k)).det() != field.zero


def _chart_alt_kernel(sample: ExactMatrix, params, field):
    t, n, k = params["t"], params["n"], params["k"]
    om = ExactMatrix.omega(field, t)
    Q = sample.transpose() * om * sample
    if Q.submatrix(range(Q.rows), range(2 * k)).rank() != 2 * k:
        raise OffChartError("leading 2k columns of the form matrix are dependent")
    MW = grassmann_kernel_chart(Q, 2 * k)
    G = sample * MW
    QG = G.transpose() * om * G
    fiber_ok = _block_pattern_ok(QG, 2 * k, field) and \
        QG.submatrix(range(2 * k), range(2 * k)).is_alternating()
    rebuilt = G * MW.inverse()
    return RoundTripReport("alt_kernel", dict(params), rebuilt == sample, fiber_ok, "zariski")


def _chart_alt_root(sample: ExactMatrix, params, field):
    t, n, k = params["t"], params["n"], params["k"]
    om = ExactMatrix.omega(field, t)
    Q = sample.transpose() * om * sample
    if not _block_pattern_ok(Q, 2 * k, field):
        raise ValueError("sample is not in the G stratum")
    A = Q.submatrix(range(2 * k), range(2 * k))
    psi = alt_sqrt_section(A)
    block = ExactMatrix.block_diag(field, [psi.inverse(),
                                           ExactMatrix.identity(field, n - 2 * k)])
    Fm = sample * block
    QF = Fm.transpose() * om * Fm
    target = ExactMatrix.block_diag(field, [ExactMatrix.omega(field, k),
                                            ExactMatrix.zeros(field, n - 2 * k, n - 2 * k)])
    fiber_ok = (QF == target)
    rebuilt = Fm * ExactMatrix.block_diag(field, [psi, ExactMatrix.identity(field, n - 2 * k)])
    return RoundTripReport("alt_root", dict(params), rebuilt == sample, fiber_ok, "zariski")


def _chart_alt_frame(sample: ExactMatrix, params, field):
    t, n, k = params["t"], params["n"], params["k"]
    two_t = 2 * t
    P = sample.submatrix(range(two_t), range(2 * k))
    try:
        alpha = symplectic_complete(P) if k < t else P
    except PivotDegenerateError as e:
        raise OffChartError(str(e))
    beta = alpha.inverse() * sample
    ok_shape = all(beta[i, j] == (field.one if i == j else field.zero)
                   for i in range(two_t) for j in range(2 * k) if i < 2 * k) \
        and all(beta[i, j] == field.zero
                for i in range(2 * k, two_t) for j in range(2 * k)) \
        and all(beta[i, j] == field.zero
                for i in range(2 * k) for j in range(2 * k, n))
    N = beta.submatrix(range(2 * k, two_t), range(2 * k, n))
    if t > k:
        om_small = ExactMatrix.omega(field, t - k)
        fiber_ok = ok_shape and (N.transpose() * om_small * N ==
                                 ExactMatrix.zeros(field, n - 2 * k, n - 2 * k))
    else:
        fiber_ok = ok_shape
    top = ExactMatrix.identity(field, 2 * k).hstack(ExactMatrix.zeros(field, 2 * k, n - 2 * k))
    bottom = ExactMatrix.zeros(field, two_t - 2 * k, 2 * k).hstack(N)
    rebuilt = alpha * ExactMatrix(field, list(top.data) + list(bottom.data))
    return RoundTripReport("alt_frame", dict(params), rebuilt == sample, fiber_ok, "zariski")


def _chart_gen_kernel(sample, params, field):
    m, t, n, k = params["m"], params["t"], params["n"], params["k"]
    Y, Z = sample
    YZ = Y * Z
    if YZ.submatrix(range(m), range(k)).rank() != k:
        raise OffChartError("leading k columns of YZ are dependent")
    MW = grassmann_kernel_chart(YZ, k)
    Zp = Z * MW
    prod = Y * Zp
    fiber_ok = all(prod[i, j] == field.zero for i in range(m) for j in range(k, n)) \
        and prod.submatrix(range(m), range(k)).rank() == k
    rebuilt = Zp * MW.inverse()
    return RoundTripReport("gen_kernel", dict(params), rebuilt == Z, fiber_ok, "zariski")


def _reduction_to_top(A: ExactMatrix, S):
    """T in GL_m with T A = [[1_k], [0]]; deterministic in A (pivot rows S)."""
    field = A.field
    N, P = _lemma_pivot_matrices(A, S)
    C = P * (N * A)  # = [[1_k], [A_residual]]
    m, k = A.rows, A.cols
    data = [[field.one if i == j else field.zero for j in range(m)] for i in range(m)]
    for i in range(k, m):
        for j in range(k):
            data[i][j] = field.neg(C[i, j])
    L = ExactMatrix(field, data)
    return L * (P * N)


def _chart_gen_frame(sample, params, field):
    m, t, n, k = params["m"], params["t"], params["n"], params["k"]
    Y, Z = sample
    YZ = Y * Z
    A = YZ.submatrix(range(m), range(k))
    S = _first_independent_rows(A, k)
    T = _reduction_to_top(A, S)
    Yf = T * Y
    prod = Yf * Z
    target = [[field.one if i == j and i < k else field.zero for j in range(n)]
              for i in range(m)]
    fiber_ok = (prod == ExactMatrix(field, target))
    rebuilt = T.inverse() * Yf
    return RoundTripReport("gen_frame", dict(params), rebuilt == Y, fiber_ok, "zariski")


def _chart_gen_pairs(sample, params, field):
    m, t, n, k = params["m"], params["t"], params["n"], params["k"]
    Y, Z = sample
    Y1 = Y.submatrix(range(k), range(t))
    Z1 = Z.submatrix(range(t), range(k))
    if Y1 * Z1 != ExactMatrix.identity(field, k):
        raise ValueError("sample is not in the F stratum")
    S = _first_independent_rows(Z1, k)
    MZ, PS = _lemma_pivot_matrices(Z1, S)
    Yp = Y * MZ.inverse() * PS.inverse()
    Zp = PS * (MZ * Z)
    Cmat = (PS * (MZ * Z1)).submatrix(range(k, t), range(k))
    Y1p = Yp.submatrix(range(k), range(t))
    Mrows = [list(Y1p.data[i]) for i in range(k)]
    for i in range(t - k):
        Mrows.append([field.neg(Cmat[i, j]) for j in range(k)]
                     + [field.one if jj == i else field.zero for jj in range(t - k)])
    M = ExactMatrix(field, Mrows)
    Ypp = Yp * M.inverse()
    Zpp = M * Zp
    Cts = Ypp.submatrix(range(k, m), range(k, t))
    E = Zpp.submatrix(range(k, t), range(k, n))
    shape_ok = all(Ypp[i, j] == (field.one if i == j else field.zero)
                   for i in range(k) for j in range(t)) \
        and all(Ypp[i, j] == field.zero for i in range(k, m) for j in range(k)) \
        and all(Zpp[i, j] == (field.one if i == j else field.zero)
                for i in range(t) for j in range(k) if i < k or j < k) \
        and all(Zpp[i, j] == field.zero for i in range(k) for j in range(k, n))
    fiber_ok = shape_ok and (Cts * E == ExactMatrix.zeros(field, m - k, n - k))
    # reconstruct from ((Y1, Z1), (Cts, E))
    Ypp2 = ExactMatrix(field, [[field.one if i == j and i < k else
                                (Cts[i - k, j - k] if i >= k and j >= k else field.zero)
                                for j in range(t)] for i in range(m)])
    Zpp2 = ExactMatrix(field, [[field.one if i == j and i < k else
                                (E[i - k, j - k] if i >= k and j >= k else field.zero)
                                for j in range(n)] for i in range(t)])
    Yback = Ypp2 * M * PS * MZ
    Zback = MZ.inverse() * PS.inverse() * (M.inverse() * Zpp2)
    exact = (Yback == Y) and (Zback == Z)
    return RoundTripReport("gen_pairs", dict(params), exact, fiber_ok, "zariski")


def _chart_sym_kernel(sample: ExactMatrix, params, field):
    t, n, k = params["t"], params["n"], params["k"]
    Q = sample.transpose() * sample
    if Q.submatrix(range(n), range(k)).rank() != k:
        raise OffChartError("leading k columns of the Gram matrix are dependent")
    MW = grassmann_kernel_chart(Q, k)
    G = sample * MW
    QG = G.transpose() * G
    fiber_ok = _block_pattern_ok(QG, k, field) and \
        QG.submatrix(range(k), range(k)).is_symmetric()
    rebuilt = G * MW.inverse()
    return RoundTripReport("sym_kernel", dict(params), rebuilt == sample, fiber_ok, "etale")


def _chart_sym_root(sample: ExactMatrix, params, field):
    t, n, k = params["t"], params["n"], params["k"]
    Q = sample.transpose() * sample
    if not _block_pattern_ok(Q, k, field):
        raise ValueError("sample is not in the G stratum")
    A = Q.submatrix(range(k), range(k))
    try:
        psi = sym_sqrt_section(A)
    except NonResidueError as e:
        raise OffChartError(f"no rational section here (etale cover): {e}")
    block = ExactMatrix.block_diag(field, [psi.inverse(),
                                           ExactMatrix.identity(field, n - k)])
    Fm = sample * block
    QF = Fm.transpose() * Fm
    target = ExactMatrix.block_diag(field, [ExactMatrix.identity(field, k),
                                            ExactMatrix.zeros(field, n - k, n - k)])
    fiber_ok = (QF == target)
    rebuilt = Fm * ExactMatrix.block_diag(field, [psi, ExactMatrix.identity(field, n - k)])
    return RoundTripReport("sym_root", dict(params), rebuilt == sample, fiber_ok, "etale")


def _chart_sym_frame(sample: ExactMatrix, params, field):
    t, n, k = params["t"], params["n"], params["k"]
    P = sample.submatrix(range(t), range(k))
    try:
        alpha = orthogonal_complete(P) if k < t else P
    except (NonResidueError, PivotDegenerateError) as e:
        raise OffChartError(f"no rational completion here (etale cover): {e}")
    beta = alpha.inverse() * sample
    ok_shape = all(beta[i, j] == (field.one if i == j else field.zero)
                   for i in range(t) for j in range(k) if i < k) \
        and all(beta[i, j] == field.zero for i in range(k, t) for j in range(k)) \
        and all(beta[i, j] == field.zero for i in range(k) for j in range(k, n))
    N = beta.submatrix(range(k, t), range(k, n))
    fiber_ok = ok_shape and (N.transpose() * N ==
                             ExactMatrix.zeros(field, n - k, n - k))
    top = ExactMatrix.identity(field, k).hstack(ExactMatrix.zeros(field, k, n - k))
    bottom = ExactMatrix.zeros(field, t - k, k).hstack(N)
    rebuilt = alpha * ExactMatrix(field, list(top.data) + list(bottom.data))
    return RoundTripReport("sym_frame", dict(params), rebuilt == sample, fiber_ok, "etale")


CHART_DEFAULTS = {
    "sp2": {"t": 2, "i": 1},
    "sp_section": {"t": 3, "k": 2},
    "gl_forget": {"t": 3, "k": 1},
    "pairs_fiber": {"t": 2, "k": 2},
    "alt_kernel": {"t": 2, "n": 4, "k": 1},
    "alt_root": {"t": 2, "n": 4, "k": 1},
    "alt_frame": {"t": 2, "n": 4, "k": 1},
    "gen_kernel": {"m": 2, "t": 2, "n": 2, "k": 1},
    "gen_frame": {"m": 2, "t": 2, "n": 2, "k": 1},
    "gen_pairs": {"m": 2, "t": 2, "n": 2, "k": 1},
    "sym_kernel": {"t": 2, "n": 3, "k": 1},
    "sym_root": {"t": 2, "n": 3, "k": 1},
    "sym_frame": {"t": 2, "n": 3, "k": 1},
}

_CHART_FUNCS = {
    "sp2": _chart_sp2,
    "sp_section": _chart_sp_section,
    "gl_forget": _chart_gl_forget,
    "pairs_fiber": _chart_pairs_fiber,
    "alt_kernel": _chart_alt_kernel,
    "alt_root": _chart_alt_root,
    "alt_frame": _chart_alt_frame,
    "gen_kernel": _chart_gen_kernel,
    "gen_frame": _chart_gen_frame,
    "gen_pairs": _chart_gen_pairs,
    "sym_kernel": _chart_sym_kernel,
    "sym_root": _chart_sym_root,
    "sym_frame": _chart_sym_frame,
}


def chart_trivializations(which: str, params: dict, sample, field: Field) -> RoundTripReport:
    """Apply the forward chart map of the named trivialization, verify the
    fiber's defining equations, apply the inverse, and require an exact
    round trip.  Raises OffChartError off the chart's open set."""
    if which not in _CHART_FUNCS:
        raise ValueError(f"unknown chart family {which!r}; "
                         f"choose from {sorted(_CHART_FUNCS)}")
    return _CHART_FUNCS[which](sample, params, field)


def sample_for_chart(which: str, params: dict, field: Field, rng: random.Random):
    if which == "sp2":
        return random_symplectic_frame(field, params["t"], 1, rng)
    if which == "sp_section":
        return random_symplectic_frame(field, params["t"], params["k"], rng)
    if which == "gl_forget":
        t, k = params["t"], params["k"]
        while True:
            B = random_matrix(field, t, k + 1, rng)
            if B.rank() == k + 1:
                return B
    if which == "pairs_fiber":
        t, k = params["t"], params["k"]
        B0 = random_matrix(field, k - 1, t - k + 1, rng)
        while True:
            u = [random_scalar(field, rng) for _ in range(t - k + 1)]
            nz = [i for i, x in enumerate(u) if x != field.zero]
            if nz:
                break
        v = [[random_scalar(field, rng)] for _ in range(t - k + 1)]
        i0 = nz[0]
        partial = field.sub(_dot(field, u, [r[0] for r in v]),
                            field.mul(u[i0], v[i0][0]))
        v[i0][0] = field.div(field.sub(field.one, partial), u[i0])
        return B0, u, v
    if which.startswith("alt_"):
        return sample_alt_stratum(which_space(which), field, params["t"],
                                  params["n"], params["k"], rng)
    if which.startswith("gen_"):
        return sample_gen_stratum(which_space(which), field, params["m"], params["t"],
                                  params["n"], params["k"], rng)
    if which.startswith("sym_"):
        return sample_sym_stratum(which_space(which), field, params["t"],
                                  params["n"], params["k"], rng)
    raise ValueError(f"no sampler for {which!r}")


def which_space(which: str) -> str:
    suffix = which.split("_", 1)[1]
    return {"kernel": "X", "root": "G", "frame": "F", "pairs": "F"}[suffix]


def run_chart_suite(which: str, field: Field, n_samples: int = 200, seed: int = 0,
                    params: dict = None, max_resamples: int = 200) -> dict:
    """Run n_samples round trips of the named chart family; every on-chart
    sample must round-trip exactly."""
    params = dict(CHART_DEFAULTS[which], **(params or {}))
    rng = random.Random(seed)
    passed = 0
    off_chart = 0
    failures = []
    for idx in range(n_samples):
        report = None
        for _ in range(max_resamples):
            sample = sample_for_chart(which, params, field, rng)
            try:
                report = chart_trivializations(which, params, sample, field)
                break
            except OffChartError:
                off_chart += 1
        if report is None:
            raise OffChartError(f"{which}: could not find an on-chart sample "
                                f"after {max_resamples} draws")
        if report.ok:
            passed += 1
        elif len(failures) < 3:
            failures.append(idx)
    return {
        "which": which,
        "params": params,
        "field": field.descriptor(),
        "samples": n_samples,
        "passed": passed,
        "off_chart_resamples": off_chart,
        "cover": report.cover,
        "all_exact": passed == n_samples,
        "first_failures": failures,
    }
