"""Exact integer and rational linear algebra.

All matrices are plain tuples of tuples of Python ints (arbitrary
precision); rational vectors use fractions.Fraction.  Row convention
throughout: a lattice is the set of integer combinations of the rows of
its basis matrix.
"""

from fractions import Fraction
from math import gcd


def _as_rows(mat):
    return [list(row) for row in mat]


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a, b):
    bt = list(zip(*b)) if b else []
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def hnf(rows):
    """Row Hermite normal form.

    Returns (H, U) with U unimodular, H = U * rows, pivots positive,
    entries above each pivot reduced into [0, pivot), zero rows last.
    """
    a = _as_rows(rows)
    m = len(a)
    n = len(a[0]) if m else 0
    u = _as_rows(identity(m))
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        # clear below the pivot with exact gcd steps
        for i in range(r + 1, m):
            while a[i][c] != 0:
                q = a[r][c] // a[i][c]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                u[r] = [x - q * y for x, y in zip(u[r], u[i])]
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        # reduce entries above the pivot
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in a), tuple(tuple(row) for row in u)


def hnf_basis(rows):
    """Nonzero rows of the HNF: a canonical lattice basis."""
    h, _ = hnf(rows)
    return tuple(row for row in h if any(row))


def lattice_member(v, h):
    """Whether v lies in the row lattice of h (h in HNF, zero rows allowed)."""
    basis = [row for row in h if any(row)]
    if basis and len(v) != len(basis[0]):
        raise ValueError("dimension mismatch")
    v = list(v)
    for row in basis:
        c = next(i for i, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def kernel_lattice(rows):
    """Z-basis of the integer kernel {x : rows . x = 0} (as rows).

    The returned lattice is saturated: it is the full intersection of the
    rational kernel with Z^n.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    # HNF of the transpose augmented with an identity: zero columns of the
    # transformed matrix expose kernel vectors.
    at = tuple(tuple(rows[i][j] for i in range(m)) for j in range(n))
    h, u = hnf(at)
    ker = [u[i] for i in range(n) if not any(h[i])]
    return hnf_basis(ker) if ker else tuple()


def rank(rows):
    h, _ = hnf(rows) if rows else ((), ())
    return sum(1 for row in h if any(row))


def det(rows):
    """Determinant of a square integer matrix, fraction-free Bareiss."""
    a = _as_rows(rows)
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


def primitive(vec):
    """Scale a rational vector to a primitive integer vector (same ray)."""
    fr = [Fraction(x) for x in vec]
    if not any(fr):
        return tuple(0 for _ in fr)
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def smith_normal_form(rows):
    """Smith normal form: returns (S, U, V) with S = U * rows * V."""
    a = _as_rows(rows)
    m = len(a)
    n = len(a[0]) if m else 0
    u = _as_rows(identity(m))
    v = _as_rows(identity(n))

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_op(i, j, q):  # row i -= q * row j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col i -= q * col j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def clear_position(t):
        # make a[t][t] the only nonzero entry in its row and column
        while True:
            done = True
            for i in range(t + 1, m):
                while a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                while a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                return

    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        clear_position(t)
        # divisibility: a[t][t] must divide everything to the lower right
        while True:
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
            clear_position(t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (
        tuple(tuple(row) for row in a),
        tuple(tuple(row) for row in u),
        tuple(tuple(row) for row in v),
    )


def invert_unimodular(rows):
    """Inverse of a unimodular integer matrix (again integral)."""
    n = len(rows)
    h, u = hnf(rows)
    if h != identity(n):
        raise ValueError("matrix is not unimodular")
    return u


def frac_kernel(rows, ncols):
    """Basis of the rational kernel, returned as primitive integer rows."""
    return kernel_lattice(rows) if rows else identity(ncols)


def solve_in_lattice(target, basis):
    """Integer coordinates of target in the row lattice, or None.

    basis rows need not be in HNF and may be dependent; any valid
    coordinate vector is returned.
    """
    if not basis:
        return None if any(target) else ()
    h, u = hnf(basis)
    nz = [i for i, row in enumerate(h) if any(row)]
    v = list(target)
    coeffs = [0] * len(basis)
    for i in nz:
        row = h[i]
        c = next(j for j, x in enumerate(row) if x)
        if v[c] % row[c]:
            return None
        q = v[c] // row[c]
        v = [x - q * y for x, y in zip(v, row)]
        for k in range(len(basis)):
            coeffs[k] += q * u[i][k]
    if any(v):
        return None
    return tuple(coeffs)


def rref(rows):
    """Reduced row echelon form over the rationals.

    Returns (rref_rows, pivot_columns); rows are tuples of Fractions.
    """
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return [tuple(row) for row in a], pivots


def frac_rank(rows):
    return len(rref(rows)[1])


def in_row_span(vec, rows):
    """Whether vec lies in the rational row span of rows."""
    if not rows:
        return not any(vec)
    return frac_rank(list(rows)) == frac_rank(list(rows) + [list(vec)])
