"""Exact integer and rational linear algebra on dense list-of-list matrices.

Integer matrices are plain ``list[list[int]]`` (Python ints, so arbitrary
precision is automatic); rational matrices use ``fractions.Fraction``
entries.  All routines are pure functions returning fresh matrices.
"""

from fractions import Fraction


def xgcd(a, b):
    # returns (g, x, y) with g = gcd(a, b) = a*x + b*y, g >= 0
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def copy_matrix(m):
    return [row[:] for row in m]


def transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def mat_mul(a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError("dimension mismatch")
    if not a or not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vec_mat(v, m):
    if not m:
        return []
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]))]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(m, c):
    return [[c * x for x in row] for row in m]


def mat_eq(a, b):
    return a == b


def is_zero_matrix(m):
    return all(x == 0 for row in m for x in row)


def determinant(m):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    a = copy_matrix(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m):
    """Return (d, u, v) with d = u*m*v diagonal, d1 | d2 | ..., u, v unimodular."""
    r = len(m)
    c = len(m[0]) if r else 0
    d = copy_matrix(m)
    u = identity(r)
    v = identity(c)

    def improve_pivot(t):
        # clear row and column t below/right of the pivot
        while True:
            # pick the nonzero entry of smallest magnitude in the block
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return False
            bi, bj = best
            if bi != t:
                d[t], d[bi] = d[bi], d[t]
                u[t], u[bi] = u[bi], u[t]
            if bj != t:
                for row in d:
                    row[t], row[bj] = row[bj], row[t]
                for row in v:
                    row[t], row[bj] = row[bj], row[t]
            p = d[t][t]
            done = True
            for i in range(t + 1, r):
                if d[i][t] != 0:
                    q = d[i][t] // p
                    for j in range(t, c):
                        d[i][j] -= q * d[t][j]
                    for j in range(r):
                        u[i][j] -= q * u[t][j]
                    if d[i][t] != 0:
                        done = False
            for j in range(t + 1, c):
                if d[t][j] != 0:
                    q = d[t][j] // p
                    for i in range(t, r):
                        d[i][j] -= q * d[i][t]
                    for i in range(c):
                        v[i][j] -= q * v[i][t]
                    if d[t][j] != 0:
                        done = False
            if done:
                return True

    t = 0
    while t < min(r, c):
        if not improve_pivot(t):
            break
        t += 1
    rank = t
    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for t in range(rank - 1):
            a, b = d[t][t], d[t + 1][t + 1]
            if b % a != 0:
                # fold d[t+1][t+1] into column t and re-reduce
                for i in range(r):
                    d[i][t] += d[i][t + 1]
                for i in range(c):
                    v[i][t] += v[i][t + 1]
                improve_pivot(t)
                improve_pivot(t + 1)
                changed = True
    for t in range(rank):
        if d[t][t] < 0:
            for j in range(c):
                d[t][j] = -d[t][j]
            for j in range(r):
                u[t][j] = -u[t][j]
    return d, u, v


def hermite_normal_form(m):
    """Row-style HNF: returns (h, u) with h = u*m, u unimodular.

    Pivots are positive, entries above each pivot reduced into [0, pivot),
    zero rows collected at the bottom.
    """
    r = len(m)
    c = len(m[0]) if r else 0
    h = copy_matrix(m)
    u = identity(r)
    pivot_row = 0
    pivots = []
    for col in range(c):
        if pivot_row >= r:
            break
        # gcd out the column below pivot_row
        piv = None
        for i in range(pivot_row, r):
            if h[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != pivot_row:
            h[pivot_row], h[piv] = h[piv], h[pivot_row]
            u[pivot_row], u[piv] = u[piv], u[pivot_row]
        for i in range(pivot_row + 1, r):
            while h[i][col] != 0:
                if abs(h[i][col]) < abs(h[pivot_row][col]):
                    h[pivot_row], h[i] = h[i], h[pivot_row]
                    u[pivot_row], u[i] = u[i], u[pivot_row]
                q = h[i][col] // h[pivot_row][col]
                for j in range(c):
                    h[i][j] -= q * h[pivot_row][j]
                for j in range(r):
                    u[i][j] -= q * u[pivot_row][j]
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        # reduce entries above the pivot into [0, pivot)
        p = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // p
            if q:
                for j in range(c):
                    h[i][j] -= q * h[pivot_row][j]
                for j in range(r):
                    u[i][j] -= q * u[pivot_row][j]
        pivots.append(col)
        pivot_row += 1
    return h, u


def row_rank(m):
    h, _ = hermite_normal_form(m)
    return sum(1 for row in h if any(x != 0 for x in row))


def kernel_basis(m):
    """Basis (as rows) of {x : m * x^T = 0}, saturated (the quotient by its
    span is torsion-free)."""
    r = len(m)
    c = len(m[0]) if r else 0
    if r == 0:
        return identity(c)
    d, _, v = smith_normal_form(m)
    rank = sum(1 for t in range(min(r, c)) if d[t][t] != 0)
    if rank == c:
        return []
    basis = [[v[i][j] for i in range(c)] for j in range(rank, c)]
    h, _ = hermite_normal_form(basis)
    return [row for row in h if any(x != 0 for x in row)]


def saturate(rows, ambient_rank):
    """Basis of the smallest primitive sublattice of Z^ambient_rank containing
    the row span."""
    k = len(rows)
    if any(len(row) != ambient_rank for row in rows):
        raise ValueError("row length does not match ambient rank")
    if row_rank(rows) != k:
        raise ValueError("rows are linearly dependent")
    if k == 0:
        return []
    # saturation = kernel of the kernel
    ker = kernel_basis(rows)
    if not ker:
        return identity(ambient_rank)
    return kernel_basis(ker)


def inverse_rational(m):
    """Exact inverse with Fraction entries; raises on singular input."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def solve_rational(m, rhs):
    """Solve m * x = rhs exactly (m square nonsingular, rhs a vector)."""
    inv = inverse_rational(m)
    return [sum(Fraction(inv[i][j]) * rhs[j] for j in range(len(rhs)))
            for i in range(len(inv))]


def frac_mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(Fraction(x) * Fraction(y) for x, y in zip(row, col)) for col in bt]
            for row in a]


def frac_mat_int(m):
    """Cast a Fraction matrix with integral entries back to ints."""
    out = []
    for row in m:
        new = []
        for x in row:
            f = Fraction(x)
            if f.denominator != 1:
                raise ValueError("entry %s is not integral" % (x,))
            new.append(f.numerator)
        out.append(new)
    return out


def solve_integer_row(m, rhs):
    """One integer solution x of x * m = rhs, or None if none exists."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if len(rhs) != cols:
        raise ValueError("dimension mismatch")
    d, u, v = smith_normal_form(m)
    bv = vec_mat(rhs, v)
    y = []
    for i in range(min(rows, cols)):
        di = d[i][i]
        if di == 0:
            if bv[i] != 0:
                return None
            y.append(0)
        else:
            if bv[i] % di != 0:
                return None
            y.append(bv[i] // di)
    for i in range(min(rows, cols), cols):
        if bv[i] != 0:
            return None
    y.extend([0] * (rows - len(y)))
    return vec_mat(y, u)
