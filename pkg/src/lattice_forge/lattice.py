"""Integral lattices given by Gramian matrices: signatures, parity, duals,
discriminant groups, sums, rescaling, orthogonal complements."""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exactla import (
    determinant,
    hermite_normal_form,
    inverse_rational,
    kernel_basis,
    mat_mul,
    row_rank,
    saturate,
    smith_normal_form,
    transpose,
)


@dataclass(frozen=True)
class Signature:
    plus: int
    minus: int

    @property
    def total(self):
        return self.plus + self.minus


@dataclass(frozen=True)
class DiscriminantGroup:
    orders: tuple          # nontrivial elementary divisors d1 | d2 | ...
    generator_coords: tuple  # one row per generator, Fractions, basis of L

    @property
    def order(self):
        n = 1
        for d in self.orders:
            n *= d
        return n

    @property
    def length(self):
        return len(self.orders)


class Lattice:
    """A free Z-module with an integral symmetric bilinear form, identified
    with its Gramian matrix."""

    def __init__(self, gram, label=None):
        gram = [list(map(int, row)) for row in gram]
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError("Gramian must be square")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("Gramian must be symmetric")
        self.gram = gram
        self.label = label

    @property
    def rank(self):
        return len(self.gram)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.gram == other.gram

    def __hash__(self):
        return hash(tuple(map(tuple, self.gram)))

    def __repr__(self):
        name = self.label or "Lattice"
        return "%s(rank=%d, disc=%d)" % (name, self.rank, discriminant(self))

    def bilinear(self, v, w):
        return sum(v[i] * self.gram[i][j] * w[j]
                   for i in range(self.rank) for j in range(self.rank))

    def norm(self, v):
        return self.bilinear(v, v)


def signature(lat):
    """Exact inertia counts by symmetric Gaussian reduction over Q."""
    n = lat.rank
    a = [[Fraction(x) for x in row] for row in lat.gram]
    plus = minus = 0
    idx = list(range(n))
    while idx:
        piv = None
        for i in idx:
            if a[i][i] != 0:
                piv = i
                break
        if piv is None:
            pair = None
            for i in idx:
                for j in idx:
                    if i != j and a[i][j] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                break  # remaining block is zero: degenerate part
            i, j = pair
            # v_i += v_j turns the off-diagonal entry into a usable pivot
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            plus += 1
        else:
            minus += 1
        idx.remove(piv)
        for i in idx:
            if a[i][piv] != 0:
                f = a[i][piv] / p
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
                for k in range(n):
                    a[k][i] -= f * a[k][piv]
    return Signature(plus, minus)


def is_even(lat):
    return all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank))


def discriminant(lat):
    return determinant(lat.gram)


def is_degenerate(lat):
    return lat.rank > 0 and discriminant(lat) == 0


def discriminant_group(lat):
    """Elementary divisors of A(L) = L^dual / L with generator coordinates
    (rows, in the basis of L)."""
    if lat.rank == 0:
        return DiscriminantGroup((), ())
    if discriminant(lat) == 0:
        raise ValueError("degenerate lattice has no discriminant group")
    d, u, v = smith_normal_form(lat.gram)
    orders = []
    coords = []
    for i in range(lat.rank):
        di = d[i][i]
        if di > 1:
            orders.append(di)
            coords.append(tuple(Fraction(v[j][i], di) for j in range(lat.rank)))
    return DiscriminantGroup(tuple(orders), tuple(coords))


def rescale(lat, lam):
    if lam == 0:
        raise ValueError("rescaling by zero")
    label = None
    if lat.label:
        label = "%s(%d)" % (lat.label, lam)
    return Lattice([[lam * x for x in row] for row in lat.gram], label=label)


def direct_sum(*lats):
    n = sum(l.rank for l in lats)
    gram = [[0] * n for _ in range(n)]
    off = 0
    for l in lats:
        for i in range(l.rank):
            for j in range(l.rank):
                gram[off + i][off + j] = l.gram[i][j]
        off += l.rank
    return Lattice(gram)


def sublattice_gram(lat, basis):
    """Gramian of the sublattice spanned by the given rows."""
    bg = mat_mul(basis, lat.gram)
    return mat_mul(bg, transpose(basis))


def is_primitive_sublattice(lat, basis):
    if not basis:
        return True
    if row_rank(basis) != len(basis):
        return False
    return saturate(basis, lat.rank) == [
        row for row in hermite_normal_form(basis)[0] if any(x != 0 for x in row)
    ]


def orthogonal_complement(lat, sub_basis):
    """Primitive basis of {v : <v, sub> = 0} and the restricted lattice.

    The complement of an isotropic sublattice can be degenerate; it is
    returned as-is (callers needing nondegeneracy must check)."""
    if sub_basis and not is_primitive_sublattice(lat, sub_basis):
        raise ValueError("sub-basis is not primitive")
    if not sub_basis:
        basis = [[int(i == j) for j in range(lat.rank)] for i in range(lat.rank)]
    else:
        basis = kernel_basis(mat_mul(sub_basis, lat.gram))
    comp = Lattice(sublattice_gram(lat, basis)) if basis else Lattice([])
    return basis, comp


def invariant_sublattice(lat, matrices):
    """Primitive basis of the common fixed sublattice of a list of isometries
    (square integer matrices acting on row vectors) plus its Gramian."""
    n = lat.rank
    stacked = []
    for m in matrices:
        for j in range(n):
            stacked.append([m[i][j] - int(i == j) for i in range(n)])
    if not stacked:
        basis = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        # x fixed by all m: x*m = x, i.e. (m^T - 1)x^T = 0 stacked over m
        basis = kernel_basis(stacked)
    sub = Lattice(sublattice_gram(lat, basis)) if basis else Lattice([])
    return basis, sub


def dual_basis(lat):
    """Rows are the dual basis vectors in the coordinates of L."""
    return inverse_rational(lat.gram)


def to_json_dict(lat):
    d = {"gram": [list(row) for row in lat.gram]}
    if lat.label:
        d["label"] = lat.label
    return d


def from_json_dict(d):
    return Lattice(d["gram"], label=d.get("label"))


def load_lattice(path):
    with open(path) as fh:
        return from_json_dict(json.load(fh))


def save_lattice(lat, path):
    with open(path, "w") as fh:
        json.dump(to_json_dict(lat), fh, indent=1)
        fh.write("\n")


def _chain_gram(n, extra_edges=(), scale=1):
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
    edges = [(i, i + 1) for i in range(n - 1)]
    edges.extend(extra_edges)
    for i, j in edges:
        g[i][j] = g[j][i] = -1
    if scale != 1:
        g = [[scale * x for x in row] for row in g]
    return g


def hyperbolic_plane(scale=1):
    return Lattice([[0, scale], [scale, 0]], label="U" if scale == 1 else "U(%d)" % scale)


def root_lattice(kind, n, scale=1):
    """ADE root lattice Gramians (positive definite at scale 1).

    A_n: chain 0-1-...-(n-1).  D_n: chain 0-...-(n-2) with node n-1 forked
    off node n-3.  E_n: chain 0-...-(n-2) with node n-1 forked off node 2.
    """
    if kind == "A":
        gram = _chain_gram(n, scale=scale)
    elif kind == "D":
        if n < 3:
            raise ValueError("D_n needs n >= 3")
        gram = _chain_gram(n, extra_edges=[(n - 3, n - 1)], scale=scale)
        gram[n - 2][n - 1] = gram[n - 1][n - 2] = 0
    elif kind == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in {6,7,8}")
        gram = _chain_gram(n, extra_edges=[(2, n - 1)], scale=scale)
        gram[n - 2][n - 1] = gram[n - 1][n - 2] = 0
    else:
        raise ValueError("unknown root lattice kind %r" % (kind,))
    label = "%s%d" % (kind, n)
    if scale != 1:
        label += "(%d)" % scale
    return Lattice(gram, label=label)
