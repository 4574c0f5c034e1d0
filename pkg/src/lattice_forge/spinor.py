"""Square classes, reflection factorization, and spinor norms.

Isometries act on row vectors, x -> x * m, matching the lattice module.
Global square classes carry squarefree integer representatives; local
classes at a prime are derived views (unit square class plus valuation
parity), never stored independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .discforms import _jordan_two, _legendre, _valuation
from .exactla import inverse_rational, mat_mul
from .lattice import discriminant_group

__all__ = [
    "SquareClass",
    "LocalSquareClass",
    "DetSpinorPair",
    "TwoAdicInvariants",
    "squarefree_part",
    "reflection",
    "is_rational_isometry",
    "preserves_lattice",
    "reflection_factorization",
    "spinor_norm",
    "f_pair",
    "f_local",
    "localize",
    "in_O0_local",
    "two_adic_unimodular_invariants",
    "subgroup_J",
    "full_local_group",
    "generated_subgroup",
]


def squarefree_part(x):
    """Squarefree integer representing x modulo rational squares."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
        if n % d == 0:
            out *= d
            n //= d
        d += 1
    return sign * out * n


@dataclass(frozen=True)
class SquareClass:
    """Element of the rational square-class group, by squarefree representative."""

    rep: int

    def __post_init__(self):
        if self.rep == 0 or squarefree_part(self.rep) != self.rep:
            raise ValueError("representative must be squarefree and nonzero")

    @classmethod
    def from_rational(cls, x):
        return cls(squarefree_part(x))

    def __mul__(self, other):
        return SquareClass(squarefree_part(self.rep * other.rep))


@dataclass(frozen=True)
class LocalSquareClass:
    """Square class in the p-adic units-and-valuation picture.

    For odd p the bits are (nonsquare unit?, odd valuation?); for p = 2 they
    are (a, b, c) with representative (-1)^a * 3^b * 2^c.
    """

    p: int
    bits: tuple

    def __post_init__(self):
        want = 3 if self.p == 2 else 2
        if len(self.bits) != want or any(b not in (0, 1) for b in self.bits):
            raise ValueError("bad local class bits")

    def __mul__(self, other):
        if self.p != other.p:
            raise ValueError("classes at different primes")
        return LocalSquareClass(self.p, tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def representative(self):
        if self.p == 2:
            a, b, c = self.bits
            return (-1) ** a * 3 ** b * 2 ** c
        a, b = self.bits
        eps = _smallest_nonresidue(self.p)
        return eps ** a * self.p ** b


def _smallest_nonresidue(p):
    e = 2
    while _legendre(e, p) == 1:
        e += 1
    return e


def localize(s, p):
    """Image of a global square class in the p-adic square-class group."""
    rep = s.rep
    if p == 2:
        c = 1 if rep % 2 == 0 else 0
        odd = rep // (2 ** c)
        residue = odd % 8
        a = 1 if residue in (5, 7) else 0
        b = 1 if residue in (3, 5) else 0
        return LocalSquareClass(2, (a, b, c))
    b = 1 if rep % p == 0 else 0
    unit = rep // (p ** b)
    a = 0 if _legendre(unit, p) == 1 else 1
    return LocalSquareClass(p, (a, b))


@dataclass(frozen=True)
class DetSpinorPair:
    """Determinant sign together with a spinor square class."""

    det: int
    spinor: object

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError("det must be +1 or -1")

    def __mul__(self, other):
        return DetSpinorPair(self.det * other.det, self.spinor * other.spinor)


@dataclass(frozen=True)
class TwoAdicInvariants:
    """Rank, determinant sign, oddity, and parity type of a 2-adic unimodular block."""

    r: int
    d: int
    t: int
    e: str

    def __post_init__(self):
        if self.r < 1 or self.d not in (1, -1) or self.e not in ("I", "II"):
            raise ValueError("bad invariant quadruple")
        if self.e == "II" and self.t % 8 != 0:
            raise ValueError("even type forces zero oddity")


# ---------------------------------------------------------------------------
# reflections and factorization


def _pairing(gram, x, y):
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        row = gram[i]
        for j, yj in enumerate(y):
            if yj != 0:
                total += xi * yj * row[j]
    return total


def reflection(l, v):
    """Matrix of the reflection through v, acting on row vectors."""
    gram = l.gram
    v = tuple(Fraction(x) for x in v)
    norm = _pairing(gram, v, v)
    if norm == 0:
        raise ValueError("cannot reflect through an isotropic vector")
    n = l.rank
    u = [sum(v[i] * gram[i][j] for i in range(n)) for j in range(n)]
    rows = []
    for i in range(n):
        coef = 2 * u[i] / norm
        rows.append(tuple((1 if i == j else 0) - coef * v[j] for j in range(n)))
    return tuple(rows)


def is_rational_isometry(l, m):
    gram = l.gram
    n = l.rank
    for i in range(n):
        for j in range(i, n):
            val = _pairing(gram, m[i], m[j])
            if val != gram[i][j]:
                return False
    return True


def preserves_lattice(l, m, p=None):
    """Integrality of m and its inverse; at p, only p-integrality is required."""
    try:
        inv = inverse_rational([list(row) for row in m])
    except ValueError:
        return False
    for mat in (m, inv):
        for row in mat:
            for x in row:
                den = Fraction(x).denominator
                if (p is None and den != 1) or (p is not None and den % p == 0):
                    return False
    return True


def _orthogonal_basis(gram):
    """Rows spanning the space, pairwise orthogonal with nonzero norms."""
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    basis = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def add_row(dst, src, coef):
        for col in range(n):
            m[dst][col] += coef * m[src][col]
        for row in m:
            row[dst] += coef * row[src]
        for col in range(n):
            basis[dst][col] += coef * basis[src][col]

    for i in range(n):
        if m[i][i] == 0:
            swapped = False
            for j in range(i + 1, n):
                if m[j][j] != 0:
                    m[i], m[j] = m[j], m[i]
                    for row in m:
                        row[i], row[j] = row[j], row[i]
                    basis[i], basis[j] = basis[j], basis[i]
                    swapped = True
                    break
            if not swapped:
                for j in range(i + 1, n):
                    if m[i][j] != 0:
                        # an isotropic pair: one of the two folds is anisotropic
                        if 2 * m[i][j] + m[j][j] != 0:
                            add_row(i, j, Fraction(1))
                        else:
                            add_row(i, j, Fraction(-1))
                        break
                else:
                    raise ValueError("degenerate form")
        d = m[i][i]
        for j in range(i + 1, n):
            if m[i][j] != 0:
                add_row(j, i, -m[i][j] / d)
    return [tuple(row) for row in basis]


def _apply(x, m):
    n = len(m)
    return tuple(sum(x[i] * m[i][j] for i in range(n)) for j in range(n))


def reflection_factorization(l, phi):
    """Vectors v_1..v_r with phi equal to their reflections composed in list
    order (the first entry acts first on row vectors); r <= 2 * rank."""
    if not is_rational_isometry(l, phi):
        raise ValueError("input does not preserve the form")
    gram = l.gram
    psi = tuple(tuple(Fraction(x) for x in row) for row in phi)
    stack = []
    for x in _orthogonal_basis(gram):
        y = _apply(x, psi)
        if y == x:
            continue
        z = tuple(a - b for a, b in zip(y, x))
        if _pairing(gram, z, z) != 0:
            psi = mat_mul(psi, reflection(l, z))
            stack.append(z)
        else:
            w = tuple(a + b for a, b in zip(y, x))
            psi = mat_mul(psi, reflection(l, w))
            psi = mat_mul(psi, reflection(l, x))
            stack.append(w)
            stack.append(x)
    return list(reversed(stack))


def _det_rational(m):
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for i in range(n):
        pivot = None
        for r in range(i, n):
            if a[r][i] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != i:
            a[i], a[pivot] = a[pivot], a[i]
            det = -det
        det *= a[i][i]
        inv = 1 / a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] * inv
            if f == 0:
                continue
            for c in range(i, n):
                a[r][c] -= f * a[i][c]
    return det


def spinor_norm(l, phi):
    """Product of reflection-vector norms, as a global square class."""
    gram = l.gram
    total = Fraction(1)
    for v in reflection_factorization(l, phi):
        total *= _pairing(gram, v, v)
    return SquareClass.from_rational(total)


def f_pair(l, phi):
    det = _det_rational(phi)
    if det not in (1, -1):
        raise ValueError("isometry must have determinant +1 or -1")
    return DetSpinorPair(int(det), spinor_norm(l, phi))


def f_local(l, phi, p):
    pair = f_pair(l, phi)
    return DetSpinorPair(pair.det, localize(pair.spinor, p))


def in_O0_local(l, phi, p):
    """Does phi fix the p-part of the discriminant group elementwise?"""
    if not preserves_lattice(l, phi, p=p):
        raise ValueError("isometry is not p-integral")
    dg = discriminant_group(l)
    for order, coords in zip(dg.orders, dg.generator_coords):
        k = 0
        while order % p == 0:
            order //= p
            k += 1
        if k == 0:
            continue
        gen = tuple(Fraction(c) * order for c in coords)
        moved = _apply(gen, phi)
        for a, b in zip(moved, gen):
            # fixed modulo L@Z_(p) means the difference has p-free denominator
            if Fraction(a - b).denominator % p == 0:
                return False
    return True


def two_adic_unimodular_invariants(gram):
    """Quadruple (r, d, t, e) classifying a 2-adic unimodular block."""
    if hasattr(gram, "gram"):
        gram = gram.gram
    n = len(gram)
    if n == 0:
        raise ValueError("empty block")
    det = _det_rational(gram)
    if det == 0 or _valuation(det, 2) != 0:
        raise ValueError("block must be unimodular at 2")
    t = 0
    odd_seen = False
    for kind, k, eps in _jordan_two(gram):
        if k != 0:
            raise ValueError("block must be unimodular at 2")
        if kind == "d":
            odd_seen = True
            t += eps
    unit = det.numerator * pow(det.denominator, -1, 8) % 8
    d = 1 if unit in (1, 7) else -1
    return TwoAdicInvariants(n, d, t % 8, "I" if odd_seen else "II")


def subgroup_J(p):
    """Closure of the pairs (-1, class of 2x), x a p-adic unit: the image
    of the reflections a hyperbolic plane provides."""
    out = set()
    if p == 2:
        for a in (0, 1):
            for b in (0, 1):
                out.add(DetSpinorPair(1, LocalSquareClass(2, (a, b, 0))))
                out.add(DetSpinorPair(-1, LocalSquareClass(2, (a, b, 1))))
    else:
        for det in (1, -1):
            for a in (0, 1):
                out.add(DetSpinorPair(det, LocalSquareClass(p, (a, 0))))
    return frozenset(out)


def full_local_group(p):
    """All of {+-1} x (p-adic square classes)."""
    out = set()
    bits = ((0, 1),) * (3 if p == 2 else 2)
    from itertools import product as iter_product

    for det in (1, -1):
        for combo in iter_product(*bits):
            out.add(DetSpinorPair(det, LocalSquareClass(p, combo)))
    return frozenset(out)


def generated_subgroup(pairs):
    """Closure of a finite set of DetSpinorPair under multiplication."""
    pairs = set(pairs)
    if not pairs:
        return frozenset()
    changed = True
    while changed:
        changed = False
        for a in list(pairs):
            for b in list(pairs):
                c = a * b
                if c not in pairs:
                    pairs.add(c)
                    changed = True
    return frozenset(pairs)
