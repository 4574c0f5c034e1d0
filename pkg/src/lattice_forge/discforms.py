"""Finite quadratic forms on finite abelian groups, in exact arithmetic.

A form lives on a direct sum of prime-power cyclic groups Z/n_1 + ... + Z/n_r.
It is described by the values q(g_i) in Q/2Z and the pairings b(g_i, g_j) in
Q/Z, where b(x, y) = (q(x+y) - q(x) - q(y))/2.  Elements are coefficient
tuples against the generators.  All values are Fractions; q is normalized
into [0, 2) and b into [0, 1).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product as iter_product

from .lattice import Lattice, discriminant_group, is_degenerate, is_even

__all__ = [
    "FiniteQuadraticForm",
    "BlockDecomposition",
    "discriminant_form_generators",
    "trivial_form",
    "cyclic_form",
    "u_form",
    "v_form",
    "form_direct_sum",
    "discriminant_form",
    "negate",
    "p_primary_part",
    "block_decomposition",
    "make_block_decomposition",
    "parse_genus_symbol",
    "render_genus_symbol",
    "are_isomorphic",
    "find_isomorphism",
    "milgram_signature",
]


def _mod2(x):
    return Fraction(x) % 2


def _mod1(x):
    return Fraction(x) % 1


def _prime_power(n):
    """Return (p, k) with n == p**k, or None if n is not a prime power."""
    if n < 2:
        return None
    p = None
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            p = d
            while m % d == 0:
                m //= d
            break
        d += 1
    if p is None:
        p = m
        m = 1
    if m != 1:
        return None
    k = 0
    while n > 1:
        n //= p
        k += 1
    return (p, k)


def _legendre(a, p):
    a %= p
    if a == 0:
        raise ValueError("argument divisible by p")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _valuation(x, p):
    """p-adic valuation of a nonzero Fraction."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _unit_part(x, p):
    """x / p**v as a Fraction with p-free numerator and denominator."""
    return Fraction(x) / Fraction(p) ** _valuation(x, p)


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """q-values and pairings on an explicit prime-power cyclic presentation."""

    orders: tuple
    q_values: tuple
    b_values: tuple

    def __post_init__(self):
        r = len(self.orders)
        if len(self.q_values) != r or len(self.b_values) != r:
            raise ValueError("inconsistent lengths")
        for n in self.orders:
            if _prime_power(n) is None:
                raise ValueError("generator orders must be prime powers")
        for i, n in enumerate(self.orders):
            qi = self.q_values[i]
            if not (0 <= qi < 2):
                raise ValueError("q-values must be reduced into [0, 2)")
            if (n * n * qi) % 2 != 0:
                raise ValueError("q(g) * ord(g)^2 must be even")
            row = self.b_values[i]
            if len(row) != r:
                raise ValueError("b table must be square")
            if row[i] != qi % 1:
                raise ValueError("diagonal of b must be q mod 1")
            for j, bij in enumerate(row):
                if not (0 <= bij < 1):
                    raise ValueError("b-values must be reduced into [0, 1)")
                if bij != self.b_values[j][i]:
                    raise ValueError("b must be symmetric")
                if (n * bij) % 1 != 0:
                    raise ValueError("b(g, .) must be killed by ord(g)")

    @property
    def order(self):
        return math.prod(self.orders) if self.orders else 1

    @property
    def rank(self):
        return len(self.orders)

    def primes(self):
        return sorted({_prime_power(n)[0] for n in self.orders})

    def element_order(self, x):
        o = 1
        for xi, n in zip(x, self.orders):
            g = math.gcd(xi % n, n)
            o = o * (n // g) // math.gcd(o, n // g)
        return o

    def q_of(self, x):
        total = Fraction(0)
        for i, xi in enumerate(x):
            total += xi * xi * self.q_values[i]
            for j in range(i + 1, len(x)):
                total += 2 * xi * x[j] * self.b_values[i][j]
        return _mod2(total)

    def b_of(self, x, y):
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi % self.orders[i] == 0:
                continue
            row = self.b_values[i]
            for j, yj in enumerate(y):
                total += xi * yj * row[j]
        return _mod1(total)

    def elements(self):
        return iter_product(*(range(n) for n in self.orders))

    def radical_size(self):
        """Number of elements pairing trivially with the whole group."""
        count = 0
        for x in self.elements():
            if all(self.b_of(x, g) == 0 for g in _unit_rows(self.rank)):
                count += 1
        return count

    def is_degenerate(self):
        return self.radical_size() > 1


def _unit_rows(r):
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def _sort_key(order):
    p, k = _prime_power(order)
    return (p, k)


def _build_form(orders, q_values, b_values):
    """Assemble a form, sorting generators by (prime, exponent)."""
    idx = sorted(range(len(orders)), key=lambda i: _sort_key(orders[i]))
    orders = tuple(orders[i] for i in idx)
    q_values = tuple(_mod2(q_values[i]) for i in idx)
    b_values = tuple(
        tuple(_mod1(b_values[i][j]) for j in idx) for i in idx
    )
    return FiniteQuadraticForm(orders, q_values, b_values)


def trivial_form():
    return FiniteQuadraticForm((), (), ())


def cyclic_form(order, q_value):
    q = _mod2(q_value)
    return FiniteQuadraticForm((order,), (q,), ((q % 1,),))


def u_form(k):
    """Hyperbolic even block at scale 2**k: q = 0 on both generators."""
    n = 2 ** k
    z = Fraction(0)
    h = Fraction(1, n)
    return FiniteQuadraticForm((n, n), (z, z), ((z, h), (h, z)))


def v_form(k):
    """The other even block at scale 2**k: q = 2/2**k on both generators."""
    n = 2 ** k
    q = _mod2(Fraction(2, n))
    h = Fraction(1, n)
    return FiniteQuadraticForm((n, n), (q, q), ((q % 1, h), (h, q % 1)))


def form_direct_sum(*forms):
    orders = []
    q_values = []
    offsets = []
    for f in forms:
        offsets.append(len(orders))
        orders.extend(f.orders)
        q_values.extend(f.q_values)
    r = len(orders)
    b = [[Fraction(0)] * r for _ in range(r)]
    for f, off in zip(forms, offsets):
        for i in range(f.rank):
            for j in range(f.rank):
                b[off + i][off + j] = f.b_values[i][j]
    return _build_form(tuple(orders), tuple(q_values), tuple(tuple(row) for row in b))


def negate(f):
    return _build_form(
        f.orders,
        tuple(_mod2(-q) for q in f.q_values),
        tuple(tuple(_mod1(-x) for x in row) for row in f.b_values),
    )


def p_primary_part(f, p):
    idx = [i for i, n in enumerate(f.orders) if n % p == 0]
    return FiniteQuadraticForm(
        tuple(f.orders[i] for i in idx),
        tuple(f.q_values[i] for i in idx),
        tuple(tuple(f.b_values[i][j] for j in idx) for i in idx),
    )


def discriminant_form_generators(l):
    """Generators of the discriminant group split into prime-power cyclic
    pieces, as (order, dual-vector coords) pairs.  Their sequence fixes the
    generator basis of discriminant_form(l)."""
    dg = discriminant_group(l)
    gens = []
    for order, coords in zip(dg.orders, dg.generator_coords):
        n = order
        while n > 1:
            p, k = _prime_power(_smallest_prime_power_factor(n))
            pk = p ** k
            m = order // pk
            gens.append((pk, tuple(Fraction(c) * m for c in coords)))
            n //= pk
    return tuple(gens)


def discriminant_form(l):
    """Quadratic form on dual-mod-lattice classes of an even lattice."""
    if not is_even(l):
        raise ValueError("lattice must be even")
    gens = discriminant_form_generators(l)
    gram = l.gram
    orders = tuple(g[0] for g in gens)
    q_values = tuple(_mod2(_gram_eval(gram, c, c)) for _, c in gens)
    b = tuple(
        tuple(_mod1(_gram_eval(gram, gens[i][1], gens[j][1])) for j in range(len(gens)))
        for i in range(len(gens))
    )
    return _build_form(orders, q_values, b)


def _smallest_prime_power_factor(n):
    """Full prime power p**v(n) for the smallest prime dividing n."""
    d = 2
    while d * d <= n:
        if n % d == 0:
            pk = 1
            while n % d == 0:
                pk *= d
                n //= d
            return pk
        d += 1
    return n


def _gram_eval(gram, x, y):
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        row = gram[i]
        for j, yj in enumerate(y):
            if yj != 0:
                total += xi * yj * row[j]
    return total


# ---------------------------------------------------------------------------
# standard-block decomposition and genus-symbol text


@dataclass(frozen=True)
class BlockDecomposition:
    """Multiset of standard blocks, one entry per (scale, kind) after merging.

    odd_p entries are (p, k, sign, mult) with sign +1/-1; even_u and even_v
    entries are (k, mult) at scale 2**k; odd_2 entries are (k, eps, mult)
    with eps the odd unit mod 8.
    """

    odd_p: tuple
    even_u: tuple
    even_v: tuple
    odd_2: tuple

    @property
    def total_order(self):
        total = 1
        for p, k, _, mult in self.odd_p:
            total *= (p ** k) ** mult
        for k, mult in self.even_u:
            total *= (2 ** k) ** (2 * mult)
        for k, mult in self.even_v:
            total *= (2 ** k) ** (2 * mult)
        for k, _, mult in self.odd_2:
            total *= (2 ** k) ** mult
        return total

    def to_form(self):
        parts = []
        for k, eps, mult in self.odd_2:
            parts.extend([cyclic_form(2 ** k, Fraction(eps, 2 ** k))] * mult)
        for k, mult in self.even_u:
            parts.extend([u_form(k)] * mult)
        for k, mult in self.even_v:
            parts.extend([v_form(k)] * mult)
        for p, k, sign, mult in self.odd_p:
            w = _odd_block_numerator(p, sign)
            parts.extend([cyclic_form(p ** k, Fraction(w, p ** k))] * mult)
        return form_direct_sum(*parts) if parts else trivial_form()


def _odd_block_numerator(p, sign):
    """Smallest even numerator prime to p in the requested square class."""
    w = 2
    while w % p == 0 or _legendre(w, p) != sign:
        w += 2
    return w


def make_block_decomposition(odd_p=(), even_u=(), even_v=(), odd_2=()):
    """Merge, normalize (minus-pairs to plus, v-pairs to u), and sort."""
    by_pk = {}
    for p, k, sign, mult in odd_p:
        if mult < 0:
            raise ValueError("negative multiplicity")
        key = (p, k)
        plus, minus = by_pk.get(key, (0, 0))
        if sign > 0:
            plus += mult
        else:
            minus += mult
        by_pk[key] = (plus, minus)
    odd_out = []
    for (p, k) in sorted(by_pk):
        plus, minus = by_pk[(p, k)]
        # a pair of minus blocks at one scale equals a pair of plus blocks
        plus += minus - minus % 2
        minus %= 2
        if plus:
            odd_out.append((p, k, 1, plus))
        if minus:
            odd_out.append((p, k, -1, minus))
    u_by_k = {}
    for k, mult in even_u:
        u_by_k[k] = u_by_k.get(k, 0) + mult
    v_by_k = {}
    for k, mult in even_v:
        v_by_k[k] = v_by_k.get(k, 0) + mult
    for k in list(v_by_k):
        v = v_by_k[k]
        # v + v is isomorphic to u + u at every scale
        if v >= 2:
            u_by_k[k] = u_by_k.get(k, 0) + (v - v % 2)
            v_by_k[k] = v % 2
    two_odd = {}
    for k, eps, mult in odd_2:
        eps %= 8
        if eps % 2 == 0:
            raise ValueError("unit must be odd")
        key = (k, eps)
        two_odd[key] = two_odd.get(key, 0) + mult
    return BlockDecomposition(
        tuple(odd_out),
        tuple((k, m) for k, m in sorted(u_by_k.items()) if m),
        tuple((k, m) for k, m in sorted(v_by_k.items()) if m),
        tuple((k, e, m) for (k, e), m in sorted(two_odd.items()) if m),
    )


def block_decomposition(l):
    """Scale-graded standard blocks of the discriminant form of l."""
    if not is_even(l):
        raise ValueError("lattice must be even")
    if is_degenerate(l):
        raise ValueError("lattice must be nondegenerate")
    from .lattice import discriminant

    disc = abs(discriminant(l))
    odd_p = []
    even_u = []
    even_v = []
    odd_2 = []
    for p in _prime_factors(disc):
        if p == 2:
            for kind, k, unit in _jordan_two(l.gram):
                if k == 0:
                    continue
                if kind == "d":
                    odd_2.append((k, unit % 8, 1))
                elif kind == "u":
                    even_u.append((k, 1))
                else:
                    even_v.append((k, 1))
        else:
            units_by_scale = {}
            for k, unit in _jordan_odd(l.gram, p):
                if k == 0:
                    continue
                units_by_scale.setdefault(k, []).append(unit)
            for k, units in units_by_scale.items():
                sign = 1
                for u in units:
                    sign *= u
                minus = 1 if sign < 0 else 0
                if len(units) - minus:
                    odd_p.append((p, k, 1, len(units) - minus))
                if minus:
                    odd_p.append((p, k, -1, minus))
    return make_block_decomposition(odd_p, even_u, even_v, odd_2)


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _jordan_odd(gram, p):
    """Diagonalize over integers localized at odd p; yield (scale, legendre)."""
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    out = []
    for i in range(n):
        r_best = c_best = None
        v_best = None
        for r in range(i, n):
            for c in range(i, n):
                if m[r][c] == 0:
                    continue
                v = _valuation(m[r][c], p)
                better = v_best is None or v < v_best
                same_diag = v_best is not None and v == v_best and r == c and r_best != c_best
                if better or same_diag:
                    v_best, r_best, c_best = v, r, c
        if v_best is None:
            raise ValueError("degenerate matrix")
        if r_best != c_best:
            # 2 is a unit here, so folding column c into r makes the
            # diagonal entry attain the minimal valuation
            r, c = r_best, c_best
            for j in range(n):
                m[r][j] += m[c][j]
            for j in range(n):
                m[j][r] += m[j][c]
            r_best = c_best = r
        r = r_best
        if r != i:
            m[i], m[r] = m[r], m[i]
            for row in m:
                row[i], row[r] = row[r], row[i]
        d = m[i][i]
        for j in range(i + 1, n):
            f = m[i][j] / d
            if f == 0:
                continue
            for col in range(n):
                m[j][col] -= f * m[i][col]
            for row in m:
                row[j] -= f * row[i]
        unit = _unit_part(d, p)
        out.append((_valuation(d, p), _legendre(unit.numerator * unit.denominator, p)))
    return out


def _jordan_two(gram):
    """Split over integers localized at 2 into scale-graded unimodular blocks.

    Yields ("d", k, eps) for diagonal odd-unit blocks eps*2**k, and
    ("u", k, _) / ("v", k, _) for the two even binary block shapes.
    """
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    out = []
    i = 0
    while i < n:
        diag_best = None
        diag_v = None
        off_best = None
        off_v = None
        for r in range(i, n):
            for c in range(i, n):
                if m[r][c] == 0:
                    continue
                v = _valuation(m[r][c], 2)
                if r == c:
                    if diag_v is None or v < diag_v:
                        diag_v, diag_best = v, r
                else:
                    if off_v is None or v < off_v:
                        off_v, off_best = v, (r, c)
        if diag_v is None and off_v is None:
            raise ValueError("degenerate matrix")
        if diag_v is not None and (off_v is None or diag_v <= off_v):
            r = diag_best
            if r != i:
                m[i], m[r] = m[r], m[i]
                for row in m:
                    row[i], row[r] = row[r], row[i]
            d = m[i][i]
            for j in range(i + 1, n):
                f = m[i][j] / d
                if f == 0:
                    continue
                for col in range(n):
                    m[j][col] -= f * m[i][col]
                for row in m:
                    row[j] -= f * row[i]
            unit = _unit_part(d, 2)
            eps = unit.numerator * pow(unit.denominator, -1, 8) % 8
            out.append(("d", _valuation(d, 2), eps))
            i += 1
        else:
            r, c = off_best
            if r != i:
                m[i], m[r] = m[r], m[i]
                for row in m:
                    row[i], row[r] = row[r], row[i]
            if c == i:
                c = r
            if c != i + 1:
                m[i + 1], m[c] = m[c], m[i + 1]
                for row in m:
                    row[i + 1], row[c] = row[c], row[i + 1]
            a, b_, d = m[i][i], m[i][i + 1], m[i + 1][i + 1]
            det = a * d - b_ * b_
            k = off_v
            for j in range(i + 2, n):
                # kill entries (j, i) and (j, i+1) with the block inverse
                x = (m[j][i] * d - m[j][i + 1] * b_) / det
                y = (m[j][i + 1] * a - m[j][i] * b_) / det
                if x == 0 and y == 0:
                    continue
                for col in range(n):
                    m[j][col] -= x * m[i][col] + y * m[i + 1][col]
                for row in m:
                    row[j] -= x * row[i] + y * row[i + 1]
            unit = _unit_part(det, 2)
            eps = unit.numerator * pow(unit.denominator, -1, 8) % 8
            out.append(("u" if eps == 7 else "v", k, eps))
            i += 2
    return out


_TOKEN_RE = re.compile(r"^(\d+)\^\{?([+-])(\d+)\}?(?:_\{?(II|[0-7])\}?)?$")


def parse_genus_symbol(text):
    """Parse a comma-separated scale-block symbol into a BlockDecomposition."""
    text = text.strip()
    if not text:
        return make_block_decomposition()
    odd_p = []
    even_u = []
    even_v = []
    odd_2 = []
    for raw in text.split(","):
        token = raw.strip().replace(" ", "")
        mobj = _TOKEN_RE.match(token)
        if mobj is None:
            raise ValueError("malformed token: %r" % raw.strip())
        scale, sign_s, mult_s, suffix = mobj.groups()
        pk = _prime_power(int(scale))
        if pk is None or int(scale) == 1:
            raise ValueError("scale must be a prime power: %r" % scale)
        p, k = pk
        sign = 1 if sign_s == "+" else -1
        mult = int(mult_s)
        if mult < 1:
            raise ValueError("multiplicity must be positive: %r" % raw.strip())
        if p != 2:
            if suffix is not None:
                raise ValueError("odd scale cannot carry a suffix: %r" % raw.strip())
            if sign > 0:
                odd_p.append((p, k, 1, mult))
            else:
                odd_p.append((p, k, 1, mult - 1))
                odd_p.append((p, k, -1, 1))
            continue
        if suffix is None:
            raise ValueError("scale-2 token needs an oddity or II suffix: %r" % raw.strip())
        if suffix == "II":
            if mult % 2:
                raise ValueError("even-type rank must be even: %r" % raw.strip())
            if sign > 0:
                even_u.append((k, mult // 2))
            else:
                even_v.append((k, 1))
                if mult > 2:
                    even_u.append((k, (mult - 2) // 2))
        else:
            combo = _oddity_multiset(mult, sign, int(suffix))
            if combo is None:
                raise ValueError("inconsistent sign/oddity: %r" % raw.strip())
            for eps in combo:
                odd_2.append((k, eps, 1))
    return make_block_decomposition(odd_p, even_u, even_v, odd_2)


def _oddity_multiset(n, sign, t):
    """Smallest multiset of odd units mod 8 with given sum and product class."""
    for combo in combinations_with_replacement((1, 3, 5, 7), n):
        if sum(combo) % 8 != t % 8:
            continue
        prod = 1
        for e in combo:
            prod = prod * e % 8
        if (prod in (1, 7)) != (sign > 0):
            continue
        return combo
    return None


def render_genus_symbol(bd):
    """Canonical text for a BlockDecomposition; inverse of parse on its output."""
    tokens = []
    two_scales = {}
    for k, mult in bd.even_u:
        two_scales.setdefault(k, {"u": 0, "v": 0, "odd": []})["u"] = mult
    for k, mult in bd.even_v:
        two_scales.setdefault(k, {"u": 0, "v": 0, "odd": []})["v"] = mult
    for k, eps, mult in bd.odd_2:
        two_scales.setdefault(k, {"u": 0, "v": 0, "odd": []})["odd"].append((eps, mult))
    for k in sorted(two_scales):
        info = two_scales[k]
        rank = 2 * (info["u"] + info["v"]) + sum(m for _, m in info["odd"])
        dsign = -1 if info["v"] % 2 else 1
        for eps, mult in info["odd"]:
            if pow(eps, mult, 8) not in (1, 7):
                dsign = -dsign
        if info["odd"]:
            t = sum(eps * mult for eps, mult in info["odd"]) % 8
            tokens.append("%d^%s%d_%d" % (2 ** k, "+" if dsign > 0 else "-", rank, t))
        else:
            tokens.append("%d^%s%d_II" % (2 ** k, "+" if dsign > 0 else "-", rank))
    odd_scales = {}
    for p, k, sign, mult in bd.odd_p:
        key = (p, k)
        n, s = odd_scales.get(key, (0, 1))
        odd_scales[key] = (n + mult, s * (sign ** mult))
    for (p, k) in sorted(odd_scales):
        n, s = odd_scales[(p, k)]
        tokens.append("%d^%s%d" % (p ** k, "+" if s > 0 else "-", n))
    return ", ".join(tokens)


# ---------------------------------------------------------------------------
# isomorphism testing


@lru_cache(maxsize=256)
def _element_table(f):
    """All elements with their orders and q-values."""
    return tuple((x, f.element_order(x), f.q_of(x)) for x in f.elements())


@lru_cache(maxsize=256)
def _order_q_histogram(f):
    hist = {}
    for _, o, q in _element_table(f):
        key = (o, q)
        hist[key] = hist.get(key, 0) + 1
    return tuple(sorted(hist.items()))


def milgram_signature(f):
    """Residue mod 8 carried by the normalized Gauss sum of the form."""
    if f.is_degenerate():
        raise ValueError("form must be nondegenerate")
    if f.order == 1:
        return 0
    total = 0j
    for _, _, q in _element_table(f):
        total += cmath.exp(1j * cmath.pi * float(q))
    expected = math.sqrt(f.order)
    if abs(abs(total) - expected) > 1e-6 * expected:
        raise ArithmeticError("Gauss sum magnitude off; form data inconsistent")
    phase = cmath.phase(total) / (cmath.pi / 4)
    sig = round(phase) % 8
    if abs(phase - round(phase)) > 0.5 / 4:
        raise ArithmeticError("Gauss sum phase too far from an eighth root")
    return sig


def find_isomorphism(f1, f2):
    """Generator images in f2 coordinates realizing f1 ~ f2, or None."""
    if sorted(f1.orders) != sorted(f2.orders):
        return None
    r1, r2 = f1.rank, f2.rank
    images = [[0] * r2 for _ in range(r1)]
    for p in f1.primes():
        idx1 = [i for i, n in enumerate(f1.orders) if n % p == 0]
        idx2 = [i for i, n in enumerate(f2.orders) if n % p == 0]
        part1 = p_primary_part(f1, p)
        part2 = p_primary_part(f2, p)
        local = _match_p_parts(part1, part2)
        if local is None:
            return None
        for a, row in enumerate(local):
            for b_, coeff in enumerate(row):
                images[idx1[a]][idx2[b_]] = coeff
    return tuple(tuple(row) for row in images)


def are_isomorphic(f1, f2):
    """Order-preserving group isomorphism matching q exists?"""
    witness = find_isomorphism(f1, f2)
    if witness is None:
        return False
    _check_witness(f1, f2, witness)
    return True


def _check_witness(f1, f2, images):
    for i in range(f1.rank):
        if f2.q_of(images[i]) != f1.q_values[i]:
            raise AssertionError("witness does not preserve q")
        for j in range(i + 1, f1.rank):
            if f2.b_of(images[i], images[j]) != f1.b_values[i][j]:
                raise AssertionError("witness does not preserve b")


def _match_p_parts(a, b):
    if sorted(a.orders) != sorted(b.orders):
        return None
    if a.rank == 0:
        return ()
    if _order_q_histogram(a) != _order_q_histogram(b):
        return None
    rs_a, rs_b = a.radical_size(), b.radical_size()
    if rs_a != rs_b:
        return None
    if rs_a == 1 and milgram_signature(a) != milgram_signature(b):
        return None
    # search images for generators in decreasing order
    gen_idx = sorted(range(a.rank), key=lambda i: -a.orders[i])
    buckets = {}
    for x, o, q in _element_table(b):
        buckets.setdefault((o, q), []).append(x)
    zero = tuple([0] * b.rank)
    assignment = [None] * a.rank

    def extend_subgroup(current, y, order):
        new = set(current)
        step = y
        for _ in range(order - 1):
            new.update(tuple((s[i] + step[i]) % b.orders[i] for i in range(b.rank)) for s in current)
            step = tuple((step[i] + y[i]) % b.orders[i] for i in range(b.rank))
        return new

    def backtrack(level, subgroup, size):
        if level == len(gen_idx):
            return True
        gi = gen_idx[level]
        want_o = a.orders[gi]
        want_q = a.q_values[gi]
        for y in buckets.get((want_o, want_q), ()):
            ok = True
            for prev_level in range(level):
                pj = gen_idx[prev_level]
                if b.b_of(assignment[pj], y) != a.b_values[pj][gi]:
                    ok = False
                    break
            if not ok:
                continue
            grown = extend_subgroup(subgroup, y, want_o)
            if len(grown) != size * want_o:
                continue
            assignment[gi] = y
            if backtrack(level + 1, grown, size * want_o):
                return True
            assignment[gi] = None
        return False

    if not backtrack(0, {zero}, 1):
        return None
    return tuple(assignment)
