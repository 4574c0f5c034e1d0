"""Overlattice glueing, primitive-embedding tests, and genus-condition checks.

A glue map is an anti-isometry between discriminant forms; its graph inside
A(L1) + A(L2) defines an even overlattice of L1 + L2.  The condition checkers
evaluate the standard sufficient criteria for uniqueness-in-genus and for
surjectivity of O(L) -> O(q(L)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .discforms import (
    FiniteQuadraticForm,
    discriminant_form,
    discriminant_form_generators,
    block_decomposition,
    negate,
    p_primary_part,
    are_isomorphic,
)
from .exactla import (
    hermite_normal_form,
    inverse_rational,
    mat_mul,
    solve_integer_row,
    transpose,
    vec_mat,
)
from .lattice import (
    Lattice,
    Signature,
    discriminant,
    discriminant_group,
    is_degenerate,
    is_even,
    orthogonal_complement,
    signature,
    sublattice_gram,
)

__all__ = [
    "GlueMap",
    "GlueResult",
    "NikulinReport",
    "validate_glue_map",
    "glue",
    "induced_glue_map",
    "min_generators",
    "length_inequality",
    "embedding_exists",
    "nikulin_uniqueness_check",
    "nikulin_surjectivity_check",
]


@dataclass(frozen=True)
class GlueMap:
    """Generator images of an anti-isometry q(L1) -> -q(L2).

    images[i] lists coefficients over the target's generators for the image
    of source generator i.
    """

    source: FiniteQuadraticForm
    target: FiniteQuadraticForm
    images: tuple

    def image_of(self, coeffs):
        out = [0] * len(self.target.orders)
        for c, row in zip(coeffs, self.images):
            for j, x in enumerate(row):
                out[j] = (out[j] + c * x) % self.target.orders[j]
        return tuple(out)


def validate_glue_map(gmap):
    """Raise if the map is not a well-defined anti-isometry of forms."""
    src, tgt = gmap.source, gmap.target
    if len(gmap.images) != len(src.orders):
        raise ValueError("one image row per source generator required")
    if src.order != tgt.order:
        raise ValueError("groups have different orders")
    gens = []
    for i, row in enumerate(gmap.images):
        if len(row) != len(tgt.orders):
            raise ValueError(f"image row {i} has wrong length")
        img = tuple(x % o for x, o in zip(row, tgt.orders))
        src_gen = tuple(1 if j == i else 0 for j in range(len(src.orders)))
        if src.orders[i] % tgt.element_order(img) != 0:
            raise ValueError(f"generator {i}: image order does not divide source order")
        dq = (tgt.q_of(img) + src.q_of(src_gen)) % 2
        if dq != 0:
            raise ValueError(f"generator {i}: quadratic values are not opposite")
        gens.append(img)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            si = tuple(1 if k == i else 0 for k in range(len(src.orders)))
            sj = tuple(1 if k == j else 0 for k in range(len(src.orders)))
            if (tgt.b_of(gens[i], gens[j]) + src.b_of(si, sj)) % 1 != 0:
                raise ValueError(
                    f"generators {i},{j}: bilinear values are not opposite"
                )
    # bijectivity: the images must generate the whole target group
    reached = {tuple(0 for _ in tgt.orders)}
    for g in gens:
        span = list(reached)
        order = tgt.element_order(g) if any(g) else 1
        for k in range(1, order):
            for base in span:
                reached.add(tuple((a + b * k) % o
                                  for a, b, o in zip(base, g, tgt.orders)))
    if len(reached) != tgt.order:
        raise ValueError("images do not generate the target group")


@dataclass(frozen=True)
class GlueResult:
    lattice: Lattice
    basis: tuple  # rows, rational coordinates in the L1 + L2 basis


def glue(l1, l2, gmap):
    """Even overlattice of L1 + L2 whose glue group is the graph of gmap."""
    validate_glue_map(gmap)
    gens1 = discriminant_form_generators(l1)
    gens2 = discriminant_form_generators(l2)
    if gmap.source != discriminant_form(l1):
        raise ValueError("glue map source does not match q(L1)")
    if gmap.target != discriminant_form(l2):
        raise ValueError("glue map target does not match q(L2)")
    n1, n2 = l1.rank, l2.rank
    n = n1 + n2
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i, (_, coords) in enumerate(gens1):
        img = gmap.image_of(tuple(1 if k == i else 0
                                  for k in range(len(gens1))))
        tail = [Fraction(0)] * n2
        for c, (_, gen) in zip(img, gens2):
            for j, x in enumerate(gen):
                tail[j] += c * x
        rows.append([Fraction(x) for x in coords] + tail)
    den = lcm(*[f.denominator for row in rows for f in row])
    int_rows = [[int(f * den) for f in row] for row in rows]
    h, _ = hermite_normal_form(int_rows)
    basis = [tuple(Fraction(x, den) for x in row)
             for row in h if any(x != 0 for x in row)]
    if len(basis) != n:
        raise ValueError("glue rows do not span the ambient space")
    big = [[0] * n for _ in range(n)]
    for i in range(n1):
        for j in range(n1):
            big[i][j] = l1.gram[i][j]
    for i in range(n2):
        for j in range(n2):
            big[n1 + i][n1 + j] = l2.gram[i][j]
    bg = mat_mul([list(r) for r in basis], big)
    gram_frac = mat_mul(bg, transpose([list(r) for r in basis]))
    gram = []
    for row in gram_frac:
        out = []
        for x in row:
            f = Fraction(x)
            if f.denominator != 1:
                raise ValueError("glued pairing is not integral")
            out.append(f.numerator)
        gram.append(out)
    glued = Lattice(gram)
    if not is_even(glued):
        raise ValueError("glued lattice is not even")
    size1 = size2 = 1
    for o, _ in gens1:
        size1 *= o
    for o, _ in gens2:
        size2 *= o
    index_sq = abs(discriminant(l1) * discriminant(l2)) // abs(discriminant(glued))
    if index_sq != size1 * size2:
        raise ValueError("glue index does not square to |A(L1)|*|A(L2)|")
    return GlueResult(glued, tuple(basis))


def induced_glue_map(ambient, sub_basis):
    """Glue map carried by a primitive sublattice of an even unimodular
    lattice; returns (gmap, complement_basis)."""
    if abs(discriminant(ambient)) != 1:
        raise ValueError("ambient lattice must be unimodular")
    comp_basis, comp = orthogonal_complement(ambient, sub_basis)
    sub = Lattice(sublattice_gram(ambient, sub_basis))
    q_sub = discriminant_form(sub)
    q_comp = discriminant_form(comp)
    gens_sub = discriminant_form_generators(sub)
    gens_comp = discriminant_form_generators(comp)
    ns, nc = len(sub_basis), len(comp_basis)
    n = ambient.rank
    if ns + nc != n:
        raise ValueError("sublattice must be nondegenerate in the ambient")
    stack = [list(r) for r in sub_basis] + [list(r) for r in comp_basis]
    minv = inverse_rational(stack)
    # columns of minv: coordinates over the sub part, then the complement part
    proj_sub = [[minv[r][c] for c in range(ns)] for r in range(n)]
    proj_comp = [[minv[r][c] for c in range(ns, n)] for r in range(n)]
    images = []
    for _, coords in gens_sub:
        # find g in the ambient lattice whose sub-projection hits this dual
        # vector modulo the sublattice itself
        den = lcm(*[f.denominator for row in proj_sub for f in row],
                  *[Fraction(c).denominator for c in coords])
        m_int = [[int(f * den) for f in row] for row in proj_sub]
        m_int += [[den * int(i == j) for j in range(ns)] for i in range(ns)]
        rhs = [int(Fraction(c) * den) for c in coords]
        sol = solve_integer_row(m_int, rhs)
        if sol is None:
            raise ValueError("sublattice does not surject onto its discriminant group")
        g = sol[:n]
        tail = vec_mat(g, proj_comp)
        images.append(_express_over_generators(tail, gens_comp))
    gmap = GlueMap(q_sub, q_comp, tuple(images))
    validate_glue_map(gmap)
    return gmap, comp_basis


def _express_over_generators(vec, gens):
    """Coefficients over the (order, coords) generator list for a dual vector."""
    k = len(gens)
    n = len(vec)
    if k == 0:
        return ()
    gen_rows = [[Fraction(x) for x in coords] for _, coords in gens]
    den = lcm(*[f.denominator for row in gen_rows for f in row],
              *[Fraction(x).denominator for x in vec])
    m = [[int(f * den) for f in row] for row in gen_rows]
    m += [[den * int(i == j) for j in range(n)] for i in range(n)]
    rhs = [int(Fraction(x) * den) for x in vec]
    sol = solve_integer_row(m, rhs)
    if sol is None:
        raise ValueError("vector does not lie in the discriminant group")
    return tuple(c % o for c, (o, _) in zip(sol[:k], gens))


def min_generators(lat):
    """l(A(L)): minimal number of generators of the discriminant group."""
    return len(discriminant_group(lat).orders)


def length_inequality(lat, c):
    """Does l(A) fit under 22 - c, the embedding bound for coinvariant rank c."""
    return min_generators(lat) <= 22 - c


def embedding_exists(s, target_signature, candidate=None):
    """Primitive embedding of s into an even unimodular lattice of the given
    signature: verdict plus complement data.

    Decides by the generator-count inequality; in the tight range it only
    confirms constructively against a supplied candidate complement.
    """
    if isinstance(target_signature, Signature):
        tp, tm = target_signature.plus, target_signature.minus
    else:
        tp, tm = target_signature
    sig = signature(s)
    cp, cm = tp - sig.plus, tm - sig.minus
    info = {"complement_signature": (cp, cm)}
    if cp < 0 or cm < 0:
        info["clause"] = "signature does not fit"
        return False, info
    if (tp - tm) % 8 != 0:
        info["clause"] = "no even unimodular lattice has that signature"
        return False, info
    la = min_generators(s)
    rank_c = cp + cm
    info["complement_min_generators"] = la
    if la > rank_c:
        info["clause"] = "discriminant group needs more generators than the complement rank"
        return False, info
    if candidate is not None:
        cand_sig = signature(candidate)
        ok = (
            (cand_sig.plus, cand_sig.minus) == (cp, cm)
            and is_even(candidate)
            and are_isomorphic(discriminant_form(candidate),
                               negate(discriminant_form(s)))
        )
        info["clause"] = "candidate complement verified" if ok else "candidate rejected"
        return ok, info
    if la == 0:
        info["clause"] = "unimodular complement"
        return True, info
    if rank_c >= la + 2 and cp >= 1 and cm >= 1:
        info["clause"] = "rank slack"
        return True, info
    info["clause"] = "tight bound, no candidate supplied"
    return False, info


@dataclass(frozen=True)
class NikulinReport:
    verdict: bool
    mode: str
    rank_ok: bool
    indefinite_ok: bool
    even_ok: bool
    primes: tuple  # pairs (p, clause), clause "fail" when unsatisfied

    def clause(self, p):
        for q, c in self.primes:
            if q == p:
                return c
        return "slack"


def _p_length(orders, p):
    return sum(1 for o in orders if o % p == 0)


def _even_pair_kinds(form2, k):
    """Which of the two even binary blocks at scale 2^k split off, found by
    direct search for a generating pair."""
    target = 2 ** k
    half = 2 ** (k - 1)
    qs = {}
    for x in form2.elements():
        if form2.element_order(x) != target:
            continue
        a = form2.q_of(x) * half
        if a.denominator == 1:
            qs[x] = a.numerator  # q(x) = 2a / 2^k
    cands = list(qs)
    kinds = set()
    for i, x in enumerate(cands):
        for y in cands[i + 1:]:
            b = Fraction(form2.b_of(x, y)) % 1
            if b.denominator != target:
                continue
            # b = c / 2^k with c a unit; det of [[2a, c], [c, 2a']] mod 8
            # sorts the pair into the hyperbolic or the non-split even block
            det = (4 * qs[x] * qs[y] - b.numerator * b.numerator) % 8
            if det == 7:
                kinds.add("u")
            elif det == 3:
                kinds.add("v")
            if len(kinds) == 2:
                return kinds
    return kinds


def _two_adic_alternative(lat, blocks, scales_needed, allow_triple):
    """Clause-(2) block patterns: u/v presence (semantic) or the odd triple."""
    for k, mult in blocks.even_u + blocks.even_v:
        if scales_needed is None or k in scales_needed:
            return "uv"
    if allow_triple:
        odd_mults = {}
        for k, eps, mult in blocks.odd_2:
            odd_mults[k] = odd_mults.get(k, 0) + mult
        for k, m in odd_mults.items():
            if m >= 3:
                return "triple"
            if m >= 2:
                for k2, m2 in odd_mults.items():
                    if k2 != k and abs(k2 - k) <= 1 and m2 >= 1:
                        return "triple"
    form2 = p_primary_part(discriminant_form(lat), 2)
    if form2.order > 1:
        search_scales = scales_needed
        if search_scales is None:
            search_scales = sorted({k for k, _, _ in blocks.odd_2}
                                   | {k for k, _ in blocks.even_u}
                                   | {k for k, _ in blocks.even_v})
        for k in search_scales:
            if _even_pair_kinds(form2, k):
                return "uv-semantic"
    return None


def _nikulin_common(lat, mode):
    rank_ok = lat.rank >= 3
    nondeg = not is_degenerate(lat)
    even_ok = is_even(lat)
    indef = False
    if nondeg:
        sig = signature(lat)
        indef = sig.plus > 0 and sig.minus > 0
    if not (rank_ok and nondeg and even_ok and indef):
        return NikulinReport(False, mode, rank_ok, indef and nondeg, even_ok, ())
    orders = discriminant_group(lat).orders
    primes = sorted({p for o in orders for p in _prime_factors(o)})
    flags = []
    ok = True
    blocks = block_decomposition(lat)
    for p in primes:
        if p == 2:
            continue
        if lat.rank >= _p_length(orders, p) + 2:
            flags.append((p, "slack"))
            continue
        if mode == "uniqueness":
            scale_mult = {}
            for (q, k, _sign, mult) in blocks.odd_p:
                if q == p:
                    scale_mult[k] = scale_mult.get(k, 0) + mult
            if any(m >= 2 for m in scale_mult.values()):
                flags.append((p, "repeat"))
                continue
        flags.append((p, "fail"))
        ok = False
    if lat.rank >= _p_length(orders, 2) + 2:
        flags.append((2, "slack"))
    else:
        if mode == "uniqueness":
            alt = _two_adic_alternative(lat, blocks, None, True)
        else:
            alt = _two_adic_alternative(lat, blocks, (1,), False)
        if alt:
            flags.append((2, alt))
        else:
            flags.append((2, "fail"))
            ok = False
    return NikulinReport(ok, mode, True, True, True, tuple(flags))


def _prime_factors(n):
    n = abs(n)
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


def nikulin_uniqueness_check(lat):
    """Sufficient conditions for a unique class in the genus."""
    return _nikulin_common(lat, "uniqueness")


def nikulin_surjectivity_check(lat):
    """Sufficient conditions for O(L) -> O(q(L)) to be onto."""
    return _nikulin_common(lat, "surjectivity")
