"""Enumeration on definite lattices: short vectors, root systems, isometries.

Negative definite input is flipped to positive definite internally; reported
norms keep the original sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice import Lattice, discriminant, discriminant_group, is_degenerate, signature

__all__ = [
    "ShortVectorList",
    "RootType",
    "IsometryGroup",
    "definiteness",
    "short_vectors",
    "root_sublattice_type",
    "isometry_group",
    "are_isometric",
    "O0_subgroup",
    "acts_trivially_on_discriminant",
]

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def definiteness(lat):
    """+1 positive definite, -1 negative definite; error otherwise."""
    if lat.rank == 0:
        raise ValueError("empty lattice has no sign")
    if is_degenerate(lat):
        raise ValueError("form is degenerate")
    sig = signature(lat)
    if sig.plus == lat.rank:
        return 1
    if sig.minus == lat.rank:
        return -1
    raise ValueError("form is indefinite")


def _positive_gram(lat):
    sign = definiteness(lat)
    if sign > 0:
        return [list(row) for row in lat.gram], 1
    return [[-x for x in row] for row in lat.gram], -1


def _ldl(gram):
    """gram = U^T diag(d) U with U unit upper triangular, all d > 0."""
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    d = []
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        di = m[i][i]
        if di <= 0:
            raise ValueError("form is not positive definite")
        d.append(di)
        u[i][i] = Fraction(1)
        for j in range(i + 1, n):
            u[i][j] = m[i][j] / di
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                m[r][c] -= di * u[i][r] * u[i][c]
    return d, u


class ShortVectorList:
    """Vectors of bounded norm, one of each +-pair, grouped by signed norm."""

    def __init__(self, norm_bound, by_norm):
        self.norm_bound = norm_bound
        self.by_norm = {n: tuple(sorted(vs)) for n, vs in by_norm.items() if vs}

    def vectors_of_norm(self, norm):
        return self.by_norm.get(norm, ())

    def with_signs(self, norm):
        out = []
        for v in self.vectors_of_norm(norm):
            out.append(v)
            out.append(tuple(-x for x in v))
        return out

    def pair_count(self, norm=None):
        if norm is None:
            return sum(len(v) for v in self.by_norm.values())
        return len(self.by_norm.get(norm, ()))


def short_vectors(lat, bound):
    """Every lattice vector with |norm| <= bound, up to sign, exactly."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    gram, sign = _positive_gram(lat)
    n = lat.rank
    d, u = _ldl(gram)
    found = {}
    coeff = [0] * n

    def record():
        v = tuple(coeff)
        norm = sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))
        if norm == 0 or norm > bound:
            return
        for x in v:
            if x > 0:
                break
            if x < 0:
                v = tuple(-y for y in v)
                break
        found.setdefault(sign * norm, []).append(v)

    def descend(i, remaining):
        if i < 0:
            record()
            return
        s = sum(u[i][j] * coeff[j] for j in range(i + 1, n))
        lim = remaining / d[i]
        r = math.sqrt(max(0.0, float(lim)))
        lo = math.ceil(-float(s) - r)
        hi = math.floor(-float(s) + r)
        while d[i] * (hi + 1 + s) ** 2 <= remaining:
            hi += 1
        while hi >= lo and d[i] * (hi + s) ** 2 > remaining:
            hi -= 1
        while d[i] * (lo - 1 + s) ** 2 <= remaining:
            lo -= 1
        while lo <= hi and d[i] * (lo + s) ** 2 > remaining:
            lo += 1
        for ci in range(lo, hi + 1):
            coeff[i] = ci
            descend(i - 1, remaining - d[i] * (ci + s) ** 2)
        coeff[i] = 0

    descend(n - 1, Fraction(bound))
    # drop the all-signs duplicate of each pair introduced at the top level
    dedup = {}
    for norm, vs in found.items():
        dedup[norm] = sorted(set(vs))
    return ShortVectorList(bound, dedup)


@dataclass(frozen=True)
class RootType:
    """Multiset of ADE components, e.g. (("A", 1), ("A", 1), ("D", 4))."""

    components: tuple

    @property
    def rank(self):
        return sum(n for _, n in self.components)

    def label(self):
        if not self.components:
            return "empty"
        out = []
        i = 0
        comps = list(self.components)
        while i < len(comps):
            j = i
            while j < len(comps) and comps[j] == comps[i]:
                j += 1
            kind, n = comps[i]
            mult = j - i
            out.append(f"{kind}{n}" + (f"^{mult}" if mult > 1 else ""))
            i = j
        return " + ".join(out)


def _component_shape(nodes, adj):
    m = len(nodes)
    degs = {x: len(adj[x]) for x in nodes}
    branch = [x for x in nodes if degs[x] >= 3]
    if not branch:
        ends = [x for x in nodes if degs[x] <= 1]
        if m == 1 or len(ends) == 2:
            return ("A", m)
        raise ValueError("root graph is not a simply laced diagram")
    if len(branch) > 1 or degs[branch[0]] > 3:
        raise ValueError("root graph is not a simply laced diagram")
    center = branch[0]
    arms = []
    for start in adj[center]:
        length = 1
        prev, cur = center, start
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                raise ValueError("root graph is not a simply laced diagram")
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", m)
    if arms[0] == 1 and arms[1] == 2 and m in (6, 7, 8):
        return ("E", m)
    raise ValueError("root graph is not a simply laced diagram")


def root_sublattice_type(lat):
    """ADE type of the sublattice spanned by the norm +-2 vectors."""
    gram, _ = _positive_gram(lat)
    n = lat.rank
    sign = definiteness(lat)
    pairs = short_vectors(lat, 2).vectors_of_norm(2 * sign)
    if not pairs:
        return RootType(())
    roots = []
    for v in pairs:
        roots.append(v)
        roots.append(tuple(-x for x in v))

    def value(func, v):
        return sum(f * x for f, x in zip(func, v))

    func = None
    for p in _PRIMES:
        delta = Fraction(1, p)
        cand = [1 + k * delta for k in range(n)]
        if all(value(cand, v) != 0 for v in roots):
            func = cand
            break
    if func is None:
        raise ValueError("no generic functional found")
    positive = {v for v in roots if value(func, v) > 0}
    simple = []
    for v in positive:
        if not any(tuple(a - b for a, b in zip(v, w)) in positive for w in positive):
            simple.append(v)
    simple.sort()
    adj = {v: [] for v in simple}
    for i, v in enumerate(simple):
        vg = [sum(v[a] * gram[a][b] for a in range(n)) for b in range(n)]
        for w in simple[i + 1:]:
            if sum(x * y for x, y in zip(vg, w)) != 0:
                adj[v].append(w)
                adj[w].append(v)
    seen = set()
    comps = []
    for v in simple:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(_component_shape(comp, adj))
    return RootType(tuple(sorted(comps)))


class IsometryGroup:
    """Finite matrix group preserving a Gramian, with its exact order."""

    def __init__(self, generators, order, elements=None):
        self.generators = [tuple(tuple(r) for r in g) for g in generators]
        self.order = order
        self._elements = elements

    def elements(self):
        if self._elements is None:
            raise ValueError("element list was not retained")
        return self._elements


def _backtrack_images(gram_a, gram_b_pos, cands, order_idx, collect_all, pair_cache):
    """Assign rows image[i] for i in order_idx with exact pairing constraints."""
    n = len(gram_a)
    solutions = []
    placed = []

    def pairing(w):
        if w not in pair_cache:
            pair_cache[w] = tuple(
                sum(w[a] * gram_b_pos[a][b] for a in range(n)) for b in range(n)
            )
        return pair_cache[w]

    def descend(k):
        if k == n:
            sol = [None] * n
            for idx, (i, v) in enumerate(zip(order_idx, placed)):
                sol[i] = v
            solutions.append(tuple(sol))
            return not collect_all
        i = order_idx[k]
        for v in cands[gram_a[i][i]]:
            vg = pairing(v)
            ok = True
            for j, w in zip(order_idx[:k], placed):
                if sum(x * y for x, y in zip(vg, w)) != gram_a[i][j]:
                    ok = False
                    break
            if ok:
                placed.append(v)
                if descend(k + 1):
                    return True
                placed.pop()
        return False

    descend(0)
    return solutions


def _flip(gram):
    return [[-x for x in row] for row in gram]


def _enumerate_isometries(lat_a, lat_b, collect_all, max_elements):
    """Images of lat_a's basis inside lat_b; both flipped positive definite."""
    sign_a = definiteness(lat_a)
    sign_b = definiteness(lat_b)
    if sign_a != sign_b or lat_a.rank != lat_b.rank:
        return []
    if discriminant(lat_a) != discriminant(lat_b):
        return []
    gram_a = [list(r) for r in lat_a.gram]
    gram_b = [list(r) for r in lat_b.gram]
    if sign_a < 0:
        gram_a, gram_b = _flip(gram_a), _flip(gram_b)
    n = lat_a.rank
    bound = max(max(gram_a[i][i] for i in range(n)), max(gram_b[i][i] for i in range(n)))
    svl_a = short_vectors(Lattice(gram_a), bound)
    svl_b = short_vectors(Lattice(gram_b), bound)
    for norm in range(1, bound + 1):
        if svl_a.pair_count(norm) != svl_b.pair_count(norm):
            return []
    cands = {}
    for i in range(n):
        norm = gram_a[i][i]
        if norm not in cands:
            cands[norm] = svl_b.with_signs(norm)
            if not cands[norm]:
                return []
    order_idx = sorted(range(n), key=lambda i: (len(cands[gram_a[i][i]]), i))
    sols = _backtrack_images(gram_a, gram_b, cands, order_idx, collect_all, {})
    if collect_all and len(sols) > max_elements:
        raise ValueError("group larger than the element cap")
    return sols


def isometry_group(lat, max_rank=8, max_elements=10 ** 6):
    """All self-isometries by exhaustive backtracking; generators plus order."""
    if lat.rank > max_rank:
        raise ValueError(
            f"rank {lat.rank} exceeds the cap {max_rank}; raise max_rank to override"
        )
    elements = _enumerate_isometries(lat, lat, True, max_elements)
    elements = sorted(elements)
    gens = _greedy_generators(elements)
    return IsometryGroup(gens, len(elements), tuple(elements))


def _greedy_generators(elements):
    if not elements:
        return []
    n = len(elements[0])
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    universe = set(elements)
    known = {ident}
    gens = []
    for e in elements:
        if e in known:
            continue
        gens.append(e)
        frontier = [e]
        known.add(e)
        while frontier:
            x = frontier.pop()
            for g in gens:
                for prod in (_tmul(x, g), _tmul(g, x)):
                    if prod not in known:
                        known.add(prod)
                        frontier.append(prod)
        if len(known) == len(universe):
            break
    return gens


def _tmul(a, b):
    n = len(a)
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def are_isometric(lat_a, lat_b, max_elements=10 ** 6):
    """Decide isometry of definite lattices; returns (verdict, witness rows)."""
    sols = _enumerate_isometries(lat_a, lat_b, False, max_elements)
    if not sols:
        return False, None
    return True, sols[0]


def acts_trivially_on_discriminant(lat, matrix):
    dg = discriminant_group(lat)
    for coords in dg.generator_coords:
        moved = [
            sum(Fraction(coords[i]) * matrix[i][j] for i in range(lat.rank))
            for j in range(lat.rank)
        ]
        for a, b in zip(moved, coords):
            if Fraction(a - b).denominator != 1:
                return False
    return True


def O0_subgroup(lat, max_rank=8, max_elements=10 ** 6):
    """Kernel of the map to the discriminant-form isometries."""
    full = isometry_group(lat, max_rank=max_rank, max_elements=max_elements)
    kept = [e for e in full.elements() if acts_trivially_on_discriminant(lat, e)]
    gens = _greedy_generators(kept)
    return IsometryGroup(gens, len(kept), tuple(kept))
