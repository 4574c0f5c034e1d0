"""Finite groups of lattice isometries: fixed and moved parts, trace bookkeeping,
and the symplectic-action predicate.

Actions use the row convention x -> x*m.  Permutation-built actions keep the
root permutation next to the matrix so that element orders and traces come
from cycle structure instead of matrix powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .definite import short_vectors
from .exactla import (
    frac_mat_int,
    inverse_rational,
    mat_mul,
    solve_integer_row,
    transpose,
)
from .lattice import (
    Lattice,
    discriminant,
    discriminant_group,
    invariant_sublattice,
    is_degenerate,
    is_even,
    orthogonal_complement,
    signature,
    sublattice_gram,
)

__all__ = [
    "CHI_BY_ORDER",
    "ELEMENT_CAP",
    "GroupAction",
    "ActionReport",
    "TraceRow",
    "make_action",
    "group_elements",
    "invariant_lattice",
    "coinvariant_lattice",
    "c_of_action",
    "trace_check",
    "is_symplectic_action",
    "action_report",
    "permutation_from_cycles",
    "permutation_action_on_niemeier",
    "induced_action_on_discriminant",
    "preserves_positive_roots",
]

# fixed-point counts on 24 points by element order; the source of c(G)
CHI_BY_ORDER = {1: 24, 2: 8, 3: 6, 4: 4, 5: 4, 6: 2, 7: 3, 8: 2}

ELEMENT_CAP = 10 ** 5


@dataclass(frozen=True)
class GroupAction:
    lattice: Lattice
    generators: tuple  # square integer matrices, rows = images of basis vectors
    permutations: tuple = None  # optional root permutations mirroring generators


def make_action(lattice, generators, permutations=None):
    """Validated GroupAction; every generator must be an integral isometry."""
    n = lattice.rank
    gens = []
    for idx, g in enumerate(generators):
        rows = tuple(tuple(_as_int(x) for x in row) for row in g)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"generator {idx} is not {n}x{n}")
        gg = mat_mul(mat_mul([list(r) for r in rows], lattice.gram),
                     transpose([list(r) for r in rows]))
        if gg != lattice.gram:
            raise ValueError(f"generator {idx} does not preserve the Gramian")
        gens.append(rows)
    perms = None
    if permutations is not None:
        perms = tuple(tuple(p) for p in permutations)
        if len(perms) != len(gens):
            raise ValueError("one permutation per generator required")
    return GroupAction(lattice, tuple(gens), perms)


def _as_int(x):
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError(f"matrix entry {x} is not an integer")
    return f.numerator


def _mat_tuple_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _closure(gens, mul, one, cap):
    """Multiplicative closure by breadth-first products."""
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise ValueError(
                            f"group exceeds the element cap ({cap})")
                    nxt.append(y)
        frontier = nxt
    return seen


def group_elements(a, cap=ELEMENT_CAP):
    """All elements of the generated group, as matrices."""
    n = a.lattice.rank
    one = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return _closure(a.generators, _mat_tuple_mul, one, cap)


def _perm_order_and_fixed(p):
    n = len(p)
    seen = [False] * n
    order = 1
    fixed = 0
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length == 1:
            fixed += 1
        order = order * length // _gcd(order, length)
    return order, fixed


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _element_stats(a, cap=ELEMENT_CAP):
    """(order, trace) for every group element.

    Permutation-backed actions get traces from fixed-point counts: the matrix
    is conjugate to the permutation matrix on the root basis.
    """
    if a.permutations is not None:
        n = len(a.permutations[0]) if a.permutations else 0
        one = tuple(range(n))
        elems = _closure(
            a.permutations,
            lambda p, q: tuple(q[p[i]] for i in range(n)),
            one,
            cap,
        )
        return [_perm_order_and_fixed(p) for p in elems]
    stats = []
    for m in group_elements(a, cap):
        stats.append((_matrix_order(m, cap), sum(m[i][i] for i in range(len(m)))))
    return stats


def _matrix_order(m, cap):
    n = len(m)
    one = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    power = m
    order = 1
    while power != one:
        power = _mat_tuple_mul(power, m)
        order += 1
        if order > cap:
            raise ValueError("element order exceeds the cap")
    return order


def invariant_lattice(a):
    """Saturated simultaneous fixed sublattice with its Gramian."""
    return invariant_sublattice(a.lattice, a.generators)


def coinvariant_lattice(a):
    """Orthogonal complement of the fixed sublattice."""
    inv_basis, _ = invariant_lattice(a)
    return orthogonal_complement(a.lattice, inv_basis)


def c_of_action(a):
    """24 minus the average fixed-point count; None when an element order
    falls outside the chi table."""
    stats = _element_stats(a)
    if any(order not in CHI_BY_ORDER for order, _ in stats):
        return None
    total = sum(CHI_BY_ORDER[order] for order, _ in stats)
    c = Fraction(24) - Fraction(total, len(stats))
    if c.denominator != 1:
        raise ValueError("chi sum is not divisible by the group order")
    return int(c)


@dataclass(frozen=True)
class TraceRow:
    order: int
    trace: int
    expected: int  # chi(order) - 2, None when the order is out of table
    ok: bool  # None when flagged


def trace_check(a):
    """Per-element comparison of the trace against chi(order) - 2."""
    rows = []
    for order, trace in _element_stats(a):
        if order in CHI_BY_ORDER:
            expected = CHI_BY_ORDER[order] - 2
            rows.append(TraceRow(order, trace, expected, trace == expected))
        else:
            rows.append(TraceRow(order, trace, None, None))
    return rows


def is_symplectic_action(a):
    """Nontrivial action whose moved part is negative definite and rootless.

    Requires the ambient to be even unimodular of signature (3, 19)."""
    amb = a.lattice
    sig = signature(amb)
    if (
        not is_even(amb)
        or abs(discriminant(amb)) != 1
        or (sig.plus, sig.minus) != (3, 19)
    ):
        raise ValueError("ambient must be even unimodular of signature (3, 19)")
    n = amb.rank
    one = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    if all(g == one for g in a.generators):
        return False
    _, coinv = coinvariant_lattice(a)
    if coinv.rank == 0 or is_degenerate(coinv):
        return False
    csig = signature(coinv)
    if csig.plus != 0:
        return False
    return not short_vectors(coinv, 2).vectors_of_norm(-2)


@dataclass(frozen=True)
class ActionReport:
    invariant_basis: tuple
    invariant_gram: tuple
    coinvariant_basis: tuple
    coinvariant_gram: tuple
    c: int
    symplectic: bool
    trace_table: tuple


def action_report(a):
    inv_basis, inv = invariant_lattice(a)
    co_basis, co = coinvariant_lattice(a)
    try:
        symplectic = is_symplectic_action(a)
    except ValueError:
        symplectic = False
    return ActionReport(
        tuple(tuple(r) for r in inv_basis),
        tuple(tuple(r) for r in inv.gram),
        tuple(tuple(r) for r in co_basis),
        tuple(tuple(r) for r in co.gram),
        c_of_action(a),
        symplectic,
        tuple(trace_check(a)),
    )


def permutation_from_cycles(cycles, n, one_indexed=True):
    """Image tuple for a product of disjoint cycles."""
    p = list(range(n))
    off = 1 if one_indexed else 0
    seen = set()
    for cycle in cycles:
        for idx in cycle:
            if idx - off in seen:
                raise ValueError("cycles are not disjoint")
            seen.add(idx - off)
        for i, idx in enumerate(cycle):
            p[idx - off] = cycle[(i + 1) % len(cycle)] - off
    return tuple(p)


def permutation_action_on_niemeier(niem, sigma):
    """Lattice action of a permutation of the simple roots.

    niem provides .lattice and .root_rows (simple-root coordinates, one row
    each, in the lattice basis).  The permutation must preserve root pairings
    and carry the lattice into itself (equivalently, preserve the glue group).
    """
    lat = niem.lattice
    roots = [list(r) for r in niem.root_rows]
    n = len(roots)
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"permutation must move {n} roots bijectively")
    gram_rr = mat_mul(mat_mul(roots, lat.gram), transpose(roots))
    for i in range(n):
        for j in range(n):
            if gram_rr[sigma[i]][sigma[j]] != gram_rr[i][j]:
                raise ValueError(
                    f"roots {i} and {j}: pairing not preserved, "
                    "permutation breaks the diagram"
                )
    rinv = inverse_rational(roots)
    # rows of m: image of lattice-basis vector e_i; roots[i] * m = roots[sigma[i]]
    m_frac = mat_mul(rinv, [list(r) for r in _reorder(roots, sigma)])
    try:
        m = frac_mat_int(m_frac)
    except ValueError:
        raise ValueError("permutation does not preserve the glue group")
    return make_action(lat, (m,), permutations=(sigma,))


def _reorder(roots, sigma):
    """Row i becomes the sigma(i)-th root."""
    return [roots[sigma[i]] for i in range(len(roots))]


def induced_action_on_discriminant(a, sub_basis):
    """Do all generators act trivially on the discriminant group of the
    given primitive stable sublattice?  Computed, not assumed."""
    lat = a.lattice
    sub_rows = [list(r) for r in sub_basis]
    restrictions = []
    for g in a.generators:
        glist = [list(r) for r in g]
        restricted = []
        for row in sub_rows:
            moved = [sum(row[i] * glist[i][j] for i in range(lat.rank))
                     for j in range(lat.rank)]
            coeffs = solve_integer_row(sub_rows, moved)
            if coeffs is None:
                raise ValueError("sublattice is not stable under the action")
            restricted.append(coeffs)
        restrictions.append(restricted)
    sub = Lattice(sublattice_gram(lat, sub_rows))
    dg = discriminant_group(sub)
    for restricted in restrictions:
        for coords in dg.generator_coords:
            moved = [sum(Fraction(coords[i]) * restricted[i][j]
                         for i in range(len(sub_rows)))
                     for j in range(len(sub_rows))]
            if any((m - c).denominator != 1 for m, c in zip(moved, coords)):
                return False
    return True


def preserves_positive_roots(niem, matrix):
    """Is the set of positive roots over niem.root_rows stable under the
    isometry?  Diagnostic for picking compatible Weyl chambers."""
    lat = niem.lattice
    roots = [list(r) for r in niem.root_rows]
    rinv = inverse_rational(roots)
    svl = short_vectors(lat, 2)
    norm = -2 if signature(lat).plus == 0 else 2
    positives = set()
    for v in svl.with_signs(norm):
        coeffs = [sum(Fraction(v[i]) * rinv[i][j] for i in range(len(v)))
                  for j in range(len(v))]
        if all(c >= 0 for c in coeffs):
            positives.add(tuple(v))
    mm = [list(r) for r in matrix]
    for v in positives:
        image = tuple(sum(v[i] * mm[i][j] for i in range(len(v)))
                      for j in range(len(v)))
        if image not in positives:
            return False
    return True
