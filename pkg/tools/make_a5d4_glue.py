#!/usr/bin/env python3
"""Derive the glue data for the A5^4+D4 Niemeier lattice.

The discriminant group of the root lattice is (Z/6)^4 x (Z/2)^2, order 5184,
and the glue group is a totally isotropic subgroup of order 72 = sqrt(5184).
The order-8 diagram permutation

    (1,6,11,16,5,10,15,20)(2,7,12,17,4,9,14,19)(3,8,13,18)(23,24)

cycles the four A5 components with a chain reversal on the wrap-around and
swaps two D4 leaves.  We enumerate the isotropic subgroups of order 72 that
are stable under the induced discriminant action and contain the class of
(w1+w3)/2, verify the overlattice is unimodular with root type exactly
A5^4+D4, and freeze a canonical generating set.
"""

import json
import sys
from fractions import Fraction
from itertools import product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from lattice_forge.definite import root_sublattice_type
from lattice_forge.exactla import (
    determinant,
    frac_mat_int,
    hermite_normal_form,
    inverse_rational,
    mat_mul,
    transpose,
)
from lattice_forge.lattice import Lattice, direct_sum, is_even, root_lattice

DATA = Path(__file__).resolve().parent.parent / "src" / "lattice_forge" / "data"

SIGMA = [5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19,
         4, 3, 2, 1, 0, 20, 21, 23, 22]  # 0-indexed images of the 24 roots


def base_lattice():
    comps = [root_lattice("A", 5, scale=-1) for _ in range(4)]
    comps.append(root_lattice("D", 4, scale=-1))
    return direct_sum(*comps)


def tuple_to_vector(t, gens):
    x1, x2, x3, x4, d2, d3 = t
    coeffs = (x1, x2, x3, x4, d2, d3)
    vec = [Fraction(0)] * 24
    for c, g in zip(coeffs, gens):
        if c:
            vec = [v + c * x for v, x in zip(vec, g)]
    return vec


def q_of(vec, gram):
    vg = [sum(v * g for v, g in zip(vec, col)) for col in zip(*gram)]
    val = sum(a * b for a, b in zip(vg, vec))
    return val % 2


def main():
    lat = base_lattice()
    gram = [[Fraction(x) for x in row] for row in lat.gram]
    ginv = inverse_rational(lat.gram)

    # generator vectors: first fundamental weight of each A5, the duals of
    # the last two D4 leaves
    gens = []
    for i in range(4):
        gens.append([ginv[5 * i][j] for j in range(24)])
    gens.append([ginv[22][j] for j in range(24)])
    gens.append([ginv[23][j] for j in range(24)])

    # sanity: the permutation is an isometry of the root Gramian
    for i in range(24):
        for j in range(24):
            assert lat.gram[SIGMA[i]][SIGMA[j]] == lat.gram[i][j]

    # induced map on (x1,x2,x3,x4,d2,d3) coordinates, verified from scratch
    def expected_image(t):
        x1, x2, x3, x4, d2, d3 = t
        return ((-x4) % 6, x1, x2, x3, d3, d2)

    perm_rows = [[1 if j == SIGMA[i] else 0 for j in range(24)] for i in range(24)]
    for k, t in enumerate([(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0),
                           (0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 0, 0),
                           (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)]):
        vec = tuple_to_vector(t, gens)
        moved = [sum(v * Fraction(perm_rows[i][j]) for i, v in enumerate(vec))
                 for j in range(24)]
        img = tuple_to_vector(expected_image(t), gens)
        diff = [a - b for a, b in zip(moved, img)]
        assert all(d.denominator == 1 for d in diff), (k, diff)
    print("induced discriminant action matches (-x4, x1, x2, x3, d3, d2)")

    # q tables
    q6 = [(Fraction(-5, 6) * x * x) % 2 for x in range(6)]
    qd = {}
    for d2, d3 in product(range(2), repeat=2):
        vec = tuple_to_vector((0, 0, 0, 0, d2, d3), gens)
        qd[(d2, d3)] = q_of(vec, gram)
    elements = []
    for t in product(range(6), range(6), range(6), range(6), range(2), range(2)):
        qv = (q6[t[0]] + q6[t[1]] + q6[t[2]] + q6[t[3]] + qd[(t[4], t[5])]) % 2
        if qv == 0:
            elements.append(t)
    print("isotropic elements:", len(elements))

    def add(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, (6, 6, 6, 6, 2, 2)))

    def orbit(t):
        out = [t]
        cur = expected_image(t)
        while cur != t:
            out.append(cur)
            cur = expected_image(cur)
        return out

    def close(gens_list):
        group = {(0, 0, 0, 0, 0, 0)}
        frontier = list(group)
        for g in gens_list:
            for go in orbit(g):
                if go not in group:
                    new = {add(go, h) for h in group}
                    # closure under addition
                    while True:
                        fresh = set()
                        for a in new:
                            if a not in group:
                                group.add(a)
                                fresh.add(a)
                        if not fresh:
                            break
                        new = {add(a, b) for a in fresh for b in group}
        return group

    iso = set(elements)
    results = set()
    seen = set()

    def extend(group, pool):
        key = frozenset(group)
        if key in seen:
            return
        seen.add(key)
        if len(group) == 72:
            results.add(key)
            return
        for t in pool:
            if t in group:
                continue
            cand = close([t] + [g for g in group])
            if len(cand) > 72 or 72 % len(cand):
                continue
            if not cand <= iso:
                continue
            extend(cand, [p for p in pool if p > t])
        return

    # seed the search from sigma-orbit closures of single isotropic elements
    singles = []
    for t in sorted(iso):
        if t == (0, 0, 0, 0, 0, 0):
            continue
        g = close([t])
        if len(g) <= 72 and 72 % len(g) == 0 and g <= iso:
            singles.append(t)
    print("usable seed elements:", len(singles))
    extend({(0, 0, 0, 0, 0, 0)}, singles)
    print("sigma-stable isotropic subgroups of order 72:", len(results))
    assert results

    # class of (w1+w3)/2: half the sum of roots 0,2,4 in each A5 component
    half = [Fraction(0)] * 24
    for i in range(4):
        for p in (0, 2, 4):
            half[5 * i + p] = Fraction(1, 2)
    target = None
    for t in product(range(6), range(6), range(6), range(6), range(2), range(2)):
        vec = tuple_to_vector(t, gens)
        diff = [a - b for a, b in zip(half, vec)]
        if all(d.denominator == 1 for d in diff):
            target = t
            break
    print("class of (w1+w3)/2:", target)
    assert target is not None

    keep = sorted(g for g in results if target in g)
    print("subgroups containing the (w1+w3)/2 class:", len(keep))

    final = []
    for group in keep:
        rows = [[Fraction(1) if i == j else Fraction(0) for j in range(24)]
                for i in range(24)]
        for t in sorted(group):
            rows.append(tuple_to_vector(t, gens))
        den = 1
        for row in rows:
            for f in row:
                den = den * f.denominator // __import__("math").gcd(den, f.denominator)
        int_rows = [[int(f * den) for f in row] for row in rows]
        h, _ = hermite_normal_form(int_rows)
        basis = [[Fraction(x, den) for x in row] for row in h if any(row)]
        assert len(basis) == 24
        new_gram = mat_mul(mat_mul(basis, gram), transpose(basis))
        new_gram = frac_mat_int(new_gram)
        over = Lattice(new_gram)
        d = determinant(new_gram)
        if abs(d) != 1:
            continue
        if not is_even(over):
            continue
        rt = root_sublattice_type(over)
        if rt.label() != "A5^4 + D4":
            continue
        final.append((sorted(group), group))
    print("subgroups giving unimodular overlattice with exact root type:",
          len(final))
    assert final

    final.sort(key=lambda x: x[0])
    chosen = final[0][1]

    # small generating set under addition alone (no orbit closure: the
    # shipped rows must span the glue group as lattice vectors)
    def plain_close(gens_list):
        group = {(0, 0, 0, 0, 0, 0)}
        while True:
            new = {add(a, b) for a in group for b in group} | \
                  {add(a, g) for a in group for g in gens_list}
            if new <= group:
                return group
            group |= new

    gen_set = []
    current = {(0, 0, 0, 0, 0, 0)}
    for t in sorted(chosen):
        if t in current:
            continue
        gen_set.append(t)
        current = plain_close(gen_set)
        if len(current) == 72:
            break
    assert len(plain_close(gen_set)) == 72
    print("generators:", gen_set)

    rows = []
    for t in gen_set:
        vec = tuple_to_vector(t, gens)
        rows.append([str(f) for f in vec])
    DATA.mkdir(parents=True, exist_ok=True)
    with open(DATA / "glue_a5_4_d4.json", "w") as fh:
        json.dump({"root_type": "A5^4 + D4", "glue": rows}, fh, indent=1)
    print("wrote", DATA / "glue_a5_4_d4.json")


if __name__ == "__main__":
    main()
