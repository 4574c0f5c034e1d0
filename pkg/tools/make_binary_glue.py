#!/usr/bin/env python3
"""Derive the glue data for the A1^24 Niemeier lattice.

Builds the extended quadratic-residue code of length 24 from a degree-11
factor of x^23 - 1 over F2, checks it is the [24,12,8] doubly even self-dual
code, relabels coordinates so that the order-8 diagram permutation

    (3,4)(5,6,7,8)(9,...,16)(17,...,24)        (1-indexed)

preserves the code, and writes the glue rows plus compatible generators of
the code's automorphism group (order 244823040) to the package data dir.
"""

import json
import random
from itertools import combinations
from pathlib import Path

from sympy import Poly, symbols
from sympy.combinatorics import Permutation, PermutationGroup

DATA = Path(__file__).resolve().parent.parent / "src" / "lattice_forge" / "data"

N = 23
INF = 23  # index of the extension coordinate


def vec_dot(a, b):
    return sum(x * y for x, y in zip(a, b)) % 2


def row_reduce(rows):
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [(x + y) % 2 for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return [row for row in rows[:r]], pivots


def build_extended_qr(gen_poly_coeffs):
    """Rows: cyclic shifts of the generator polynomial, parity bit at INF."""
    rows = []
    for shift in range(N - len(gen_poly_coeffs) + 1):
        row = [0] * (N + 1)
        for e, c in enumerate(gen_poly_coeffs):
            if c:
                row[(e + shift) % N] = 1
        row[INF] = sum(row) % 2
        rows.append(row)
    return rows


def code_span(rows):
    basis, _ = row_reduce(rows)
    words = {tuple([0] * (N + 1))}
    for b in basis:
        words |= {tuple((x + y) % 2 for x, y in zip(w, b)) for w in words}
    return basis, words


def in_code(vec, basis):
    # self-dual code: membership = orthogonality to every generator
    return all(vec_dot(vec, b) == 0 for b in basis)


def apply_perm(vec, perm):
    out = [0] * len(vec)
    for i, x in enumerate(vec):
        out[perm[i]] = x
    return out


def check_code(words):
    weights = {}
    for w in words:
        weights[sum(w)] = weights.get(sum(w), 0) + 1
    assert len(words) == 4096, len(words)
    assert all(wt % 4 == 0 for wt in weights), weights
    assert weights == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}, weights
    for a, b in combinations(list(words)[:64], 2):
        assert vec_dot(a, b) == 0


def main():
    random.seed(20240823)
    x = symbols("x")
    factors = Poly(x**N - 1, x, modulus=2).factor_list()[1]
    degree11 = [f for f, _ in factors if f.degree() == 11]
    assert len(degree11) == 2

    # the example involution from the classical PSL(2,23)+octad presentation
    h_pairs = [(INF, 0), (11, 1), (3, 19), (4, 20), (6, 15), (16, 14), (9, 5), (13, 21)]
    g_perm = [None] * (N + 1)
    for i in range(N):
        g_perm[i] = (i + 1) % N
    g_perm[INF] = INF
    h_perm = list(range(N + 1))
    for i, j in h_pairs:
        h_perm[i], h_perm[j] = h_perm[j], h_perm[i]

    basis = None
    for f in degree11:
        coeffs = list(reversed(f.all_coeffs()))  # coeff of x^0 first
        coeffs = [c % 2 for c in coeffs]
        rows = build_extended_qr(coeffs)
        cand, words = code_span(rows)
        assert len(cand) == 12
        check_code(words)
        ok_g = all(in_code(apply_perm(b, g_perm), cand) for b in cand)
        ok_h = all(in_code(apply_perm(b, h_perm), cand) for b in cand)
        print("factor", f, "shift-invariant", ok_g, "h-invariant", ok_h)
        if ok_g and ok_h:
            basis = cand
            break
    assert basis is not None, "no QR factor gives an h-invariant code"

    g = Permutation(g_perm)
    h = Permutation(h_perm)
    group = PermutationGroup([g, h])
    order = group.order()
    print("automorphism group order", order)
    assert order == 244823040

    # order-8 element with cycle shape 1^2 2 4 8^2
    target_shape = {1: 2, 2: 1, 4: 1, 8: 2}
    m = None
    while m is None:
        w = g
        for _ in range(random.randrange(4, 20)):
            w = w * (g if random.random() < 0.5 else h)
        for power in (1, 3):
            cand = w**power
            shape = dict(cand.cycle_structure)
            if shape == target_shape:
                m = cand
                break
    print("found shape-1^2.2.4.8^2 element", m.cyclic_form)

    # relabel so m becomes (2,3)(4,5,6,7)(8..15)(16..23) with 0,1 fixed
    target_cycles = {1: [[0], [1]], 2: [[2, 3]], 4: [[4, 5, 6, 7]],
                     8: [[8, 9, 10, 11, 12, 13, 14, 15],
                         [16, 17, 18, 19, 20, 21, 22, 23]]}
    source_cycles = {k: [] for k in target_cycles}
    seen = set()
    marr = m.array_form + list(range(len(m.array_form), N + 1))
    for i in range(N + 1):
        if i in seen:
            continue
        cyc = [i]
        j = marr[i]
        while j != i:
            cyc.append(j)
            j = marr[j]
        seen |= set(cyc)
        source_cycles[len(cyc)].append(cyc)
    tau = [None] * (N + 1)
    for length, cycles in source_cycles.items():
        for cyc, tgt in zip(cycles, target_cycles[length]):
            for a, b in zip(cyc, tgt):
                tau[a] = b
    assert sorted(tau) == list(range(N + 1))

    new_basis = [apply_perm(b, tau) for b in basis]
    sigma = [0, 1, 3, 2] + [5, 6, 7, 4] + [9, 10, 11, 12, 13, 14, 15, 8] + \
            [17, 18, 19, 20, 21, 22, 23, 16]
    assert all(in_code(apply_perm(b, sigma), new_basis) for b in new_basis)
    print("shipped code is invariant under the printed order-8 permutation")

    g_new = [0] * (N + 1)
    h_new = [0] * (N + 1)
    for i in range(N + 1):
        g_new[tau[i]] = tau[g_perm[i]]
        h_new[tau[i]] = tau[h_perm[i]]
    for p in (g_new, h_new):
        assert all(in_code(apply_perm(b, p), new_basis) for b in new_basis)
    assert PermutationGroup([Permutation(g_new), Permutation(h_new)]).order() == order

    glue_rows = [[("1/2" if x else "0") for x in b] for b in new_basis]
    DATA.mkdir(parents=True, exist_ok=True)
    with open(DATA / "glue_a1_24.json", "w") as fh:
        json.dump({"root_type": "A1^24", "glue": glue_rows}, fh, indent=1)
    with open(DATA / "m24_generators.json", "w") as fh:
        json.dump({"degree": 24, "generators": [g_new, h_new],
                   "group_order": int(order)}, fh, indent=1)
    print("wrote", DATA / "glue_a1_24.json")
    print("wrote", DATA / "m24_generators.json")


if __name__ == "__main__":
    main()
