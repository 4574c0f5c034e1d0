#!/usr/bin/env python3
"""Derive the glue data for the A2^12 Niemeier lattice.

The glue group of A2^12 is a self-dual ternary code of length 12 with
minimum weight 6 (the extended ternary Golay code).  The order-8 diagram
permutation

    (3,4)(5,7,6,8)(9,11,13,15,17,19,21,23)(10,12,14,16,18,20,22,24)

acts on the code coordinates as the monomial map

    c0 -> c0,  c1 -> -c1,  c2 -> c3 -> -c2,  c4 -> c5 -> ... -> c11 -> c4.

That map has order 8, coprime to 3, so an invariant code splits into
isotypic pieces.  We enumerate the few possible splittings, keep the
self-orthogonal ones of minimum weight 6, and freeze a canonical choice.
"""

import json
from itertools import product
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "lattice_forge" / "data"
DIM = 12


def monomial(vec):
    out = [0] * DIM
    out[0] = vec[0]
    out[1] = (-vec[1]) % 3
    out[3] = vec[2]
    out[2] = (-vec[3]) % 3
    for j in range(8):
        out[4 + (j + 1) % 8] = vec[4 + j]
    return out


def dot(a, b):
    return sum(x * y for x, y in zip(a, b)) % 3


def span(gens):
    words = {tuple([0] * DIM)}
    for g in gens:
        extra = set()
        for w in words:
            for k in (1, 2):
                extra.add(tuple((x + k * y) % 3 for x, y in zip(w, g)))
        words |= extra
    return words


def rank3(rows):
    rows = [list(r) for r in rows]
    r = 0
    for c in range(DIM):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, 3)
        rows[r] = [(x * inv) % 3 for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % 3 for x, y in zip(rows[i], rows[r])]
        r += 1
    return r, rows[:r]


def poly_apply(vec, coeffs):
    """coeffs c0..ck: apply c0*I + c1*M + ... to vec."""
    out = [0] * DIM
    cur = list(vec)
    for c in coeffs:
        if c:
            out = [(o + c * x) % 3 for o, x in zip(out, cur)]
        cur = monomial(cur)
    return out


def kernel_of(coeffs):
    """Basis of ker(p(M)) inside the 8-cycle block."""
    basis = []
    for j in range(8):
        e = [0] * DIM
        e[4 + j] = 1
        basis.append(poly_apply(e, coeffs))
    # kernel of the map v -> p(M) v restricted to the block: solve by brute
    # linear algebra on the images
    out = []
    rows = [b[4:] for b in basis]
    n = 8
    # find null space of rows^T x = 0 where x are block coordinates
    mat = [[rows[i][j] for i in range(n)] for j in range(n)]  # columns = images
    # we want x with sum_i x_i * image_i = 0
    aug = [list(r) for r in mat]
    pivots = []
    r = 0
    where = [-1] * n
    for c in range(n):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, 3)
        aug[r] = [(x * inv) % 3 for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % 3 for x, y in zip(aug[i], aug[r])]
        where[c] = r
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if where[c] == -1]
    for fc in free:
        x = [0] * n
        x[fc] = 1
        for c in pivots:
            x[c] = (-aug[where[c]][fc]) % 3
        vec = [0] * DIM
        for j in range(8):
            vec[4 + j] = x[j]
        out.append(vec)
    return out


def f9_lines(space):
    """M-stable 2-dim subspaces spanned by v, Mv inside the given span."""
    vecs = set()
    for cs in product(range(3), repeat=len(space)):
        v = [0] * DIM
        for c, b in zip(cs, space):
            if c:
                v = [(x + c * y) % 3 for x, y in zip(v, b)]
        if any(v):
            vecs.add(tuple(v))
    lines = set()
    for v in vecs:
        mv = tuple(monomial(list(v)))
        line = frozenset(t for t in span([list(v), list(mv)]) if any(t))
        lines.add(line)
    return lines


def main():
    e = lambda j: [1 if i == j else 0 for i in range(DIM)]
    u = [0] * 4 + [1] * 8
    alt = [0] * 4 + [1, 2] * 4
    assert monomial(u) == u
    assert monomial(alt) == [(-x) % 3 for x in alt]

    triv_lines = [[(a + b) % 3 for a, b in zip(e(0), u)],
                  [(a - b) % 3 for a, b in zip(e(0), u)]]
    sign_lines = [[(a + b) % 3 for a, b in zip(e(1), alt)],
                  [(a - b) % 3 for a, b in zip(e(1), alt)]]
    for v in triv_lines + sign_lines:
        assert dot(v, v) == 0

    w1 = [0] * DIM
    w2 = [0] * DIM
    for j, s in enumerate((1, 0, 2, 0, 1, 0, 2, 0)):
        w1[4 + j] = s
    for j, s in enumerate((0, 1, 0, 2, 0, 1, 0, 2)):
        w2[4 + j] = s
    i_space = [e(2), e(3), w1, w2]
    assert monomial(monomial(e(2))) == [(-x) % 3 for x in e(2)]
    assert monomial(monomial(w1)) == [(-x) % 3 for x in w1]

    iso_i_lines = []
    for line in f9_lines(i_space):
        if all(dot(list(v), list(w)) == 0 for v in line for w in line):
            iso_i_lines.append(sorted(line))
    print("isotropic F9-lines in the i-isotypic piece:", len(iso_i_lines))

    zeta = kernel_of([2, 1, 1])   # M^2 + M + 2I
    zetab = kernel_of([2, 2, 1])  # M^2 + 2M + 2I
    assert len(zeta) == 2 and len(zetab) == 2
    for pair in (zeta, zetab):
        assert all(dot(v, w) == 0 for v in pair for w in pair), pair

    candidates = []
    for t, s, iline, zpart in product(triv_lines, sign_lines, iso_i_lines,
                                      (zeta, zetab)):
        gens = [t, s, iline[0], list(monomial(iline[0])), *zpart]
        rk, _ = rank3(gens)
        if rk != 6:
            continue
        if any(dot(a, b) != 0 for a in gens for b in gens):
            continue
        words = span(gens)
        if len(words) != 729:
            continue
        if not all(tuple(monomial(list(w))) in words for w in words):
            continue
        weights = {}
        for w in words:
            k = sum(1 for x in w if x)
            weights[k] = weights.get(k, 0) + 1
        if min(k for k in weights if k) < 6:
            continue
        candidates.append((sorted(words), gens, weights))
    print("invariant self-dual codes with minimum weight 6:", len(candidates))
    assert candidates

    candidates.sort(key=lambda c: c[0])
    words, gens, weights = candidates[0]
    assert weights == {0: 1, 6: 264, 9: 440, 12: 24}, weights
    _, rref = rank3(gens)

    rows = []
    for g in rref:
        row = []
        for c in g:
            c = c if c != 2 else -1
            row.extend([f"{c}/3" if c else "0",
                        f"{-c}/3" if c else "0"])
        rows.append(row)
    DATA.mkdir(parents=True, exist_ok=True)
    with open(DATA / "glue_a2_12.json", "w") as fh:
        json.dump({"root_type": "A2^12", "glue": rows}, fh, indent=1)
    print("wrote", DATA / "glue_a2_12.json")


if __name__ == "__main__":
    main()
