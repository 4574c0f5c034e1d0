#!/usr/bin/env python3
"""Structured constructions for subgroup rows the random search missed.

Each remaining group has a normal subgroup that pins down where it lives:
a semidihedral group sits inside a 2-Sylow, the two order-48 groups share
an involution centralizer, the order-36 and one order-72 group normalize
a 3-Sylow, and the order-288 group normalizes an elementary 2^4.  Build
those ambient groups once, then scan small generator sets inside them.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from sympy.combinatorics import Permutation, PermutationGroup

from find_m24_subgroups import (
    DEGREE, Search, chi_ok, images, orbit_profile, verify_and_emit)


def key(g):
    return tuple(images(g))


def element_list(group):
    return list(group.elements)


def grown_subgroup(search, amb, test, want_order=None, label="", tries=200000):
    """Collect random elements of amb passing test() until the generated
    group stops growing (or hits want_order)."""
    gens = []
    H = None
    stable = 0
    for i in range(tries):
        g = amb.random()
        if g.order() <= 1 or not test(g):
            continue
        if H is not None and H.contains(g):
            stable += 1
            if stable >= 6 or (want_order and H.order() == want_order):
                break
            continue
        gens.append(g)
        H = PermutationGroup(gens)
        stable = 0
        if want_order and H.order() == want_order:
            break
    if H is not None:
        search.log(f"  {label}: order {H.order()} from {len(gens)} generators")
    return H


def scan_pairs(search, base, pool_a, pool_b, how, base_perms=(), cap=None):
    """Try <base + a + b> for (a, b) in pool_a x pool_b."""
    done = 0
    for a in pool_a:
        for b in pool_b:
            if a == b:
                continue
            gens = list(base) + [a, b]
            perms = list(base_perms) + [a, b]
            s0, m0 = orbit_profile(perms)
            if not search.profile_matches(s0, m0):
                continue
            search.consider(gens, how)
            done += 1
            if cap and done >= cap:
                return
            if not search.pending():
                return


def recipe_sd16(search):
    """Row 26: order 16, two fixed points.  Every 2-subgroup fixing exactly
    {0, 1} is conjugate into one fixed 2-Sylow of the 2-point stabilizer,
    and the group is 2-generated, so an exhaustive pair scan is complete."""
    if 26 in search.found:
        return
    syl = search.stab[2].sylow_subgroup(2)
    elems = [g for g in element_list(syl) if g.order() > 1]
    search.log(f"sd16 scan: {len(elems)} nontrivial 2-Sylow elements")
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            s0, m0 = orbit_profile([a, b])
            if (s0, m0) != (2, 6):
                continue
            search.consider([a, b], "sd16-pair-scan")
            if 26 in search.found:
                return


def recipe_involution_centralizer(search):
    """Rows 51 and 54: both order-48 groups have a central involution, so
    both embed in the centralizer of an involution of the point stabilizer."""
    if 51 in search.found and 54 in search.found:
        return
    amb = search.stab[1]
    t = None
    while t is None:
        g = amb.random()
        o = g.order()
        if o % 2 == 0:
            cand = g ** (o // 2)
            if chi_ok(cand):
                t = cand
    C = grown_subgroup(search, amb, lambda g: g * t == t * g,
                       label="centralizer of involution")
    elems = [g for g in element_list(C) if chi_ok(g)]
    by_order = {}
    for g in elems:
        by_order.setdefault(g.order(), []).append(g)
    search.log("  element orders: " +
               ", ".join(f"{o}:{len(v)}" for o, v in sorted(by_order.items())))
    if 54 not in search.found:
        scan_pairs(search, [t], by_order.get(8, []),
                   by_order.get(3, []) + by_order.get(4, []) + by_order.get(2, []),
                   "order8-pair-in-centralizer", base_perms=[t])
    if 51 not in search.found:
        scan_pairs(search, [t], by_order.get(4, []), by_order.get(3, []) + by_order.get(6, []),
                   "order4x3-in-centralizer", base_perms=[t])
    if 51 not in search.found or 54 not in search.found:
        scan_pairs(search, [t], by_order.get(2, []) + by_order.get(4, []),
                   by_order.get(3, []) + by_order.get(6, []),
                   "pairs-in-centralizer", base_perms=[t])


def recipe_sylow3_normalizer(search):
    """Rows 48 and 62: both groups have a normal 3^2, which is a full
    3-Sylow of the point stabilizer; scan inside its normalizer."""
    if 48 in search.found and 62 in search.found:
        return
    amb = search.stab[1]
    P = amb.sylow_subgroup(3)
    pk = {key(g) for g in element_list(P)}
    pgens = list(P.generators)

    def normalizes(g):
        gi = g ** -1
        return all(key(g * h * gi) in pk for h in pgens)

    N = grown_subgroup(search, amb, normalizes, label="3-Sylow normalizer")
    for g in pgens:
        if not N.contains(g):
            N = PermutationGroup(list(N.generators) + pgens)
            break
    search.log(f"  normalizer order {N.order()}")
    elems = [g for g in element_list(N) if chi_ok(g)]
    by_order = {}
    for g in elems:
        by_order.setdefault(g.order(), []).append(g)
    search.log("  element orders: " +
               ", ".join(f"{o}:{len(v)}" for o, v in sorted(by_order.items())))
    if 62 in search.found:
        pass
    else:
        for g in by_order.get(8, []):
            search.consider(pgens + [g], "sylow3-normalizer-order8")
            if 62 in search.found:
                break
    if 48 not in search.found:
        twos = by_order.get(2, [])
        scan_pairs(search, pgens, twos, twos, "sylow3-normalizer-2x2",
                   base_perms=pgens)
    # other Sylow-2 shapes on top of the 3^2, in case the first scans miss
    if 48 not in search.found or 62 not in search.found:
        small = by_order.get(2, []) + by_order.get(4, []) + by_order.get(8, [])
        scan_pairs(search, pgens, small, small, "sylow3-normalizer-2pow",
                   base_perms=pgens)


def octad_kernel(search):
    """Pointwise stabilizer of a Golay octad through coordinates 0 and 1:
    an elementary abelian 2^4."""
    import json
    from fractions import Fraction
    root = Path(__file__).resolve().parent.parent
    glue = json.load(open(root / "src" / "lattice_forge" / "data" / "glue_a1_24.json"))
    words = []
    for row in glue["glue"]:
        bits = ["1" if Fraction(x) % 1 else "0" for x in row]
        words.append(int("".join(reversed(bits)), 2))
    span = {0}
    for w in words:
        span |= {x ^ w for x in span}
    for w in span:
        if bin(w).count("1") == 8 and (w & 1) and (w & 2):
            octad = [i for i in range(DEGREE) if w >> i & 1]
            return search.m24.pointwise_stabilizer(octad)
    raise RuntimeError("no octad through 0,1")


def recipe_sixteen_normalizer(search):
    """Row 78: order 288 = 2^4 * 18 with a normal elementary 2^4, the
    pointwise kernel of an octad; scan inside the kernel's normalizer."""
    if 78 in search.found:
        return
    amb = search.stab[2]
    V = octad_kernel(search)
    vk = {key(g) for g in element_list(V)}
    vgens = list(V.generators)

    def normalizes(g):
        gi = g ** -1
        return all(key(g * h * gi) in vk for h in vgens)

    N = grown_subgroup(search, amb, normalizes, label="2^4 normalizer")
    search.log(f"  normalizer order {N.order()}")
    elems = [g for g in element_list(N) if chi_ok(g)]
    threes = [g for g in elems if g.order() == 3]
    smalls = [g for g in elems if g.order() in (2, 4)]
    search.log(f"  pools: {len(threes)} order-3, {len(smalls)} order-2/4")
    scan_pairs(search, vgens, threes, smalls, "2^4-normalizer-scan",
               base_perms=vgens, cap=300000)


def main():
    t0 = time.time()
    search = Search(seed=20240818)
    search.log(f"pending: {[t[0] for t in search.pending()]}")
    recipe_sd16(search)
    recipe_sylow3_normalizer(search)
    recipe_involution_centralizer(search)
    recipe_sixteen_normalizer(search)
    left = [t[0] for t in search.pending()]
    search.log(f"finish pass done in {time.time() - t0:.0f}s; missing {left}")
    if not left:
        verify_and_emit(log=search.log)
        return 0
    return 1


if __name__ == "__main__":
    sys.exit(main())
