"""Catalog data, glued constructions, and the order-8 fixed-lattice cases."""

import json
from fractions import Fraction
from importlib import resources

import pytest

from lattice_forge.actions import (
    c_of_action,
    invariant_lattice,
    permutation_action_on_niemeier,
    permutation_from_cycles,
    trace_check,
)
from lattice_forge.definite import are_isometric, root_sublattice_type, short_vectors
from lattice_forge.discforms import discriminant_form, find_isomorphism
from lattice_forge.lattice import (
    Lattice,
    direct_sum,
    discriminant,
    discriminant_group,
    hyperbolic_plane,
    is_even,
    signature,
)
from lattice_forge.niemeier import (
    NiemeierEntry,
    catalog,
    construct,
    entry_by_label,
    k3_lattice,
    parse_root_type,
)

ORDER8_CASES = {
    "A5^4 + D4": [(1, 6, 11, 16, 5, 10, 15, 20), (2, 7, 12, 17, 4, 9, 14, 19),
                  (3, 8, 13, 18), (23, 24)],
    "A2^12": [(3, 4), (5, 7, 6, 8), (9, 11, 13, 15, 17, 19, 21, 23),
              (10, 12, 14, 16, 18, 20, 22, 24)],
    "A1^24": [(3, 4), (5, 6, 7, 8), (9, 10, 11, 12, 13, 14, 15, 16),
              (17, 18, 19, 20, 21, 22, 23, 24)],
}

FIXED_GRAMS = {
    "A5^4 + D4": [[-16, 8, -8, 0, 0, 0], [8, -16, 8, 0, 0, 0],
                  [-8, 8, -6, 0, 0, 0], [0, 0, 0, -2, 1, 0],
                  [0, 0, 0, 1, -2, 2], [0, 0, 0, 0, 2, -4]],
    "A2^12": [[-2, 1, 0, 0, 0, -1], [1, -2, 0, 0, 0, 1], [0, 0, -2, 0, 0, 0],
              [0, 0, 0, -4, 0, 0], [0, 0, 0, 0, -16, -8], [-1, 1, 0, 0, -8, -6]],
    "A1^24": [[-2, 0, 0, -1, 0, 0], [0, -2, 0, -1, 0, 0], [0, 0, -4, -2, 0, 0],
              [-1, -1, -2, -4, -2, -2], [0, 0, 0, -2, -6, -2],
              [0, 0, 0, -2, -2, -6]],
}

FIXED_ROOT_TYPES = {"A5^4 + D4": "A3", "A2^12": "A1 + A2", "A1^24": "A1^2"}

CHI = {1: 24, 2: 8, 3: 6, 4: 4, 5: 4, 6: 2, 7: 3, 8: 2}


def fixed_form_target():
    return discriminant_form(
        direct_sum(Lattice([[2]]), Lattice([[4]]), hyperbolic_plane(8)))


class TestCatalog:
    def test_has_23_rows(self):
        cat = catalog()
        assert len(cat) == 23
        assert [e.index for e in cat] == list(range(1, 24))
        assert len({e.root_type for e in cat}) == 23

    def test_all_types_have_rank_24(self):
        assert all(e.root_type.rank == 24 for e in catalog())

    def test_printed_orders(self):
        cat = {e.index: e for e in catalog()}
        assert cat[23].root_type.label() == "A1^24"
        assert cat[23].o_total == 244823040
        assert cat[12].root_type.label() == "E6^4"
        assert cat[12].o_total == 48
        assert cat[1].root_type.label() == "D24"
        assert cat[1].o_total == 1
        assert cat[22].o1_order == 2
        assert cat[22].o2_name == "M12"
        assert cat[22].o_total == 190080
        assert cat[19].o1_order == 3
        assert cat[19].o_total == 2160

    def test_glue_shipped_for_three_entries(self):
        with_glue = [e.root_type.label() for e in catalog() if e.glue is not None]
        assert sorted(with_glue) == ["A1^24", "A2^12", "A5^4 + D4"]

    def test_parse_root_type_round_trip(self):
        for e in catalog():
            assert parse_root_type(e.root_type.label()) == e.root_type

    def test_parse_root_type_rejects_junk(self):
        with pytest.raises(ValueError):
            parse_root_type("B3")

    def test_entry_by_label_unknown(self):
        with pytest.raises(KeyError):
            entry_by_label("A1^23")


class TestConstruct:
    @pytest.mark.parametrize("label", sorted(ORDER8_CASES))
    def test_self_verified(self, label):
        built = construct(entry_by_label(label))
        lat = built.lattice
        assert lat.rank == 24
        assert discriminant(lat) == 1
        assert is_even(lat)
        sig = signature(lat)
        assert (sig.plus, sig.minus) == (0, 24)
        assert root_sublattice_type(lat).label() == label

    def test_a1_24_has_24_root_pairs(self):
        built = construct(entry_by_label("A1^24"))
        assert short_vectors(built.lattice, 2).pair_count(-2) == 24

    def test_root_rows_realize_the_diagram(self):
        built = construct(entry_by_label("A5^4 + D4"))
        lat, rows = built.lattice, built.root_rows
        pair = lambda i, j: lat.bilinear(rows[i], rows[j])
        for i in range(24):
            assert pair(i, i) == -2
        # first A5 chain, then the D4 star centered at the second node
        assert [pair(i, i + 1) for i in range(4)] == [1, 1, 1, 1]
        assert pair(4, 5) == 0
        assert pair(20, 21) == 1 and pair(21, 22) == 1 and pair(21, 23) == 1
        assert pair(20, 22) == 0 and pair(22, 23) == 0

    def test_half_sum_is_a_lattice_vector(self):
        # (w1+w3)/2 with w1, w3 the invariant-chain sums of the A5 components
        built = construct(entry_by_label("A5^4 + D4"))
        coeffs = [Fraction(0)] * 24
        for i in range(4):
            for p in (0, 2, 4):
                coeffs[5 * i + p] = Fraction(1, 2)
        coords = [sum(c * Fraction(r[j]) for c, r in zip(coeffs, built.root_rows))
                  for j in range(24)]
        assert all(x.denominator == 1 for x in coords)

    def test_glue_group_order_squares_to_root_discriminant(self):
        from math import isqrt

        for label, disc_root in (("A1^24", 2 ** 24), ("A2^12", 3 ** 12),
                                 ("A5^4 + D4", 6 ** 4 * 4)):
            built = construct(entry_by_label(label))
            # unimodular overlattice: glue index^2 equals the root discriminant
            assert discriminant_group(built.lattice).orders == ()
            assert isqrt(disc_root) ** 2 == disc_root
            assert len(entry_by_label(label).glue) >= 1

    def test_missing_glue_is_an_error(self):
        with pytest.raises(ValueError, match="no glue vectors"):
            construct(entry_by_label("D24"))

    def test_bad_glue_fails_verification(self):
        good = entry_by_label("A1^24")
        bad_row = tuple([Fraction(1, 2)] + [Fraction(0)] * 23)
        doctored = NiemeierEntry(good.index, good.root_type, good.o1_order,
                                 good.o2_name, good.o_total, (bad_row,))
        with pytest.raises(ValueError, match="self-verification"):
            construct(doctored)


class TestOrder8Cases:
    @pytest.mark.parametrize("label", sorted(ORDER8_CASES))
    def test_fixed_lattice(self, label):
        built = construct(entry_by_label(label))
        sigma = permutation_from_cycles(ORDER8_CASES[label], 24)
        act = permutation_action_on_niemeier(built, sigma)
        basis, inv = invariant_lattice(act)
        assert inv.rank == 6
        assert discriminant(inv) == 512
        sig = signature(inv)
        assert (sig.plus, sig.minus) == (0, 6)
        assert discriminant_group(inv).orders == (2, 4, 8, 8)
        assert find_isomorphism(discriminant_form(inv), fixed_form_target())
        ok, _ = are_isometric(inv, Lattice(FIXED_GRAMS[label]))
        assert ok
        assert root_sublattice_type(inv).label() == FIXED_ROOT_TYPES[label]

    @pytest.mark.parametrize("label", sorted(ORDER8_CASES))
    def test_traces_count_fixed_roots(self, label):
        built = construct(entry_by_label(label))
        sigma = permutation_from_cycles(ORDER8_CASES[label], 24)
        act = permutation_action_on_niemeier(built, sigma)
        assert c_of_action(act) == 18
        rows = trace_check(act)
        assert len(rows) == 8
        for row in rows:
            assert row.trace == CHI[row.order]


class TestShippedGroupData:
    def load(self, name):
        path = resources.files("lattice_forge") / "data" / name
        return json.loads(path.read_text())

    def test_generators_preserve_the_binary_glue_code(self):
        glue = self.load("glue_a1_24.json")["glue"]
        rows = [[0 if x == "0" else 1 for x in row] for row in glue]
        gens = self.load("m24_generators.json")["generators"]
        dot = lambda a, b: sum(x * y for x, y in zip(a, b)) % 2
        for perm in gens + [permutation_from_cycles(ORDER8_CASES["A1^24"], 24)]:
            for row in rows:
                moved = [0] * 24
                for i, x in enumerate(row):
                    moved[perm[i]] = x
                # self-dual code: membership = orthogonality to the basis
                assert all(dot(moved, b) == 0 for b in rows)

    def test_group_order(self):
        sympy = pytest.importorskip("sympy")
        from sympy.combinatorics import Permutation, PermutationGroup

        payload = self.load("m24_generators.json")
        gens = [Permutation(p) for p in payload["generators"]]
        order = PermutationGroup(gens).order()
        assert order == payload["group_order"] == 244823040
        assert order == entry_by_label("A1^24").o_total


class TestK3Lattice:
    def test_shape(self):
        k3 = k3_lattice()
        assert k3.rank == 22
        assert abs(discriminant(k3)) == 1
        assert is_even(k3)
        sig = signature(k3)
        assert (sig.plus, sig.minus) == (3, 19)
