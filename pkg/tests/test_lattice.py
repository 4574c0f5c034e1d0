from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lattice_forge.exactla import smith_normal_form
from lattice_forge.lattice import (
    Lattice,
    direct_sum,
    discriminant,
    discriminant_group,
    from_json_dict,
    hyperbolic_plane,
    invariant_sublattice,
    is_degenerate,
    is_even,
    is_primitive_sublattice,
    orthogonal_complement,
    rescale,
    root_lattice,
    signature,
    to_json_dict,
)

U = hyperbolic_plane()
A2 = root_lattice("A", 2)
E8 = root_lattice("E", 8)


def k3_lattice():
    return direct_sum(U, U, U, rescale(E8, -1), rescale(E8, -1))


# invariant sublattice of an order-8 symmetry of the A5^4+D4 Niemeier lattice,
# expressed in a basis containing (w1+w3)/2; frozen from the enumeration suite
GRAM1 = [
    [-16, 8, -8, 0, 0, 0],
    [8, -16, 8, 0, 0, 0],
    [-8, 8, -6, 0, 0, 0],
    [0, 0, 0, -2, 1, 0],
    [0, 0, 0, 1, -2, 2],
    [0, 0, 0, 0, 2, -4],
]


symmetric_matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=-6, max_value=6), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    ).map(lambda m: [[m[i][j] + m[j][i] for j in range(len(m))] for i in range(len(m))])
)


class TestConstruction:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            Lattice([[0, 1], [2, 0]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            Lattice([[0, 1]])

    def test_root_lattice_discriminants(self):
        assert discriminant(root_lattice("A", 1)) == 2
        assert discriminant(A2) == 3
        assert discriminant(root_lattice("A", 5)) == 6
        assert discriminant(root_lattice("D", 4)) == 4
        assert discriminant(root_lattice("D", 6)) == 4
        assert discriminant(root_lattice("E", 6)) == 3
        assert discriminant(root_lattice("E", 7)) == 2
        assert discriminant(E8) == 1

    def test_json_round_trip(self):
        lat = Lattice([[2, 1], [1, 2]], label="a2")
        assert from_json_dict(to_json_dict(lat)) == lat


class TestSignature:
    def test_hyperbolic_plane(self):
        s = signature(U)
        assert (s.plus, s.minus) == (1, 1)

    def test_e8_negative_twice(self):
        s = signature(rescale(E8, -2))
        assert (s.plus, s.minus) == (0, 8)

    def test_printed_invariant_gramian(self):
        s = signature(Lattice(GRAM1))
        assert (s.plus, s.minus) == (0, 6)

    def test_k3(self):
        s = signature(k3_lattice())
        assert (s.plus, s.minus) == (3, 19)

    def test_degenerate_counts_short(self):
        s = signature(Lattice([[0, 0], [0, 2]]))
        assert (s.plus, s.minus) == (1, 0)

    @given(symmetric_matrices)
    @settings(max_examples=80, deadline=None)
    def test_matches_rescale_flip(self, gram):
        lat = Lattice(gram)
        s = signature(lat)
        t = signature(rescale(lat, -1))
        assert (s.plus, s.minus) == (t.minus, t.plus)
        assert s.plus + s.minus <= lat.rank


class TestParityAndDisc:
    def test_u_even(self):
        assert is_even(U)

    def test_odd_unit(self):
        assert not is_even(Lattice([[1]]))

    def test_u_disc(self):
        assert discriminant(U) == -1

    @given(symmetric_matrices)
    @settings(max_examples=60, deadline=None)
    def test_disc_rescale(self, gram):
        lat = Lattice(gram)
        assert discriminant(rescale(lat, -1)) == (-1) ** lat.rank * discriminant(lat)


class TestDiscriminantGroup:
    def test_unimodular_trivial(self):
        assert discriminant_group(U).orders == ()

    def test_a2(self):
        dg = discriminant_group(A2)
        assert dg.orders == (3,)

    def test_printed_gramian_orders(self):
        dg = discriminant_group(Lattice(GRAM1))
        assert dg.orders == (2, 4, 8, 8)

    def test_generator_orders_exact(self):
        lat = direct_sum(rescale(U, 8), Lattice([[2]]), Lattice([[4]]))
        dg = discriminant_group(lat)
        assert dg.order == abs(discriminant(lat))
        # each generator coordinate row has exact denominator lcm = its order
        for d, row in zip(dg.orders, dg.generator_coords):
            lcm = 1
            for x in row:
                f = Fraction(x)
                lcm = lcm * f.denominator // _gcd(lcm, f.denominator)
            assert lcm == d

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            discriminant_group(Lattice([[0, 0], [0, 2]]))

    @given(symmetric_matrices)
    @settings(max_examples=60, deadline=None)
    def test_order_equals_disc(self, gram):
        lat = Lattice(gram)
        if discriminant(lat) == 0:
            return
        dg = discriminant_group(lat)
        assert dg.order == abs(discriminant(lat))
        assert dg.length <= lat.rank


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class TestSumsAndComplements:
    def test_k3_unimodular(self):
        lam = k3_lattice()
        assert discriminant(lam) == 1 or discriminant(lam) == -1
        assert abs(discriminant(lam)) == 1
        assert is_even(lam)

    def test_sum_orders_merge(self):
        a = direct_sum(A2, A2)
        assert discriminant_group(a).orders == (3, 3)

    def test_complement_of_first_factor(self):
        lam = direct_sum(U, U)
        sub = [[1, 0, 0, 0], [0, 1, 0, 0]]
        basis, comp = orthogonal_complement(lam, sub)
        assert comp.gram == U.gram

    def test_full_sub_trivial_complement(self):
        basis, comp = orthogonal_complement(U, [[1, 0], [0, 1]])
        assert basis == [] and comp.rank == 0

    def test_isotropic_complement_degenerate(self):
        basis, comp = orthogonal_complement(U, [[1, 0]])
        assert basis == [[1, 0]]
        assert is_degenerate(comp)

    def test_non_primitive_rejected(self):
        with pytest.raises(ValueError):
            orthogonal_complement(U, [[2, 0]])

    def test_complement_is_primitive(self):
        lam = direct_sum(A2, rescale(U, 3))
        basis, comp = orthogonal_complement(lam, [[1, 0, 0, 0]])
        d, _, _ = smith_normal_form(basis)
        assert all(d[i][i] == 1 for i in range(len(basis)))
        assert is_primitive_sublattice(lam, basis)


class TestInvariantSublattice:
    def test_swap_action_on_u2(self):
        lam = direct_sum(U, U)
        swap = [
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
        ]
        basis, sub = invariant_sublattice(lam, [swap])
        assert len(basis) == 2
        assert sub.gram == rescale(U, 2).gram

    def test_identity_action(self):
        basis, sub = invariant_sublattice(U, [[[1, 0], [0, 1]]])
        assert sub.gram == U.gram
