"""Glueing along anti-isometries, induced glue maps, embedding and genus
condition checks."""

import random

import pytest
from fractions import Fraction

from lattice_forge.definite import are_isometric, definiteness, root_sublattice_type
from lattice_forge.discforms import (
    FiniteQuadraticForm,
    are_isomorphic,
    discriminant_form,
    find_isomorphism,
    negate,
    trivial_form,
)
from lattice_forge.glue import (
    GlueMap,
    embedding_exists,
    glue,
    induced_glue_map,
    length_inequality,
    min_generators,
    nikulin_surjectivity_check,
    nikulin_uniqueness_check,
    validate_glue_map,
)
from lattice_forge.lattice import (
    Lattice,
    direct_sum,
    discriminant,
    hyperbolic_plane,
    is_even,
    rescale,
    root_lattice,
    signature,
    sublattice_gram,
)

U = hyperbolic_plane()
E8 = root_lattice("E", 8)
E8M = root_lattice("E", 8, scale=-1)
E6M = root_lattice("E", 6, scale=-1)
A2M = root_lattice("A", 2, scale=-1)

# indefinite rank-4 stock with distinct two-adic behavior
U8_MIX = direct_sum(hyperbolic_plane(8), Lattice([[2]]), Lattice([[4]]))
TRI9 = direct_sum(hyperbolic_plane(3), hyperbolic_plane(3), Lattice([[2, 3], [3, 0]]))
FOURS = Lattice([[4, 0, 0, 0, 0], [0, 4, 0, 0, 0], [0, 0, 4, 0, 0],
                 [0, 0, 0, -4, 0], [0, 0, 0, 0, -4]])
VBLOCK = direct_sum(Lattice([[4, 2], [2, 4]]), Lattice([[4]]), Lattice([[-8]]))
ONES_MIX = Lattice([[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, -2]])


def anti_isometry_map(l1, l2):
    q1 = discriminant_form(l1)
    q2 = discriminant_form(l2)
    images = find_isomorphism(q1, negate(q2))
    assert images is not None, "stock pair should glue"
    return GlueMap(q1, q2, images)


def sheared(lat, seed):
    """Same lattice in a random unimodular basis."""
    rng = random.Random(seed)
    n = lat.rank
    b = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice((-1, 1))
        for k in range(n):
            b[i][k] += c * b[j][k]
    return Lattice(sublattice_gram(lat, b))


class TestGlueMapValidation:
    def test_opposite_cyclic_forms_accepted(self):
        gm = GlueMap(discriminant_form(E6M), discriminant_form(A2M), ((1,),))
        validate_glue_map(gm)

    def test_equal_sign_rejected(self):
        q = discriminant_form(A2M)
        gm = GlueMap(q, q, ((1,),))
        with pytest.raises(ValueError, match="generator 0"):
            validate_glue_map(gm)

    def test_group_order_mismatch(self):
        gm = GlueMap(discriminant_form(Lattice([[2]])),
                     discriminant_form(Lattice([[-4]])), ((1,),))
        with pytest.raises(ValueError, match="different orders"):
            validate_glue_map(gm)

    def test_row_count_checked(self):
        gm = GlueMap(discriminant_form(A2M), discriminant_form(A2M), ())
        with pytest.raises(ValueError, match="one image row"):
            validate_glue_map(gm)

    def test_non_generating_images_rejected(self):
        # a radical generator lets the pointwise checks pass without bijectivity
        degenerate = FiniteQuadraticForm((2,), (Fraction(0),), ((Fraction(0),),))
        gm = GlueMap(degenerate, degenerate, ((0,),))
        with pytest.raises(ValueError, match="generate"):
            validate_glue_map(gm)

    def test_bilinear_pairs_checked(self):
        # identity on one hyperbolic block, zero on the other: q fine, b wrong
        l2 = direct_sum(hyperbolic_plane(2), hyperbolic_plane(2))
        q = discriminant_form(l2)
        gm = GlueMap(q, q, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)))
        with pytest.raises(ValueError):
            validate_glue_map(gm)


class TestGlue:
    def test_trivial_glue_is_direct_sum(self):
        gm = GlueMap(trivial_form(), trivial_form(), ())
        res = glue(U, E8M, gm)
        assert res.lattice.rank == 10
        assert abs(discriminant(res.lattice)) == 1
        sig = signature(res.lattice)
        assert (sig.plus, sig.minus) == (1, 9)

    def test_root_glue_recovers_even_unimodular(self):
        gm = GlueMap(discriminant_form(E6M), discriminant_form(A2M), ((1,),))
        res = glue(E6M, A2M, gm)
        glued = res.lattice
        assert glued.rank == 8
        assert abs(discriminant(glued)) == 1
        assert is_even(glued)
        assert definiteness(glued) == -1
        assert root_sublattice_type(glued).label() == "E8"
        ok, _ = are_isometric(glued, E8M)
        assert ok

    def test_index_squares_to_group_orders(self):
        gm = GlueMap(discriminant_form(E6M), discriminant_form(A2M), ((1,),))
        res = glue(E6M, A2M, gm)
        d1, d2 = discriminant(E6M), discriminant(A2M)
        index_sq = abs(d1 * d2) // abs(discriminant(res.lattice))
        assert index_sq == 3 * 3

    def test_source_lattice_must_match(self):
        gm = GlueMap(discriminant_form(E6M), discriminant_form(A2M), ((1,),))
        with pytest.raises(ValueError, match="match q"):
            glue(A2M, A2M, gm)

    def test_rescaled_partners_glue_to_unimodular(self):
        pool = [
            root_lattice("A", 1),
            root_lattice("A", 2),
            root_lattice("D", 4),
            root_lattice("E", 6),
        ]
        for i, lat in enumerate(pool):
            partner = sheared(rescale(lat, -1), seed=400 + i)
            gm = anti_isometry_map(lat, partner)
            res = glue(lat, partner, gm)
            assert abs(discriminant(res.lattice)) == 1
            assert is_even(res.lattice)
            sig = signature(res.lattice)
            assert (sig.plus, sig.minus) == (lat.rank, lat.rank)


class TestInducedGlueMap:
    def test_a2_inside_e8(self):
        sub_basis = [[1, 0, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0]]
        gmap, comp_basis = induced_glue_map(E8, sub_basis)
        assert tuple(gmap.source.orders) == (3,)
        assert tuple(gmap.target.orders) == (3,)
        sub = Lattice(sublattice_gram(E8, sub_basis))
        comp = Lattice(sublattice_gram(E8, comp_basis))
        res = glue(sub, comp, gmap)
        assert abs(discriminant(res.lattice)) == 1
        assert root_sublattice_type(res.lattice).label() == "E8"
        ok, _ = are_isometric(res.lattice, E8)
        assert ok

    def test_primitive_vector_in_double_hyperbolic(self):
        ambient = direct_sum(U, U)
        gmap, comp_basis = induced_glue_map(ambient, [[1, 2, 0, 0]])
        assert tuple(gmap.source.orders) == (4,)
        sub = Lattice(sublattice_gram(ambient, [[1, 2, 0, 0]]))
        comp = Lattice(sublattice_gram(ambient, comp_basis))
        res = glue(sub, comp, gmap)
        assert abs(discriminant(res.lattice)) == 1
        assert is_even(res.lattice)
        sig = signature(res.lattice)
        assert (sig.plus, sig.minus) == (2, 2)

    def test_complement_form_is_negation(self):
        cases = [
            (E8, [[1, 0, 0, 0, 0, 0, 0, 0]]),
            (E8, [[1, 0, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0]]),
            (E8, [[int(i == j) for j in range(8)] for i in range(4)]),
            (direct_sum(U, U), [[1, 2, 0, 0]]),
            (direct_sum(U, E8M), [[1, 3, 0, 0, 0, 0, 0, 0, 0, 0]]),
        ]
        for ambient, sub_basis in cases:
            _, comp_basis = induced_glue_map(ambient, sub_basis)
            sub = Lattice(sublattice_gram(ambient, sub_basis))
            comp = Lattice(sublattice_gram(ambient, comp_basis))
            assert are_isomorphic(discriminant_form(comp),
                                  negate(discriminant_form(sub)))

    def test_non_primitive_rejected(self):
        with pytest.raises(ValueError):
            induced_glue_map(E8, [[2, 0, 0, 0, 0, 0, 0, 0]])

    def test_ambient_must_be_unimodular(self):
        with pytest.raises(ValueError, match="unimodular"):
            induced_glue_map(root_lattice("A", 2), [[1, 0]])


class TestEmbedding:
    def test_rank_slack(self):
        ok, info = embedding_exists(Lattice([[2]]), (2, 2))
        assert ok and info["clause"] == "rank slack"

    def test_unimodular_complement(self):
        ok, info = embedding_exists(E8, (11, 3))
        assert ok and info["clause"] == "unimodular complement"

    def test_candidate_accepted(self):
        ok, info = embedding_exists(Lattice([[2]]), (8, 0),
                                    candidate=root_lattice("E", 7))
        assert ok and info["clause"] == "candidate complement verified"

    def test_candidate_rejected(self):
        ok, info = embedding_exists(Lattice([[2]]), (8, 0),
                                    candidate=root_lattice("A", 7))
        assert not ok and info["clause"] == "candidate rejected"

    def test_signature_misfit(self):
        ok, info = embedding_exists(U, (0, 8))
        assert not ok and "signature" in info["clause"]

    def test_no_ambient_of_that_signature(self):
        ok, info = embedding_exists(U, (2, 1))
        assert not ok and "even unimodular" in info["clause"]

    def test_generator_count_violation(self):
        fours = Lattice([[4 * int(i == j) for j in range(5)] for i in range(5)])
        ok, info = embedding_exists(fours, (8, 0))
        assert not ok and "generators" in info["clause"]

    def test_tight_without_candidate(self):
        fours = Lattice([[4 * int(i == j) for j in range(5)] for i in range(5)])
        ok, info = embedding_exists(fours, (5, 5))
        assert not ok and info["clause"] == "tight bound, no candidate supplied"

    def test_min_generators(self):
        assert min_generators(E8) == 0
        assert min_generators(U8_MIX) == 4
        assert min_generators(TRI9) == 5
        assert min_generators(FOURS) == 5

    def test_length_inequality(self):
        assert length_inequality(U8_MIX, 18)
        assert not length_inequality(U8_MIX, 19)
        assert length_inequality(E8, 22)


class TestNikulinCheckers:
    def test_trivial_discriminant_passes(self):
        triple_u = direct_sum(U, U, U)
        assert nikulin_uniqueness_check(triple_u).verdict
        assert nikulin_surjectivity_check(triple_u).verdict

    def test_small_rank_reported(self):
        rep = nikulin_uniqueness_check(U)
        assert not rep.verdict and not rep.rank_ok

    def test_definite_reported(self):
        rep = nikulin_surjectivity_check(root_lattice("D", 4))
        assert not rep.verdict and not rep.indefinite_ok

    def test_odd_lattice_reported(self):
        rep = nikulin_uniqueness_check(Lattice([[1, 0, 0], [0, -1, 0], [0, 0, 1]]))
        assert not rep.verdict and not rep.even_ok

    def test_rank_slack_everywhere(self):
        lat = direct_sum(U, hyperbolic_plane(2))
        for rep in (nikulin_uniqueness_check(lat), nikulin_surjectivity_check(lat)):
            assert rep.verdict and rep.clause(2) == "slack"

    def test_split_even_block_at_scale_two(self):
        rep = nikulin_surjectivity_check(VBLOCK)
        assert rep.verdict and rep.clause(2) == "uv"
        assert nikulin_uniqueness_check(VBLOCK).verdict

    def test_high_scale_block_helps_uniqueness_only(self):
        uniq = nikulin_uniqueness_check(U8_MIX)
        assert uniq.verdict and uniq.clause(2) == "uv"
        surj = nikulin_surjectivity_check(U8_MIX)
        assert not surj.verdict and surj.clause(2) == "fail"

    def test_odd_prime_repeat_vs_fail(self):
        uniq = nikulin_uniqueness_check(TRI9)
        assert uniq.verdict and uniq.clause(3) == "repeat"
        surj = nikulin_surjectivity_check(TRI9)
        assert not surj.verdict and surj.clause(3) == "fail"
        assert surj.clause(2) == "slack"

    def test_odd_block_triple(self):
        uniq = nikulin_uniqueness_check(FOURS)
        assert uniq.verdict and uniq.clause(2) == "triple"
        surj = nikulin_surjectivity_check(FOURS)
        assert not surj.verdict and surj.clause(2) == "fail"

    def test_semantic_search_finds_hidden_block(self):
        # diag(2,2,2,-2): only rank-one two-adic blocks syntactically, but the
        # order-2 part still splits off a non-hyperbolic even pair
        surj = nikulin_surjectivity_check(ONES_MIX)
        assert surj.verdict and surj.clause(2) == "uv-semantic"

    def test_surjectivity_implies_uniqueness(self):
        pool = [direct_sum(U, U, U), direct_sum(U, hyperbolic_plane(2)),
                VBLOCK, U8_MIX, TRI9, FOURS, ONES_MIX,
                direct_sum(U, U, U, E8M, E8M)]
        for lat in pool:
            if nikulin_surjectivity_check(lat).verdict:
                assert nikulin_uniqueness_check(lat).verdict
