import itertools
import random

import numpy as np
import pytest

from symcube.designs import DesignParams, verify_design
from symcube.errors import ConstructionBugError, InvalidInputError, ResourceLimitError
from symcube.groups import (
    DifferenceSet,
    FiniteGroup,
    automorphism_group,
    development,
    difference_sets_up_to_equivalence,
    enumerate_difference_sets,
    find_isomorphism,
    is_difference_set,
    make_cyclic,
    make_direct_product,
    make_from_permutation_generators,
    make_metacyclic,
    multipliers,
)


def klein():
    return make_direct_product(make_cyclic(2), make_cyclic(2))


def z2_4():
    return make_direct_product(klein(), klein())


class TestConstructors:
    def test_trivial_group(self):
        g = make_cyclic(1)
        assert g.table == ((0,),)

    def test_cyclic_arithmetic(self):
        z7 = make_cyclic(7)
        assert z7.table[3][5] == 1

    def test_cyclic_generator_order(self):
        z21 = make_cyclic(21)
        assert z21.element_order(1) == 21

    def test_invalid_order(self):
        with pytest.raises(InvalidInputError):
            make_cyclic(0)

    def test_klein_group_exponent(self):
        k4 = klein()
        assert all(k4.element_order(x) <= 2 for x in range(1, 4))

    def test_z2_4_order_and_xor(self):
        g = z2_4()
        assert g.order == 16
        # lexicographic bit numbering makes multiplication XOR of indices
        for a, b in itertools.product(range(16), repeat=2):
            assert g.table[a][b] == a ^ b

    def test_z2_x_z3_is_cyclic(self):
        g = make_direct_product(make_cyclic(2), make_cyclic(3))
        iso = find_isomorphism(g, make_cyclic(6))
        assert iso is not None and iso.is_valid()

    def test_metacyclic_f21(self):
        f21 = make_metacyclic(3, 7, 2)
        assert f21.order == 21 and not f21.is_abelian()

    def test_metacyclic_trivial_action(self):
        g = make_metacyclic(2, 3, 1)
        assert g.is_abelian()
        assert find_isomorphism(g, make_cyclic(6)) is not None

    def test_metacyclic_27(self):
        g = make_metacyclic(3, 9, 4)
        assert g.order == 27 and not g.is_abelian()
        assert max(g.element_order(x) for x in range(27)) == 9

    def test_metacyclic_invalid_action(self):
        with pytest.raises(InvalidInputError):
            make_metacyclic(3, 7, 3)  # 3^3 = 27 != 1 mod 7

    def test_from_permutation_generators(self):
        z2 = make_from_permutation_generators([(1, 0)])
        assert z2.order == 2
        dihedral = make_from_permutation_generators([(1, 2, 3, 0), (2, 1, 0, 3)])
        assert dihedral.order == 8 and not dihedral.is_abelian()

    def test_from_permutation_generators_limits(self):
        with pytest.raises(ResourceLimitError):
            make_from_permutation_generators(
                [tuple(list(range(1, 11)) + [0])], max_order=5
            )
        assert make_from_permutation_generators([]).order == 1


class TestValidation:
    def test_corrupted_tables_rejected(self):
        z5 = make_cyclic(5)
        rng = random.Random(3)
        rejected = 0
        for _ in range(40):
            table = [list(row) for row in z5.table]
            i, j = rng.randrange(5), rng.randrange(5)
            delta = rng.randrange(1, 5)
            table[i][j] = (table[i][j] + delta) % 5
            try:
                FiniteGroup(table)
            except InvalidInputError:
                rejected += 1
        assert rejected == 40

    def test_non_associative_rejected(self):
        # a Latin square with identity that is not a group table
        table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 3, 4, 0, 1],
            [3, 4, 1, 2, 0],
            [4, 2, 0, 1, 3],
        ]
        with pytest.raises(InvalidInputError):
            FiniteGroup(table)


class TestAutomorphisms:
    def test_aut_z7_brute_force(self):
        z7 = make_cyclic(7)
        auts = automorphism_group(z7)
        # independent oracle: all bijections fixing 0 that are homomorphisms
        brute = []
        for images in itertools.permutations(range(1, 7)):
            img = (0,) + images
            if all(
                img[z7.table[i][j]] == z7.table[img[i]][img[j]]
                for i in range(7)
                for j in range(7)
            ):
                brute.append(img)
        assert sorted(a.images for a in auts) == sorted(brute)
        assert len(auts) == 6

    def test_aut_trivial(self):
        auts = automorphism_group(make_cyclic(1))
        assert len(auts) == 1

    def test_aut_z2_4_order(self):
        # |GL(4,2)| by counting ordered bases: (16-1)(16-2)(16-4)(16-8)
        expected = 15 * 14 * 12 * 8
        assert len(automorphism_group(z2_4())) == expected

    def test_aut_group_closure(self):
        g = make_metacyclic(2, 4, 3)  # D8
        auts = automorphism_group(g)
        images = {a.images for a in auts}
        ident = tuple(range(g.order))
        assert ident in images
        for a in auts:
            inv = [0] * g.order
            for i, j in enumerate(a.images):
                inv[j] = i
            assert tuple(inv) in images
        for a, b in itertools.islice(itertools.product(auts, repeat=2), 64):
            composed = tuple(a.images[b.images[x]] for x in range(g.order))
            assert composed in images

    def test_find_isomorphism_negative(self):
        assert find_isomorphism(make_cyclic(4), klein()) is None

    def test_find_isomorphism_identity_case(self):
        g = make_cyclic(9)
        iso = find_isomorphism(g, g)
        assert iso is not None and iso.is_valid()


class TestDifferenceSets:
    def test_fano_set(self):
        z7 = make_cyclic(7)
        assert is_difference_set(z7, [1, 2, 4], 1)
        assert not is_difference_set(z7, [1, 2, 3], 1)

    def test_full_group_is_difference_set(self):
        g = make_cyclic(5)
        assert is_difference_set(g, range(5), 5)

    def test_enumeration_against_brute_force(self):
        z7 = make_cyclic(7)
        out = enumerate_difference_sets(z7, 3, 1)
        brute = [
            s
            for s in itertools.combinations(range(7), 3)
            if is_difference_set(z7, s, 1)
        ]
        assert [d.elements for d in out] == brute
        assert len(out) == 14

    def test_enumeration_z16_empty(self):
        assert enumerate_difference_sets(make_cyclic(16), 6, 2) == []

    def test_enumeration_z2_4_count(self):
        assert len(enumerate_difference_sets(z2_4(), 6, 2)) == 448

    def test_classes_z2_4(self):
        assert len(difference_sets_up_to_equivalence(z2_4(), 6, 2)) == 1

    def test_orbit_property(self):
        z13 = make_cyclic(13)
        d = difference_sets_up_to_equivalence(z13, 4, 1)[0]
        rng = random.Random(11)
        auts = automorphism_group(z13)
        for _ in range(20):
            phi = rng.choice(auts)
            a = rng.randrange(13)
            image = [z13.table[a][phi.images[x]] for x in d.elements]
            assert is_difference_set(z13, image, 1)

    def test_left_right_agreement_forced(self):
        # right differences stay consistent on every accepted and rejected set
        z7 = make_cyclic(7)
        for s in itertools.combinations(range(7), 3):
            is_difference_set(z7, s, 1, check_right=True)

    def test_difference_set_type_validation(self):
        z7 = make_cyclic(7)
        with pytest.raises(InvalidInputError):
            DifferenceSet(z7, (1, 2, 3), (7, 3, 1))
        with pytest.raises(InvalidInputError):
            DifferenceSet(z7, (1, 2, 4), (7, 3, 2))


class TestMultipliersAndDevelopment:
    def test_multipliers_fano(self):
        z7 = make_cyclic(7)
        d = DifferenceSet(z7, (1, 2, 4), (7, 3, 1))
        mults = multipliers(d)
        maps = sorted(m.map.images[1] for m in mults)
        assert maps == [1, 2, 4]  # x -> x, 2x, 4x

    def test_multipliers_trivial_set(self):
        g = make_metacyclic(2, 4, 3)
        d = DifferenceSet(g, (0,), (8, 1, 0))
        assert len(multipliers(d)) == len(automorphism_group(g))

    def test_development_design_equation(self):
        z7 = make_cyclic(7)
        d = DifferenceSet(z7, (1, 2, 4), (7, 3, 1))
        dev = development(d)
        assert verify_design(dev, DesignParams(7, 3, 1))
        m = dev.bits.astype(int)
        assert np.array_equal(m @ m.T, 2 * np.eye(7, dtype=int) + 1)

    def test_development_of_identity_singleton(self):
        z3 = make_cyclic(3)
        d = DifferenceSet(z3, (0,), (3, 1, 0))
        dev = development(d)
        assert (dev.bits.sum(axis=0) == 1).all() and (dev.bits.sum(axis=1) == 1).all()
