import random

import numpy as np
import pytest

from symcube.catalog import elementary_16, reference_catalog, switched_16_designs
from symcube.cubes import (
    Cube,
    ParatopyElement,
    SliceSpec,
    apply_paratopy,
    difference_cube,
    group_cube,
    hadamard_slice_checks,
    is_totally_symmetric,
    latin_square_to_cube,
    random_paratopy,
    slice_invariant,
    slice_matrix,
    to_hadamard,
    verify_cube,
    weak_slice_invariant,
)
from symcube.designs import DesignParams, verify_design
from symcube.errors import InvalidInputError
from symcube.groups import DifferenceSet, difference_sets_up_to_equivalence, make_cyclic


@pytest.fixture(scope="module")
def fano_cube():
    z7 = make_cyclic(7)
    return difference_cube(z7, DifferenceSet(z7, (1, 2, 4), (7, 3, 1)), 3)


@pytest.fixture(scope="module")
def cube321():
    z3 = make_cyclic(3)
    return difference_cube(z3, DifferenceSet(z3, (1, 2), (3, 2, 1)), 3)


class TestSlicing:
    def test_slice_transpose_relation(self, fano_cube):
        for fixed in range(7):
            a = slice_matrix(fano_cube, SliceSpec(0, 1, (fixed,)))
            b = slice_matrix(fano_cube, SliceSpec(1, 0, (fixed,)))
            assert np.array_equal(a.bits.T, b.bits)

    def test_slice_out_of_range(self, fano_cube):
        with pytest.raises(InvalidInputError):
            slice_matrix(fano_cube, SliceSpec(0, 3, (0,)))
        with pytest.raises(InvalidInputError):
            slice_matrix(fano_cube, SliceSpec(0, 0, (1,)))

    def test_latin_square_slices_are_permutation_matrices(self):
        square = [[(i + j) % 4 for j in range(4)] for i in range(4)]
        c = latin_square_to_cube(square)
        assert verify_cube(c)
        m = slice_matrix(c, SliceSpec(0, 1, (2,)))
        assert (m.bits.sum(axis=0) == 1).all()


class TestVerify:
    def test_difference_cube_verifies(self, fano_cube):
        assert verify_cube(fano_cube)

    def test_all_ones_cube(self):
        c = Cube(np.ones((3, 3, 3), dtype=np.uint8), DesignParams(3, 3, 3))
        assert verify_cube(c)

    def test_mutation_breaks_cube(self, fano_cube):
        rng = random.Random(0)
        for _ in range(25):
            bits = fano_cube.bits.copy()
            i, j, k = (rng.randrange(7) for _ in range(3))
            bits[i, j, k] ^= 1
            assert not verify_cube(Cube(bits, fano_cube.params))


class TestConstructions:
    def test_321_cubes_all_dimensions(self):
        z3 = make_cyclic(3)
        d = DifferenceSet(z3, (1, 2), (3, 2, 1))
        for n in range(2, 6):
            assert verify_cube(difference_cube(z3, d, n))

    def test_difference_cube_abelian_totally_symmetric(self, fano_cube):
        assert is_totally_symmetric(fano_cube)

    def test_group_cube_translate_family_equals_difference_cube(self):
        z7 = make_cyclic(7)
        d = DifferenceSet(z7, (1, 2, 4), (7, 3, 1))
        # blocks g_i^{-1} D, indexed by i
        blocks = []
        for i in range(7):
            inv = z7.inv(i)
            blocks.append(frozenset(z7.table[inv][x] for x in d.elements))
        gc = group_cube(z7, blocks, 3)
        dc = difference_cube(z7, d, 3)
        assert gc == dc

    def test_group_cube_rejects_bad_blocks(self):
        z7 = make_cyclic(7)
        blocks = [frozenset({0, 1, 2})] * 7
        with pytest.raises(InvalidInputError):
            group_cube(z7, blocks, 3)

    def test_group_cube_from_nondevelopment_not_totally_symmetric(self):
        g16 = elementary_16()
        _, d2m, _ = switched_16_designs()
        c = group_cube(g16, d2m.columns_as_sets(), 3)
        assert verify_cube(c)
        assert not is_totally_symmetric(c)


class TestParatopy:
    def test_identity(self, fano_cube):
        ident = ParatopyElement.identity(3, 7)
        assert apply_paratopy(fano_cube, ident) == fano_cube

    def test_pure_transposition_on_matrix(self):
        z7 = make_cyclic(7)
        d = DifferenceSet(z7, (1, 2, 4), (7, 3, 1))
        c2 = difference_cube(z7, d, 2)
        swap = ParatopyElement(
            (tuple(range(7)), tuple(range(7))), (1, 0)
        )
        assert np.array_equal(apply_paratopy(c2, swap).bits, c2.bits.T)

    def test_action_law_and_inverse(self, fano_cube):
        rng = random.Random(5)
        for _ in range(100):
            p = random_paratopy(rng, 3, 7)
            q = random_paratopy(rng, 3, 7)
            cp = apply_paratopy(fano_cube, p)
            assert verify_cube(cp)
            assert apply_paratopy(cp, q) == apply_paratopy(fano_cube, q.compose(p))
            assert apply_paratopy(cp, p.inverse()) == fano_cube

    def test_dimension_mismatch(self, fano_cube):
        with pytest.raises(InvalidInputError):
            apply_paratopy(fano_cube, ParatopyElement.identity(3, 8))


class TestSliceInvariant:
    def test_single_class_for_difference_cube(self, fano_cube):
        inv = slice_invariant(fano_cube)
        assert len(inv.classes) == 3
        flat = {cert for inner in inv.classes for cert in inner}
        assert len(flat) == 1

    def test_invariance_under_paratopy(self, fano_cube):
        rng = random.Random(9)
        base = slice_invariant(fano_cube)
        for _ in range(50):
            p = random_paratopy(rng, 3, 7)
            assert slice_invariant(apply_paratopy(fano_cube, p)) == base

    def test_weak_invariant_refinement(self, fano_cube):
        strong = slice_invariant(fano_cube)
        weak = weak_slice_invariant(fano_cube)
        # equal classes imply equal automorphism orders
        assert len({x for inner in weak.classes for x in inner}) == 1

    def test_switched_design_cube_invariants(self):
        cat = reference_catalog()
        g16 = elementary_16()
        _, d2m, d3m = switched_16_designs()
        inv2 = slice_invariant(group_cube(g16, d2m.columns_as_sets(), 3))
        inv3 = slice_invariant(group_cube(g16, d3m.columns_as_sets(), 3))
        assert inv2.rendered(cat.names()) == "{ {D1^16}^1, {D2^16}^2 }"
        assert inv3.rendered(cat.names()) == "{ {D1^16}^1, {D3^16}^2 }"

    def test_dimension_guard(self):
        z7 = make_cyclic(7)
        c2 = difference_cube(z7, DifferenceSet(z7, (1, 2, 4), (7, 3, 1)), 2)
        with pytest.raises(InvalidInputError):
            slice_invariant(c2)


class TestLatinSquares:
    def test_order_one(self):
        c = latin_square_to_cube([[0]])
        assert c.bits.shape == (1, 1, 1) and c.bits[0, 0, 0] == 1

    def test_cyclic_order_three(self):
        square = [[(i + j) % 3 for j in range(3)] for i in range(3)]
        c = latin_square_to_cube(square)
        assert verify_cube(c) and c.params == DesignParams(3, 1, 0)

    def test_rejects_non_latin(self):
        with pytest.raises(InvalidInputError):
            latin_square_to_cube([[0, 0], [1, 1]])


class TestHadamard:
    def test_menon_conversion(self):
        g16 = elementary_16()
        d = DifferenceSet(g16, (1, 2, 3, 4, 8, 12), (16, 6, 2))
        c = difference_cube(g16, d, 3)
        h = to_hadamard(c)
        assert hadamard_slice_checks(h)
        # every slice row sum is 2k - v = -4
        assert int(h[0].sum(axis=1)[0]) == -4

    def test_klein_conversion(self):
        z2 = make_cyclic(2)
        from symcube.groups import make_direct_product

        k4 = make_direct_product(z2, z2)
        d = DifferenceSet(k4, (0,), (4, 1, 0))
        h = to_hadamard(difference_cube(k4, d, 3))
        assert hadamard_slice_checks(h)

    def test_non_menon_rejected(self, fano_cube):
        with pytest.raises(InvalidInputError):
            to_hadamard(fano_cube)
