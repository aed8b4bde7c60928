import itertools
import random

import numpy as np
import pytest

from symcube.catalog import reference_catalog
from symcube.cubes import group_cube, slice_invariant, verify_cube
from symcube.datafiles import data_dir, frobenius_21
from symcube.designs import DesignParams, IncidenceMatrix, verify_design
from symcube.errors import InvalidInputError, NotACubeError
from symcube.fileio import load_design, load_orbit_input
from symcube.groups import (
    FiniteGroup,
    enumerate_difference_sets,
    is_difference_set,
    make_cyclic,
)
from symcube.search import (
    OrbitCubeInput,
    classify_group_cubes,
    difference_cube_reference,
    find_ds_block_designs,
    is_group_cube,
    orbit_cube,
)


def naive_pair_coverage_search(g, params, candidates):
    """Independent oracle: plain backtracking on the first uncovered point
    pair, with no block-compatibility filtering."""
    v, k, lam = params.v, params.k, params.lam
    blocks = [tuple(d.elements) for d in candidates]
    pair_list = [
        tuple(b[i] * v + b[j] for i in range(k) for j in range(i + 1, k)) for b in blocks
    ]
    by_pair = {}
    for idx, pairs in enumerate(pair_list):
        for p in pairs:
            by_pair.setdefault(p, []).append(idx)
    all_pairs = sorted({i * v + j for i in range(v) for j in range(i + 1, v)})
    counts = {p: 0 for p in all_pairs}
    out = []
    chosen = []

    def rec(scan, run_pair, min_idx):
        pos = scan
        while pos < len(all_pairs) and counts[all_pairs[pos]] == lam:
            pos += 1
        if pos == len(all_pairs):
            out.append(tuple(sorted(chosen)))
            return
        p = all_pairs[pos]
        for idx in by_pair.get(p, []):
            if p == run_pair and idx < min_idx:
                continue
            if any(counts[q] == lam for q in pair_list[idx]):
                continue
            for q in pair_list[idx]:
                counts[q] += 1
            chosen.append(idx)
            rec(pos, p, idx + 1)
            chosen.pop()
            for q in pair_list[idx]:
                counts[q] -= 1

    rec(0, None, 0)
    return sorted(out)


class TestDesignSearch:
    def test_fano_solutions_are_developments(self):
        z7 = make_cyclic(7)
        sols = find_ds_block_designs(z7, DesignParams(7, 3, 1))
        assert len(sols) == 2
        for sol in sols:
            bits = np.zeros((7, 7), dtype=np.uint8)
            for j, b in enumerate(sol):
                bits[list(b), j] = 1
            assert verify_design(IncidenceMatrix(bits), DesignParams(7, 3, 1))
            for b in sol:
                assert is_difference_set(z7, b, 1)

    @pytest.mark.parametrize("v,k,lam", [(7, 3, 1), (13, 4, 1)])
    def test_against_naive_backtracking(self, v, k, lam):
        g = make_cyclic(v)
        params = DesignParams(v, k, lam)
        cands = enumerate_difference_sets(g, k, lam)
        fast = []
        find_ds_block_designs(g, params, cands, collect=fast.append)
        assert sorted(fast) == naive_pair_coverage_search(g, params, cands)

    def test_fano_brute_force_subsets(self):
        # all 7-subsets of the 14 candidate blocks, checked directly
        z7 = make_cyclic(7)
        params = DesignParams(7, 3, 1)
        cands = enumerate_difference_sets(z7, 3, 1)
        brute = []
        for combo in itertools.combinations(range(len(cands)), 7):
            bits = np.zeros((7, 7), dtype=np.uint8)
            for j, idx in enumerate(combo):
                bits[list(cands[idx].elements), j] = 1
            if verify_design(IncidenceMatrix(bits), params):
                brute.append(combo)
        fast = []
        find_ds_block_designs(z7, params, cands, collect=fast.append)
        assert sorted(fast) == sorted(brute)

    def test_no_candidates(self):
        z16 = make_cyclic(16)
        assert find_ds_block_designs(z16, DesignParams(16, 6, 2)) == []


class TestClassification:
    def test_z7(self):
        cls = classify_group_cubes(make_cyclic(7), DesignParams(7, 3, 1))
        assert (cls.nds, cls.ndc, cls.tds, cls.ngc) == (1, 1, 14, 0)
        assert cls.dev_classes == ["D0"]

    def test_counts_invariant_under_relabeling(self):
        z7 = make_cyclic(7)
        rng = random.Random(17)
        perm = [0] + rng.sample(range(1, 7), 6)
        inv = [0] * 7
        for i, p in enumerate(perm):
            inv[p] = i
        table = [[perm[z7.table[inv[a]][inv[b]]] for b in range(7)] for a in range(7)]
        shuffled = FiniteGroup(table)
        a = classify_group_cubes(z7, DesignParams(7, 3, 1))
        b = classify_group_cubes(shuffled, DesignParams(7, 3, 1))
        assert (a.nds, a.ndc, a.tds, a.ngc) == (b.nds, b.ndc, b.tds, b.ngc)
        assert sorted(a.all_certs) == sorted(b.all_certs)

    def test_f21_finds_the_nondevelopment_design(self):
        f21 = frobenius_21()
        params = DesignParams(21, 5, 1)
        cls = classify_group_cubes(f21, params)
        assert cls.nds == 1 and cls.ndc == 1
        assert cls.ngc == 1  # the unique non-difference group cube


class TestOrbitCube:
    @pytest.fixture(scope="class")
    def bundled(self):
        return load_orbit_input(data_dir() / "orbit" / "ngc_example.orbit")

    def test_published_instance(self, bundled):
        res = orbit_cube(bundled)
        assert res.group_order == 384
        assert res.block_count == 1536
        assert verify_cube(res.cube)

    def test_slice_invariant(self, bundled):
        cat = reference_catalog()
        res = orbit_cube(bundled)
        assert slice_invariant(res.cube).rendered(cat.names()) == "{ {D1^4,D2^12}^3 }"

    def test_not_a_group_cube(self, bundled):
        res = orbit_cube(bundled)
        assert not is_group_cube(res.cube, (), reference_complete=False)

    def test_generator_set_invariance(self, bundled):
        # replace the generators by another generating set of the same group
        from symcube.equivalence import cube_certificate
        from symcube.perms import PermGroup, compose, inverse

        g1, g2, g3 = bundled.generators
        alt = (
            compose(g1, g2),
            compose(g2, compose(g3, g3)),
            g3,
            compose(inverse(g1), g3),
        )
        assert PermGroup(alt, 48).order() == 384
        res1 = orbit_cube(bundled)
        res2 = orbit_cube(OrbitCubeInput(16, alt, bundled.base_blocks))
        assert res2.group_order == 384
        assert (
            cube_certificate(res1.cube).bytes_ == cube_certificate(res2.cube).bytes_
        )

    def test_trivial_group_orbit(self):
        # identity generators with all blocks of a known cube reproduce it
        from symcube.cubes import difference_cube
        from symcube.equivalence import to_transversal
        from symcube.groups import DifferenceSet
        from symcube.perms import identity

        z3 = make_cyclic(3)
        cube = difference_cube(z3, DifferenceSet(z3, (1, 2), (3, 2, 1)), 3)
        t = to_transversal(cube)
        inp = OrbitCubeInput(3, (identity(9),), tuple(t.blocks))
        res = orbit_cube(inp)
        assert res.cube == cube

    def test_class_violation_rejected(self, bundled):
        # generators must preserve the three classes
        bad = tuple(range(1, 48)) + (0,)
        with pytest.raises(InvalidInputError):
            OrbitCubeInput(16, (bad,), bundled.base_blocks)

    def test_partial_orbit_rejected(self, bundled):
        with pytest.raises(NotACubeError):
            orbit_cube(OrbitCubeInput(16, bundled.generators, bundled.base_blocks[:3]))


class TestGroupCubeMembership:
    def test_group_cube_is_member(self):
        f21 = frobenius_21()
        params = DesignParams(21, 5, 1)
        z21 = make_cyclic(21)
        ref = difference_cube_reference([f21, z21], params)
        nondev = load_design(data_dir() / "designs" / "f21_nondev.design")
        c3 = group_cube(f21, nondev.columns_as_sets(), 3)
        from symcube.equivalence import cube_certificate

        refs = set(ref.keys()) | {cube_certificate(c3).bytes_}
        assert is_group_cube(c3, refs)

    def test_difference_cube_is_group_cube(self):
        from symcube.cubes import difference_cube
        from symcube.groups import DifferenceSet

        z7 = make_cyclic(7)
        d = DifferenceSet(z7, (1, 2, 4), (7, 3, 1))
        cube = difference_cube(z7, d, 3)
        ref = difference_cube_reference([z7], DesignParams(7, 3, 1))
        assert is_group_cube(cube, ref.keys())

    def test_incomplete_reference_warns(self):
        from symcube.cubes import difference_cube
        from symcube.groups import DifferenceSet

        z7 = make_cyclic(7)
        d = DifferenceSet(z7, (1, 2, 4), (7, 3, 1))
        cube = difference_cube(z7, d, 3)
        with pytest.warns(UserWarning):
            assert not is_group_cube(cube, (), reference_complete=False)
