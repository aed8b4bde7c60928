"""Search for designs whose blocks are all difference sets, classification
of the resulting group cubes, and orbit-generated cube reconstruction.

The design search backtracks over candidate blocks, branching on the
lexicographically first point pair with coverage below lambda.  While one
pair is being filled it stays the branching pair, so blocks covering the
same pair are committed in increasing index order; this yields every block
multiset exactly once.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .catalog import reference_catalog
from .cubes import Cube, ParatopyElement, group_cube, slice_invariant
from .designs import DesignParams
from .equivalence import (
    cube_certificate,
    from_transversal,
    paratopy_to_point_perm,
    TransversalRep,
    validate_transversal,
)
from .errors import ConstructionBugError, InvalidInputError, NotACubeError, ResourceLimitError
from .groups import (
    DifferenceSet,
    FiniteGroup,
    automorphism_generators,
    development,
    difference_sets_up_to_equivalence,
    enumerate_difference_sets,
)
from .perms import PermGroup, Perm, identity as id_perm

__all__ = [
    "find_ds_block_designs",
    "classify_group_cubes",
    "GroupCubeClassification",
    "difference_cube_reference",
    "build_seeded_cube_certificate",
    "OrbitCubeInput",
    "OrbitCubeResult",
    "orbit_cube",
    "is_group_cube",
]

Design = tuple[tuple[int, ...], ...]  # blocks as sorted element tuples, sorted


def find_ds_block_designs(
    g: FiniteGroup,
    params: DesignParams,
    candidates: Sequence[DifferenceSet] | None = None,
    time_budget: float | None = None,
    collect=None,
) -> list[Design]:
    """All (v,k,lambda) designs over g whose blocks are difference sets,
    as unordered block multisets (each found exactly once).

    With ``collect``, each solution is passed to it as a sorted tuple of
    candidate indices instead of being accumulated (for streaming callers).
    """
    v, k, lam = params.v, params.k, params.lam
    if candidates is None:
        candidates = enumerate_difference_sets(g, k, lam)
    if not candidates:
        return []
    blocks = [tuple(d.elements) for d in candidates]
    # pairs are compressed to ranks so compatibility is one mask intersection
    pair_ids = sorted({b[i] * v + b[j] for b in blocks for i in range(k) for j in range(i + 1, k)})
    pair_rank = {p: r for r, p in enumerate(pair_ids)}
    n_ranked = len(pair_ids)
    block_pairs: list[tuple[int, ...]] = []
    block_mask: list[int] = []
    for b in blocks:
        ranks = tuple(
            pair_rank[b[i] * v + b[j]] for i in range(k) for j in range(i + 1, k)
        )
        block_pairs.append(ranks)
        mask = 0
        for r in ranks:
            mask |= 1 << r
        block_mask.append(mask)
    if n_ranked != v * (v - 1) // 2:
        return []  # some point pair is covered by no candidate block
    by_pair_mask: dict[int, int] = {r: 0 for r in range(n_ranked)}
    for idx, ranks in enumerate(block_pairs):
        for r in ranks:
            by_pair_mask[r] |= 1 << idx
    # in a symmetric design any two blocks meet in exactly lambda points, so
    # candidates pairwise compatible with everything chosen are tracked in a
    # bitmask; together with a count bound this prunes most dead branches
    elem_mask = [0] * len(blocks)
    for idx, b in enumerate(blocks):
        m = 0
        for x in b:
            m |= 1 << x
        elem_mask[idx] = m
    adj = [0] * len(blocks)
    for i in range(len(blocks)):
        mi = elem_mask[i]
        acc = 0
        for j in range(len(blocks)):
            if i != j and (mi & elem_mask[j]).bit_count() == lam:
                acc |= 1 << j
        adj[i] = acc
    counts = [0] * n_ranked
    chosen: list[int] = []
    out: list[Design] = []
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    state = {"ticker": 0}

    def emit() -> None:
        if len(chosen) != v:
            raise ConstructionBugError("coverage complete with wrong block count")
        sol = tuple(sorted(chosen))
        if collect is not None:
            collect(sol)
        else:
            out.append(tuple(sorted(blocks[i] for i in sol)))

    def rec(scan_from: int, run_pair: int, min_idx: int, full: int, allowed: int) -> None:
        state["ticker"] += 1
        if (
            deadline is not None
            and state["ticker"] % 4096 == 0
            and time.monotonic() > deadline
        ):
            raise ResourceLimitError("design search time budget exceeded")
        pos = scan_from
        while pos < n_ranked and counts[pos] == lam:
            pos += 1
        if pos == n_ranked:
            emit()
            return
        cands = by_pair_mask[pos] & allowed
        if pos == run_pair and min_idx:
            cands &= -(1 << min_idx)
        need = v - len(chosen)
        while cands:
            low = cands & -cands
            cands ^= low
            idx = low.bit_length() - 1
            if block_mask[idx] & full:
                continue
            new_allowed = allowed & adj[idx]
            if new_allowed.bit_count() < need - 1:
                continue
            new_full = full
            for q in block_pairs[idx]:
                c = counts[q] + 1
                counts[q] = c
                if c == lam:
                    new_full |= 1 << q
            chosen.append(idx)
            rec(pos, pos, idx + 1, new_full, new_allowed)
            chosen.pop()
            for q in block_pairs[idx]:
                counts[q] -= 1

    rec(0, -1, 0, 0, (1 << len(blocks)) - 1)
    return out


# -- orbit dedup of found designs ------------------------------------------------


def _design_moves(g: FiniteGroup, candidates: Sequence[tuple[int, ...]]) -> list[np.ndarray]:
    """Permutations of the candidate-block index set induced by Aut(G)
    generators and left/right translations by group generators.

    Designs in one orbit of these moves yield paratopic cubes, so orbit
    representatives suffice for classification by certificate.
    """
    index = {frozenset(b): i for i, b in enumerate(candidates)}
    moves = []

    def add(point_map):
        arr = np.empty(len(candidates), dtype=np.int64)
        for i, b in enumerate(candidates):
            img = frozenset(point_map[x] for x in b)
            j = index.get(img)
            if j is None:
                raise ConstructionBugError("candidate set is not closed under the action")
            arr[i] = j
        moves.append(arr)

    for phi in automorphism_generators(g):
        add(phi.images)
    for a in g.generating_sequence():
        add(g.table[a])  # left translation
        add([g.table[x][a] for x in range(g.order)])  # right translation
    return moves


def _orbit_representatives(
    solutions: Sequence[tuple[int, ...]], moves: Sequence[np.ndarray]
) -> list[tuple[int, ...]]:
    """One representative per orbit of solutions (as sorted index tuples)."""
    index = set(solutions)
    seen: set[tuple[int, ...]] = set()
    reps = []
    for sol in sorted(index):
        if sol in seen:
            continue
        reps.append(sol)
        orbit = {sol}
        queue = [sol]
        while queue:
            cur = queue.pop()
            for mv in moves:
                img = tuple(sorted(int(mv[i]) for i in cur))
                if img not in orbit:
                    if img not in index:
                        raise ConstructionBugError("design orbit left the solution set")
                    orbit.add(img)
                    queue.append(img)
        seen |= orbit
    return reps


# -- seeded certificates -----------------------------------------------------------


def _group_cube_seeds(g: FiniteGroup, n: int) -> list[tuple[int, ...]]:
    """Point permutations of the transversal representation fixing any
    group cube over g: the embedded copies of G on axes 2..n."""
    v = g.order
    seeds = []
    for a in g.generating_sequence():
        ia = g.inv(a)
        for pos in range(1, n - 1):
            perms = [id_perm(v)] * n
            perms[pos] = tuple(g.table[x][ia] for x in range(v))
            perms[pos + 1] = tuple(g.table[a])
            w = ParatopyElement(tuple(perms), id_perm(n))
            seeds.append(paratopy_to_point_perm(w, n, v))
    return seeds


def build_seeded_cube_certificate(c: Cube, seeds: Sequence[tuple[int, ...]] = ()) -> bytes:
    """Uncolored cube certificate, seeding the canonicalizer with known
    automorphisms (given as transversal point permutations)."""
    from .equivalence import _cube_certificate_seeded

    return _cube_certificate_seeded(c, "uncolored", seeds)


def difference_cube_reference(
    groups: Sequence[FiniteGroup], params: DesignParams, n: int = 3
) -> dict[bytes, tuple[str, tuple[int, ...]]]:
    """Certificates of the difference n-cubes from every difference-set
    class of the given groups: cert -> (group name, class representative)."""
    from .cubes import difference_cube
    from .equivalence import theoretical_autotopies

    out: dict[bytes, tuple[str, tuple[int, ...]]] = {}
    for g in groups:
        classes = difference_sets_up_to_equivalence(g, params.k, params.lam)
        for rep in classes:
            cube = difference_cube(g, rep, n)
            seeds = [
                paratopy_to_point_perm(w, n, g.order)
                for w in theoretical_autotopies(g, rep, n)
            ]
            cert = build_seeded_cube_certificate(cube, seeds)
            out.setdefault(cert, (g.name or f"order{g.order}", rep.elements))
    return out


# -- classification ----------------------------------------------------------------


@dataclass
class GroupCubeClassification:
    group_name: str
    params: DesignParams
    nds: int
    ndc: int
    dev_classes: list[str]
    tds: int
    ngc: int
    design_count: int
    orbit_rep_count: int
    difference_certs: list[bytes] = field(repr=False, default_factory=list)
    non_difference_certs: list[bytes] = field(repr=False, default_factory=list)

    @property
    def all_certs(self) -> list[bytes]:
        return sorted(self.difference_certs + self.non_difference_certs)


def classify_group_cubes(
    g: FiniteGroup,
    params: DesignParams,
    reference: dict[bytes, tuple] | None = None,
    time_budget: float | None = None,
) -> GroupCubeClassification:
    """Classify the 3-cubes of designs over g with all blocks difference
    sets: counts of difference sets (total and up to equivalence), their
    developments' catalog names, and inequivalent cubes split into
    difference cubes and the rest.

    ``reference`` maps difference-cube certificates to provenance and should
    cover all groups of the relevant order (certificates of cubes equivalent
    to a difference cube over *any* group count as difference cubes); when
    omitted, this group's own difference cubes are used.
    """
    catalog = reference_catalog()
    all_sets = enumerate_difference_sets(g, params.k, params.lam)
    tds = len(all_sets)
    classes = difference_sets_up_to_equivalence(g, params.k, params.lam, all_sets)
    nds = len(classes)
    if reference is None:
        reference = difference_cube_reference([g], params)
    own_dc_certs = set()
    dev_names = set()
    for rep in classes:
        from .cubes import difference_cube
        from .designs import design_class
        from .equivalence import theoretical_autotopies

        seeds = [
            paratopy_to_point_perm(w, 3, g.order)
            for w in theoretical_autotopies(g, rep, 3)
        ]
        own_dc_certs.add(build_seeded_cube_certificate(difference_cube(g, rep, 3), seeds))
        name = design_class(development(rep), catalog).name
        dev_names.add(name if name is not None else "?")
    ndc = len(own_dc_certs)
    index_solutions: list[tuple[int, ...]] = []
    find_ds_block_designs(
        g, params, all_sets, time_budget=time_budget, collect=index_solutions.append
    )
    candidates = [tuple(d.elements) for d in all_sets]
    if index_solutions:
        moves = _design_moves(g, candidates)
        reps = _orbit_representatives(index_solutions, moves)
    else:
        reps = []
    seeds = _group_cube_seeds(g, 3)
    diff_certs: set[bytes] = set()
    nondiff_certs: set[bytes] = set()
    for rep in reps:
        cube = group_cube(g, [candidates[i] for i in rep], 3)
        cert = build_seeded_cube_certificate(cube, seeds)
        if cert in reference:
            diff_certs.add(cert)
        else:
            nondiff_certs.add(cert)
    if index_solutions and not own_dc_certs <= diff_certs:
        raise ConstructionBugError(
            "development cubes missing from the classified group cubes"
        )
    return GroupCubeClassification(
        group_name=g.name or f"order{g.order}",
        params=params,
        nds=nds,
        ndc=ndc,
        dev_classes=sorted(dev_names),
        tds=tds,
        ngc=len(nondiff_certs),
        design_count=len(index_solutions),
        orbit_rep_count=len(reps),
        difference_certs=sorted(diff_certs),
        non_difference_certs=sorted(nondiff_certs),
    )


# -- orbit-generated cubes -----------------------------------------------------------


@dataclass(frozen=True)
class OrbitCubeInput:
    """Permutation generators on 3v symbols preserving the three point
    classes setwise, plus base blocks (one point per class), 0-based."""

    v: int
    generators: tuple[Perm, ...]
    base_blocks: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        n_pts = 3 * self.v
        for p in self.generators:
            if len(p) != n_pts:
                raise InvalidInputError("generator degree must be 3v")
            for t in range(3):
                lo, hi = t * self.v, (t + 1) * self.v
                if any(not lo <= p[x] < hi for x in range(lo, hi)):
                    raise InvalidInputError("generators must preserve the point classes")
        for b in self.base_blocks:
            klass = sorted(x // self.v for x in b)
            if klass != [0, 1, 2]:
                raise InvalidInputError("base blocks must take one point per class")


@dataclass
class OrbitCubeResult:
    cube: Cube
    group_order: int
    block_count: int
    orbit_sizes: tuple[int, ...]


def orbit_cube(inp: OrbitCubeInput, params: DesignParams | None = None) -> OrbitCubeResult:
    """Close the base blocks under the generated group, validate the union
    as a transversal representation, and convert it to a cube."""
    v = inp.v
    blocks: set[tuple[int, ...]] = set()
    orbit_sizes = []
    for base in inp.base_blocks:
        orbit = {tuple(sorted(base))}
        queue = [tuple(sorted(base))]
        while queue:
            cur = queue.pop()
            for p in inp.generators:
                img = tuple(sorted(p[x] for x in cur))
                if img not in orbit:
                    orbit.add(img)
                    queue.append(img)
        orbit_sizes.append(len(orbit))
        blocks |= orbit
    if params is None:
        k_num = len(blocks)
        if k_num % (v * v) != 0:
            raise NotACubeError(
                f"total block count {k_num} is not a multiple of v^2", "block-count"
            )
        k = k_num // (v * v)
        lam = k * (k - 1) // (v - 1)
        params = DesignParams(v, k, lam)
    rep = TransversalRep(n=3, v=v, k=params.k, blocks=tuple(sorted(blocks)))
    validate_transversal(rep)
    cube = from_transversal(rep, params)
    order = PermGroup(inp.generators, 3 * v).order()
    return OrbitCubeResult(
        cube=cube, group_order=order, block_count=len(blocks), orbit_sizes=tuple(orbit_sizes)
    )


def is_group_cube(
    c: Cube,
    reference_certs: Iterable[bytes],
    reference_complete: bool = True,
) -> bool:
    """Whether c is equivalent to a group cube, via the reference list of
    group-cube certificates.

    A shortcut handles the decidedly-negative case first: a 3-cube from the
    group construction has all slices isomorphic to one design in the two
    directions that vary the block axis, so a cube with mixed design classes
    in all three directions is not equivalent to any group cube.
    """
    if c.n == 3:
        inv = slice_invariant(c)
        mixed = [len(set(inner)) > 1 for inner in inv.classes]
        uniform_certs = {inner[0] for inner, m in zip(inv.classes, mixed) if not m}
        if sum(not m for m in mixed) < 2 or (
            sum(not m for m in mixed) == 2 and len(uniform_certs) != 1
        ):
            return False
    cert = cube_certificate(c, "uncolored").bytes_
    member = cert in set(reference_certs)
    if not member and not reference_complete:
        import warnings

        warnings.warn(
            "cube certificate not found, but the reference list is not "
            "certified complete; the negative answer may be unsound",
            stacklevel=2,
        )
    return member