"""Equivalence of cubes via their transversal-design representation.

A cube C corresponds to the incidence structure on n*v points (class t holds
the values of axis t, offset by t*v) whose blocks are the class-offset
supports of the 1-cells.  Structure isomorphisms with all point classes
colored alike decide paratopy; coloring each class separately decides
isotopy.  Automorphism groups of the structure translate back to autotopy
and autoparatopy groups of the cube.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .canon import CanonResult, canonicalize
from .cubes import Cube, ParatopyElement, apply_paratopy
from .designs import DesignParams
from .errors import ConstructionBugError, InvalidInputError, NotACubeError
from .groups import DifferenceSet, FiniteGroup, multipliers as _multipliers
from .perms import PermGroup, identity as id_perm, inverse as perm_inverse

__all__ = [
    "TransversalRep",
    "CanonicalCertificate",
    "AutomorphismReport",
    "to_transversal",
    "from_transversal",
    "cube_certificate",
    "canonical_certificate",
    "are_paratopic",
    "are_isotopic",
    "paratopy_witness",
    "autotopy_report",
    "autoparatopy_report",
    "theoretical_autotopies",
    "isotopy_group_order",
    "validate_transversal",
]


@dataclass(frozen=True)
class TransversalRep:
    """Transversal-design encoding of a cube: one block per 1-cell."""

    n: int
    v: int
    k: int
    blocks: tuple[tuple[int, ...], ...]  # class-offset point ids, 0-based

    @property
    def n_points(self) -> int:
        return self.n * self.v

    def classes(self) -> list[range]:
        return [range(t * self.v, (t + 1) * self.v) for t in range(self.n)]


@dataclass(frozen=True)
class CanonicalCertificate:
    bytes_: bytes
    mode: str  # "colored" or "uncolored"

    def hex(self) -> str:
        return self.bytes_.hex()


@dataclass(frozen=True)
class AutomorphismReport:
    generators: tuple[ParatopyElement, ...]
    order: int
    complete: bool = True


def to_transversal(c: Cube) -> TransversalRep:
    ones = np.argwhere(c.bits)
    offsets = np.arange(c.n, dtype=np.int64) * c.v
    blocks = ones + offsets
    return TransversalRep(
        n=c.n,
        v=c.v,
        k=c.params.k,
        blocks=tuple(tuple(int(x) for x in row) for row in blocks),
    )


def from_transversal(t: TransversalRep, params: DesignParams | None = None) -> Cube:
    v, n = t.v, t.n
    bits = np.zeros((v,) * n, dtype=np.uint8)
    offsets = np.arange(n, dtype=np.int64) * v
    for b in t.blocks:
        coords = np.sort(np.asarray(b)) - offsets
        if (coords < 0).any() or (coords >= v).any():
            raise NotACubeError("block is not a transversal of the classes", "transversal")
        bits[tuple(int(x) for x in coords)] = 1
    if params is None:
        k = t.k
        lam = k * (k - 1) // (v - 1) if v > 1 else k
        params = DesignParams(v, k, lam)
    return Cube(bits, params)


def validate_transversal(t: TransversalRep) -> None:
    """Check the three representation invariants, raising NotACubeError with
    the first violated constraint."""
    v, n, k = t.v, t.n, t.k
    if len(t.blocks) != k * v ** (n - 1):
        raise NotACubeError(
            f"block count {len(t.blocks)} differs from k*v^(n-1) = {k * v ** (n - 1)}",
            "block-count",
        )
    if len(set(t.blocks)) != len(t.blocks):
        raise NotACubeError("repeated block", "block-count")
    for b in t.blocks:
        klass = sorted(x // v for x in b)
        if klass != list(range(n)):
            raise NotACubeError(f"block {b} is not a transversal", "transversal")
    cube = from_transversal(t)
    bits = cube.bits.astype(np.int64)
    for axis in range(n):
        sums = bits.sum(axis=axis)
        if not (sums == k).all():
            raise NotACubeError(
                f"orthogonal-array strength fails on axes without {axis}", "oa-strength"
            )
    from .cubes import verify_cube

    if not verify_cube(cube):
        raise NotACubeError("a slice violates the design equation", "lambda-condition")


def _point_colors(n: int, v: int, mode: str) -> list[int]:
    if mode == "colored":
        return [t for t in range(n) for _ in range(v)]
    if mode == "uncolored":
        return [0] * (n * v)
    raise InvalidInputError(f"unknown mode {mode!r}")


def _canonicalize_cube(c: Cube, mode: str) -> CanonResult:
    t = to_transversal(c)
    return canonicalize(t.n_points, t.blocks, _point_colors(c.n, c.v, mode))


def cube_certificate(c: Cube, mode: str = "uncolored") -> CanonicalCertificate:
    res = _canonicalize_cube(c, mode)
    head = struct.pack(
        "<5I", c.n, c.v, c.params.k, c.params.lam, 0 if mode == "uncolored" else 1
    )
    return CanonicalCertificate(head + res.certificate, mode)


def canonical_certificate(t: TransversalRep, mode: str = "uncolored") -> CanonicalCertificate:
    """Certificate of a transversal representation directly."""
    res = canonicalize(t.n_points, t.blocks, _point_colors(t.n, t.v, mode))
    lam = t.k * (t.k - 1) // (t.v - 1) if t.v > 1 else t.k
    head = struct.pack("<5I", t.n, t.v, t.k, lam, 0 if mode == "uncolored" else 1)
    return CanonicalCertificate(head + res.certificate, mode)


def _check_shapes(c1: Cube, c2: Cube) -> None:
    if c1.n != c2.n or c1.v != c2.v or c1.params != c2.params:
        raise InvalidInputError("cubes differ in dimension, order, or parameters")


def are_paratopic(c1: Cube, c2: Cube) -> bool:
    _check_shapes(c1, c2)
    if c1.n == 2:
        from .designs import IncidenceMatrix, design_class

        a1 = design_class(IncidenceMatrix(c1.bits, c1.params))
        a2 = design_class(IncidenceMatrix(c2.bits, c2.params))
        return a1.certificate == a2.certificate
    return cube_certificate(c1, "uncolored").bytes_ == cube_certificate(c2, "uncolored").bytes_


def are_isotopic(c1: Cube, c2: Cube) -> bool:
    _check_shapes(c1, c2)
    return cube_certificate(c1, "colored").bytes_ == cube_certificate(c2, "colored").bytes_


def paratopy_to_point_perm(w: ParatopyElement, n: int, v: int) -> tuple[int, ...]:
    """The permutation of the n*v transversal points induced by a paratopy:
    point (t, x) maps to (gamma^{-1}(t), alpha_{gamma^{-1}(t)}(x))."""
    gamma_inv = perm_inverse(w.axis_perm)
    out = [0] * (n * v)
    for t in range(n):
        t2 = gamma_inv[t]
        alpha = w.perms[t2]
        for x in range(v):
            out[t * v + x] = t2 * v + alpha[x]
    return tuple(out)


def _cube_certificate_seeded(c: Cube, mode: str, seeds) -> bytes:
    t = to_transversal(c)
    res = canonicalize(
        t.n_points, t.blocks, _point_colors(c.n, c.v, mode), known_automorphisms=seeds
    )
    head = struct.pack(
        "<5I", c.n, c.v, c.params.k, c.params.lam, 0 if mode == "uncolored" else 1
    )
    return head + res.certificate


def _witness_from_point_map(n: int, v: int, point_map: np.ndarray) -> ParatopyElement:
    """Translate a class-respecting point bijection into a paratopy."""
    tau = [-1] * n
    value_maps = [[-1] * v for _ in range(n)]
    for t in range(n):
        for i in range(v):
            img = int(point_map[t * v + i])
            t2, i2 = divmod(img, v)
            if tau[t] == -1:
                tau[t] = t2
            elif tau[t] != t2:
                raise ConstructionBugError("point map does not respect classes")
            value_maps[t][i] = i2
    gamma = perm_inverse(tuple(tau))
    perms = tuple(tuple(value_maps[gamma[s]]) for s in range(n))
    return ParatopyElement(perms, gamma)


def paratopy_witness(c1: Cube, c2: Cube, mode: str = "uncolored") -> ParatopyElement | None:
    """An explicit paratopy mapping c1 onto c2, or None if inequivalent.

    The witness is recovered from the two canonical labelings and verified
    by applying it before returning.
    """
    _check_shapes(c1, c2)
    if c1.n < 3:
        raise InvalidInputError("witness recovery requires dimension >= 3")
    res1 = _canonicalize_cube(c1, mode)
    res2 = _canonicalize_cube(c2, mode)
    if res1.certificate != res2.certificate:
        return None
    lab1 = np.asarray(res1.point_labeling)
    lab2 = np.asarray(res2.point_labeling)
    inv2 = np.empty_like(lab2)
    inv2[lab2] = np.arange(len(lab2))
    point_map = inv2[lab1]  # c1 point -> c2 point
    w = _witness_from_point_map(c1.n, c1.v, point_map)
    if apply_paratopy(c1, w) != c2:
        raise ConstructionBugError("recovered witness does not map c1 to c2")
    return w


def _report(c: Cube, mode: str, time_budget: float | None) -> AutomorphismReport:
    t = to_transversal(c)
    res = canonicalize(
        t.n_points, t.blocks, _point_colors(c.n, c.v, mode), time_budget=time_budget
    )
    gens = []
    for g in res.aut_point_gens:
        w = _witness_from_point_map(c.n, c.v, np.asarray(g))
        if apply_paratopy(c, w) != c:
            raise ConstructionBugError("automorphism generator does not fix the cube")
        gens.append(w)
    return AutomorphismReport(tuple(gens), res.aut_order, complete=res.complete)


def autotopy_report(c: Cube, time_budget: float | None = None) -> AutomorphismReport:
    """Generators and exact order of the autotopy group Atop(C).

    With a time budget, a partial report flagged incomplete may be returned;
    its order is then the order of the subgroup found so far.
    """
    return _report(c, "colored", time_budget)


def autoparatopy_report(c: Cube, time_budget: float | None = None) -> AutomorphismReport:
    """Generators and exact order of the autoparatopy group Apar(C)."""
    return _report(c, "uncolored", time_budget)


# -- the theoretical autotopy subgroup of difference cubes ---------------------


def theoretical_autotopies(g: FiniteGroup, d: DifferenceSet, n: int) -> list[ParatopyElement]:
    """Generators of the autotopy subgroup G^(n-1) x| Mult(D) of the
    difference cube, as explicit paratopies (verified before returning)."""
    from .cubes import difference_cube

    cube = difference_cube(g, d, n)
    v = g.order
    ident = id_perm(v)
    out: list[ParatopyElement] = []

    def left_mult(a: int):
        return tuple(g.table[a])

    def right_mult_inv(a: int):
        ia = g.inv(a)
        return tuple(g.table[x][ia] for x in range(v))

    for a in g.generating_sequence():
        for pos in range(n - 1):
            perms = [ident] * n
            perms[pos] = right_mult_inv(a)  # i -> index of g_i a^{-1}
            perms[pos + 1] = left_mult(a)  # i -> index of a g_i
            out.append(ParatopyElement(tuple(perms), id_perm(n)))

    for mult in _multipliers(d):
        phi = mult.map.images
        ia = g.inv(mult.translate)
        first = tuple(g.table[ia][phi[i]] for i in range(v))  # i -> a^{-1} phi(g_i)
        perms = (first,) + tuple(phi for _ in range(n - 1))
        out.append(ParatopyElement(perms, id_perm(n)))

    for w in out:
        if apply_paratopy(cube, w) != cube:
            raise ConstructionBugError("theoretical autotopy does not fix the cube")
    return out


def isotopy_group_order(elements: Sequence[ParatopyElement], n: int, v: int) -> int:
    """Order of the group generated by pure isotopies, via their action on
    the n*v class-offset points."""
    gens = []
    for e in elements:
        if tuple(e.axis_perm) != tuple(range(n)):
            raise InvalidInputError("only pure isotopies act on points classwise")
        perm = []
        for t in range(n):
            perm.extend(t * v + e.perms[t][i] for i in range(v))
        gens.append(tuple(perm))
    return PermGroup(gens, n * v).order()
