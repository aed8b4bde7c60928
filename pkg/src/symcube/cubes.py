"""n-dimensional incidence cubes and their operations.

A cube of order v and dimension n is a {0,1}-valued array on {0..v-1}^n all
of whose 2-dimensional slices are incidence matrices of one (v,k,lambda)
design parameter set.  Axes and values are 0-based throughout the API; file
formats convert at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .designs import DesignParams, IncidenceMatrix, design_class, verify_design
from .errors import ConstructionBugError, InvalidInputError
from .groups import DifferenceSet, FiniteGroup, is_difference_set
from .perms import Perm, compose as perm_compose, identity as id_perm, inverse as perm_inverse

__all__ = [
    "Cube",
    "SliceSpec",
    "ParatopyElement",
    "SliceInvariant",
    "slice_matrix",
    "verify_cube",
    "difference_cube",
    "group_cube",
    "apply_paratopy",
    "random_paratopy",
    "is_totally_symmetric",
    "slice_invariant",
    "weak_slice_invariant",
    "latin_square_to_cube",
    "to_hadamard",
    "hadamard_slice_checks",
]

MAX_CELLS = 1 << 28


class Cube:
    """Immutable n-dimensional 0/1 array tagged with design parameters."""

    __slots__ = ("bits", "params")

    def __init__(self, bits: np.ndarray, params: DesignParams):
        arr = np.ascontiguousarray(np.asarray(bits, dtype=np.uint8))
        if arr.ndim < 2:
            raise InvalidInputError("cube dimension must be at least 2")
        if len(set(arr.shape)) != 1:
            raise InvalidInputError("all axes must have equal length")
        if arr.size > MAX_CELLS:
            raise InvalidInputError("cube exceeds the in-memory cell budget")
        if not np.isin(arr, (0, 1)).all():
            raise InvalidInputError("entries must be 0 or 1")
        arr.setflags(write=False)
        self.bits = arr
        self.params = params

    @property
    def n(self) -> int:
        return self.bits.ndim

    @property
    def v(self) -> int:
        return self.bits.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Cube) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.bits.shape, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"Cube(n={self.n}, v={self.v}, params={self.params})"


@dataclass(frozen=True)
class SliceSpec:
    """Axis pair (x, y) plus fixed values for the remaining axes, in
    increasing axis order.  All indices 0-based."""

    x: int
    y: int
    fixed: tuple[int, ...]

    def validate(self, n: int, v: int) -> None:
        if not (0 <= self.x < n and 0 <= self.y < n) or self.x == self.y:
            raise InvalidInputError(f"slice axes must be distinct and in 0..{n-1}")
        if len(self.fixed) != n - 2 or any(not 0 <= f < v for f in self.fixed):
            raise InvalidInputError("fixed coordinates out of range")


@dataclass(frozen=True)
class ParatopyElement:
    """A paratopy: value permutations per axis plus an axis permutation.

    Applying to a cube performs the conjugation (axis permutation) first and
    the isotopy (value permutations) second.
    """

    perms: tuple[Perm, ...]
    axis_perm: Perm

    def __post_init__(self):
        n = len(self.axis_perm)
        if len(self.perms) != n:
            raise InvalidInputError("need one value permutation per axis")

    @classmethod
    def identity(cls, n: int, v: int) -> "ParatopyElement":
        return cls(tuple(id_perm(v) for _ in range(n)), id_perm(n))

    def inverse(self) -> "ParatopyElement":
        gamma_inv = perm_inverse(self.axis_perm)
        perms = tuple(perm_inverse(self.perms[gamma_inv[t]]) for t in range(len(self.perms)))
        return ParatopyElement(perms, gamma_inv)

    def compose(self, other: "ParatopyElement") -> "ParatopyElement":
        """self after other, so apply(c, self.compose(other)) equals
        apply(apply(c, other), self)."""
        beta, delta = self.perms, self.axis_perm
        alpha, gamma = other.perms, other.axis_perm
        zeta = tuple(gamma[delta[t]] for t in range(len(delta)))
        eps = tuple(perm_compose(beta[t], alpha[delta[t]]) for t in range(len(delta)))
        return ParatopyElement(eps, zeta)


def slice_matrix(c: Cube, spec: SliceSpec) -> IncidenceMatrix:
    """The (x, y)-slice: M[i][j] = C(..., i at x, ..., j at y, ...)."""
    spec.validate(c.n, c.v)
    rest = [t for t in range(c.n) if t not in (spec.x, spec.y)]
    idx: list = [0] * c.n
    for axis, val in zip(rest, spec.fixed):
        idx[axis] = val
    idx[spec.x] = slice(None)
    idx[spec.y] = slice(None)
    plane = c.bits[tuple(idx)]
    if spec.x > spec.y:
        plane = plane.T
    return IncidenceMatrix(plane.copy(), c.params)


def _slice_stack(bits: np.ndarray, x: int, y: int) -> np.ndarray:
    """All (x, y)-slices as an array of shape (v^(n-2), v, v)."""
    n = bits.ndim
    v = bits.shape[0]
    moved = np.moveaxis(bits, (x, y), (n - 2, n - 1))
    return moved.reshape(-1, v, v)


def verify_cube(c: Cube) -> bool:
    """Check every slice (one orientation per unordered axis pair)."""
    p = c.params
    if c.v != p.v:
        return False
    target = (p.k - p.lam) * np.eye(c.v, dtype=np.int64) + p.lam
    for x, y in combinations(range(c.n), 2):
        stack = _slice_stack(c.bits, x, y).astype(np.int64)
        prod = stack @ stack.transpose(0, 2, 1)
        if not (prod == target).all():
            return False
        if not (stack.sum(axis=1) == p.k).all() or not (stack.sum(axis=2) == p.k).all():
            return False
    return True


def difference_cube(g: FiniteGroup, d: DifferenceSet, n: int) -> Cube:
    """C(i_1,...,i_n) = [g_{i_1} ... g_{i_n} in D]."""
    if n < 2:
        raise InvalidInputError("cube dimension must be at least 2")
    v = g.order
    if v**n > MAX_CELLS:
        raise InvalidInputError("cube exceeds the in-memory cell budget")
    table = np.array(g.table, dtype=np.int64)
    prod = np.arange(v, dtype=np.int64)
    for _ in range(n - 1):
        # prod[idx, j] = product-so-far * g_j
        prod = table[prod]
    member = np.zeros(v, dtype=np.uint8)
    member[list(d.elements)] = 1
    return Cube(member[prod], DesignParams(*d.params))


def group_cube(g: FiniteGroup, blocks: Sequence[Iterable[int]], n: int) -> Cube:
    """C(i_1,...,i_n) = [g_{i_2} ... g_{i_n} in B_{i_1}] for a design whose
    blocks are all difference sets."""
    if n < 2:
        raise InvalidInputError("cube dimension must be at least 2")
    v = g.order
    block_sets = [frozenset(b) for b in blocks]
    if len(block_sets) != v:
        raise InvalidInputError(f"invalid-input: need {v} blocks, got {len(block_sets)}")
    k = len(block_sets[0])
    lam = k * (k - 1) // (v - 1) if v > 1 else k
    for idx, b in enumerate(block_sets):
        if not is_difference_set(g, b, lam):
            raise InvalidInputError(f"invalid-input: block {idx} is not a difference set")
    mat = np.zeros((v, v), dtype=np.uint8)
    for j, b in enumerate(block_sets):
        mat[list(b), j] = 1
    params = DesignParams(v, k, lam)
    if not verify_design(IncidenceMatrix(mat), params):
        raise InvalidInputError("invalid-input: blocks do not form a symmetric design")
    if v ** n > MAX_CELLS:
        raise InvalidInputError("cube exceeds the in-memory cell budget")
    table = np.array(g.table, dtype=np.int64)
    prod = np.arange(v, dtype=np.int64)
    for _ in range(n - 2):
        prod = table[prod]
    # prod has shape (v,)*(n-1): the product g_{i_2} ... g_{i_n}
    member = np.ascontiguousarray(mat.T)  # member[i, x] = [g_x in B_i]
    bits = member[:, prod]
    return Cube(bits, params)


def apply_paratopy(c: Cube, p: ParatopyElement) -> Cube:
    if len(p.axis_perm) != c.n or any(len(q) != c.v for q in p.perms):
        raise InvalidInputError("dimension mismatch between cube and paratopy")
    conjugated = np.transpose(c.bits, axes=p.axis_perm)
    gathers = tuple(np.asarray(perm_inverse(q)) for q in p.perms)
    return Cube(conjugated[np.ix_(*gathers)], c.params)


def random_paratopy(rng, n: int, v: int) -> ParatopyElement:
    perms = tuple(tuple(rng.sample(range(v), v)) for _ in range(n))
    gamma = tuple(rng.sample(range(n), n))
    return ParatopyElement(perms, gamma)


def is_totally_symmetric(c: Cube) -> bool:
    """True iff every conjugation fixes the cube (adjacent transpositions
    suffice since they generate the symmetric group)."""
    for t in range(c.n - 1):
        if not np.array_equal(c.bits, np.swapaxes(c.bits, t, t + 1)):
            return False
    return True


# -- slice invariants ---------------------------------------------------------


@dataclass(frozen=True)
class SliceInvariant:
    """Multiset over parallel classes of the multiset of the v slice classes.

    ``classes`` holds one sorted tuple of slice identifiers per parallel
    class, the outer tuple sorted; identifiers are design certificates
    (or automorphism orders for the weak variant).
    """

    classes: tuple[tuple, ...]

    def rendered(self, names: dict | None = None) -> str:
        """Human-readable form like ``{ {D1^16}^1, {D2^16}^2 }``."""
        rendered_inner = []
        for inner in self.classes:
            counts: dict = {}
            for ident in inner:
                counts[ident] = counts.get(ident, 0) + 1
            parts = []
            for ident in sorted(counts, key=lambda s: (names.get(s, "") if names else "", s)):
                label = names.get(ident, ident.hex()[:8] if isinstance(ident, bytes) else str(ident)) if names else (
                    ident.hex()[:8] if isinstance(ident, bytes) else str(ident)
                )
                parts.append(f"{label}^{counts[ident]}")
            rendered_inner.append("{" + ",".join(parts) + "}")
        outer: dict = {}
        for s in rendered_inner:
            outer[s] = outer.get(s, 0) + 1
        body = ", ".join(f"{s}^{m}" for s, m in sorted(outer.items()))
        return "{ " + body + " }"


@lru_cache(maxsize=65536)
def _design_class_cached(key: bytes, v: int):
    bits = np.frombuffer(key, dtype=np.uint8).reshape(v, v)
    return design_class(IncidenceMatrix(bits))


def cached_design_class(m: IncidenceMatrix):
    return _design_class_cached(m.bits.tobytes(), m.v)


def _parallel_classes(c: Cube):
    """Yield lists of v slice matrices, one list per parallel class."""
    n, v = c.n, c.v
    for x, y in combinations(range(n), 2):
        rest = [t for t in range(n) if t not in (x, y)]
        for vary_pos in range(len(rest)):
            others = rest[:vary_pos] + rest[vary_pos + 1 :]
            for fixed_vals in product(range(v), repeat=len(others)):
                group = []
                for z in range(v):
                    fixed = [0] * (n - 2)
                    fixed[vary_pos] = z
                    for pos, val in zip(
                        [i for i in range(len(rest)) if i != vary_pos], fixed_vals
                    ):
                        fixed[pos] = val
                    group.append(slice_matrix(c, SliceSpec(x, y, tuple(fixed))))
                yield group


def slice_invariant(c: Cube, catalog=None) -> SliceInvariant:
    """The paratopy invariant built from design certificates of parallel
    slices; deterministic: inner multisets sorted, outer multiset sorted."""
    if c.n < 3:
        raise InvalidInputError("slice invariant requires dimension >= 3")
    inner_sets = []
    for group in _parallel_classes(c):
        certs = tuple(sorted(cached_design_class(m).certificate for m in group))
        inner_sets.append(certs)
    expected = math.comb(c.n, 2) * (c.n - 2) * c.v ** (c.n - 3)
    if len(inner_sets) != expected:
        raise ConstructionBugError("parallel class count mismatch")
    return SliceInvariant(tuple(sorted(inner_sets)))


def weak_slice_invariant(c: Cube) -> SliceInvariant:
    """Same shape as slice_invariant with automorphism orders as entries."""
    if c.n < 3:
        raise InvalidInputError("slice invariant requires dimension >= 3")
    inner_sets = []
    for group in _parallel_classes(c):
        orders = tuple(sorted(cached_design_class(m).aut_order for m in group))
        inner_sets.append(orders)
    return SliceInvariant(tuple(sorted(inner_sets)))


def latin_square_to_cube(square: Sequence[Sequence[int]]) -> Cube:
    """C(i1, i2, i3) = [square[i1][i2] == i3]; symbols are 0..v-1."""
    arr = np.asarray(square, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError("not-a-Latin-square: must be square")
    v = arr.shape[0]
    symbols = set(range(v))
    for i in range(v):
        if set(arr[i].tolist()) != symbols or set(arr[:, i].tolist()) != symbols:
            raise InvalidInputError("not-a-Latin-square: repeated symbol in a line")
    bits = np.zeros((v, v, v), dtype=np.uint8)
    i1, i2 = np.meshgrid(np.arange(v), np.arange(v), indexing="ij")
    bits[i1, i2, arr] = 1
    return Cube(bits, DesignParams(v, 1, 0))


def _menon_u(params: DesignParams) -> int | None:
    u = math.isqrt(params.v // 4) if params.v % 4 == 0 else 0
    if u and (params.v, params.k, params.lam) == (4 * u * u, 2 * u * u - u, u * u - u):
        return u
    return None


def to_hadamard(c: Cube) -> np.ndarray:
    """Exchange 0 -> -1; valid only for Menon parameters (4u^2, 2u^2-u, u^2-u)."""
    if _menon_u(c.params) is None:
        raise InvalidInputError(f"invalid-params: {c.params} is not of Menon type")
    return (2 * c.bits.astype(np.int64) - 1).astype(np.int8)


def hadamard_certificate(h: np.ndarray) -> bytes:
    """Canonical form of a Hadamard matrix under signed row/column
    permutations (monomial equivalence, transpose not included).

    Rows and columns are doubled into +/- copies; a signed column contains
    the row copies agreeing with it in sign.  Matrix equivalence coincides
    with isomorphism of this point/block structure: row pairs are recoverable
    because +/- copies of one row never share a block while any other two
    row copies do.
    """
    from .canon import canonicalize

    arr = np.asarray(h, dtype=np.int64)
    v = arr.shape[0]
    if arr.ndim != 2 or arr.shape != (v, v) or not np.isin(arr, (-1, 1)).all():
        raise InvalidInputError("expected a square +-1 matrix")
    blocks = []
    for j in range(v):
        col = arr[:, j]
        for t in (1, -1):
            blocks.append(tuple(int(i) if col[i] == t else int(v + i) for i in range(v)))
    return canonicalize(2 * v, blocks).certificate


def hadamard_slice_checks(h: np.ndarray) -> bool:
    """True iff every 2-dimensional slice H satisfies H H^t = vI (proper) and
    has constant row and column sums (totally regular)."""
    v = h.shape[0]
    n = h.ndim
    target = v * np.eye(v, dtype=np.int64)
    for x, y in combinations(range(n), 2):
        stack = np.moveaxis(h, (x, y), (n - 2, n - 1)).reshape(-1, v, v).astype(np.int64)
        if not (stack @ stack.transpose(0, 2, 1) == target).all():
            return False
        rs = stack.sum(axis=2)
        cs = stack.sum(axis=1)
        if not ((rs == rs[:, :1]).all() and (cs == cs[:, :1]).all()):
            return False
    return True
