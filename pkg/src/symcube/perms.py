"""Permutations in one-line notation (0-based tuples) and exact group orders.

Permutations on ``{0, ..., n-1}`` are stored as tuples ``p`` with ``p[i]`` the
image of ``i``.  Composition is ``compose(p, q)[i] = p[q[i]]`` (apply q first).
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_permutation(p: Sequence[int], n: int | None = None) -> bool:
    if n is not None and len(p) != n:
        return False
    return sorted(p) == list(range(len(p)))


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """p after q."""
    return tuple(p[x] for x in q)


def inverse(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_order(p: Sequence[int]) -> int:
    """Order of a permutation (lcm of cycle lengths)."""
    from math import lcm

    seen = [False] * len(p)
    out = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        out = lcm(out, length)
    return out


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int, one_based: bool = True) -> Perm:
    """Parse disjoint-cycle notation like ``(1,16)(4,5)`` into a permutation.

    Symbols may be separated by commas or spaces.  Raises ValueError on
    out-of-range or repeated symbols.
    """
    stripped = text.strip()
    if stripped in ("", "()"):
        return identity(degree)
    if not re.fullmatch(r"(\s*\([^()]*\)\s*)+", stripped):
        raise ValueError(f"malformed cycle notation: {text!r}")
    offset = 1 if one_based else 0
    image = list(range(degree))
    seen: set[int] = set()
    for cyc in _CYCLE_RE.findall(stripped):
        symbols = [s for s in re.split(r"[,\s]+", cyc.strip()) if s]
        points = [int(s) - offset for s in symbols]
        if not points:
            continue
        for x in points:
            if not 0 <= x < degree:
                raise ValueError(f"symbol {x + offset} out of range 1..{degree}")
            if x in seen:
                raise ValueError(f"symbol {x + offset} repeated in {text!r}")
            seen.add(x)
        for a, b in zip(points, points[1:]):
            image[a] = b
        image[points[-1]] = points[0]
    return tuple(image)


def format_cycles(p: Sequence[int], one_based: bool = True) -> str:
    """Disjoint-cycle string; identity renders as ``()``."""
    offset = 1 if one_based else 0
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        parts.append("(" + ",".join(str(x + offset) for x in cyc) + ")")
    return "".join(parts) if parts else "()"


class PermGroup:
    """Permutation group with a Schreier-Sims stabilizer chain.

    Each level stores the generators moving its base point; the generators of
    the group at a level are those plus every deeper level's (deeper strong
    generators fix all shallower base points).  Adding a generator reprocesses
    all Schreier generators along the affected path, so the chain is always a
    verified strong generating set and ``order`` is exact.
    """

    def __init__(self, generators: Iterable[Sequence[int]] = (), degree: int = 0):
        self.degree = degree
        self._identity = identity(degree)
        self.basepoint: int | None = None
        self.gens: list[Perm] = []  # generators moving this level's base point
        self.tree: dict[int, Perm] = {}  # orbit point -> coset representative
        self.stab: PermGroup | None = None
        for g in generators:
            self.add_generator(tuple(g))

    def generators(self) -> list[Perm]:
        if self.stab is None:
            return list(self.gens)
        return self.stab.generators() + self.gens

    def sift(self, p: Perm) -> Perm:
        """Strip p through the chain; identity residue means membership."""
        if self.basepoint is None:
            return p
        b = p[self.basepoint]
        if b == self.basepoint:
            return self.stab.sift(p)
        if b not in self.tree:
            return p
        return self.stab.sift(compose(inverse(self.tree[b]), p))

    def add_generator(self, g: Sequence[int]) -> None:
        g = tuple(g)
        if len(g) != self.degree:
            raise ValueError("generator degree mismatch")
        residue = self.sift(g)
        if residue != self._identity:
            self._add_nonmember(residue)

    def _add_nonmember(self, g: Perm) -> None:
        if self.basepoint is None:
            self.basepoint = min(i for i in range(self.degree) if g[i] != i)
            self.stab = PermGroup((), self.degree)
        if g[self.basepoint] == self.basepoint:
            self.stab._add_nonmember(g)
        else:
            self.gens.append(g)
        self._rebuild_tree()
        self._close_schreier()

    def _rebuild_tree(self) -> None:
        assert self.basepoint is not None
        gens = self.generators()
        self.tree = {self.basepoint: self._identity}
        queue = [self.basepoint]
        while queue:
            a = queue.pop(0)
            rep = self.tree[a]
            for g in gens:
                b = g[a]
                if b not in self.tree:
                    self.tree[b] = compose(g, rep)
                    queue.append(b)

    def _close_schreier(self) -> None:
        assert self.stab is not None
        for gen in self.generators():
            for a in sorted(self.tree):
                rep = self.tree[a]
                to_base = inverse(self.tree[gen[a]])
                schreier = compose(to_base, compose(gen, rep))
                if schreier != self._identity:
                    residue = self.stab.sift(schreier)
                    if residue != self._identity:
                        self.stab._add_nonmember(residue)

    # -- queries --------------------------------------------------------------

    def order(self) -> int:
        if self.basepoint is None:
            return 1
        assert self.stab is not None
        return len(self.tree) * self.stab.order()

    def __contains__(self, p: Sequence[int]) -> bool:
        return self.sift(tuple(p)) == self._identity

    def orbit(self, point: int) -> set[int]:
        seen = {point}
        queue = [point]
        gens = self.generators()
        while queue:
            a = queue.pop()
            for g in gens:
                b = g[a]
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return seen


def group_order(generators: Iterable[Sequence[int]], degree: int) -> int:
    return PermGroup(generators, degree).order()


def orbit_of_tuple(start: tuple, generators: Sequence[Perm], act) -> set:
    """Generic orbit closure: ``act(g, x)`` applies a generator to a point."""
    seen = {start}
    queue = [start]
    while queue:
        x = queue.pop()
        for g in generators:
            y = act(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen
