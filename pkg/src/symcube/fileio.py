"""Text file formats for groups, difference sets, designs, cubes,
transversal designs, certificates, and orbit-cube inputs.

Cycle notation and transversal-design point indices are 1-based in files;
everything is 0-based in memory.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from .cubes import Cube
from .designs import DesignParams, IncidenceMatrix
from .equivalence import CanonicalCertificate, TransversalRep
from .errors import InvalidInputError
from .groups import DifferenceSet, FiniteGroup, make_from_permutation_generators
from .perms import format_cycles, parse_cycles
from .search import OrbitCubeInput

__all__ = [
    "load_group",
    "save_group",
    "load_difference_set",
    "save_difference_set",
    "load_design",
    "save_design",
    "load_cube",
    "save_cube",
    "save_transversal",
    "load_transversal",
    "save_certificate",
    "load_certificate",
    "load_orbit_input",
    "save_orbit_input",
]


def _lines(path: str | Path) -> list[str]:
    text = Path(path).read_text()
    return [ln.rstrip("\n") for ln in text.splitlines()]


def load_group(path: str | Path) -> FiniteGroup:
    lines = _lines(path)
    if not lines:
        raise InvalidInputError(f"{path}: empty group file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "group" or head[2] != "order":
        raise InvalidInputError(f"{path}: bad header {lines[0]!r}")
    name = head[1]
    v = int(head[3])
    pos = 1
    labels = None
    if pos < len(lines) and lines[pos].startswith("labels "):
        labels = lines[pos][len("labels ") :].split(",")
        pos += 1
    if pos >= len(lines):
        raise InvalidInputError(f"{path}: missing body")
    if lines[pos] == "table":
        rows = []
        for ln in lines[pos + 1 : pos + 1 + v]:
            rows.append([int(x) for x in ln.split()])
        g = FiniteGroup(rows, labels=labels, name=name)
        return g
    if lines[pos].startswith("permgens"):
        degree = int(lines[pos].split()[1])
        gens = [
            parse_cycles(ln, degree, one_based=True)
            for ln in lines[pos + 1 :]
            if ln.strip()
        ]
        g = make_from_permutation_generators(gens, name=name)
        if g.order != v:
            raise InvalidInputError(
                f"{path}: generators produce order {g.order}, header says {v}"
            )
        if labels is not None:
            g.labels = tuple(labels)
        return g
    raise InvalidInputError(f"{path}: expected 'table' or 'permgens'")


def save_group(g: FiniteGroup, path: str | Path, as_table: bool = True) -> None:
    name = g.name or f"G{g.order}"
    lines = [f"group {name} order {g.order}"]
    if g.labels is not None:
        lines.append("labels " + ",".join(g.labels))
    if as_table:
        lines.append("table")
        for row in g.table:
            lines.append(" ".join(str(x) for x in row))
    else:
        lines.append(f"permgens {g.order}")
        for a in g.generating_sequence():
            lines.append(format_cycles(g.table[a], one_based=True))
    Path(path).write_text("\n".join(lines) + "\n")


def load_difference_set(path: str | Path, group: FiniteGroup) -> DifferenceSet:
    lines = [ln for ln in _lines(path) if ln.strip()]
    head = lines[0].split()
    if head[0] != "ds" or len(head) != 4:
        raise InvalidInputError(f"{path}: bad header {lines[0]!r}")
    v, k, lam = (int(x) for x in head[1:])
    elements = tuple(int(x) for x in lines[1].split())
    return DifferenceSet(group, elements, (v, k, lam))


def save_difference_set(d: DifferenceSet, path: str | Path) -> None:
    v, k, lam = d.params
    Path(path).write_text(
        f"ds {v} {k} {lam}\n" + " ".join(str(x) for x in d.elements) + "\n"
    )


def load_design(path: str | Path) -> IncidenceMatrix:
    lines = [ln for ln in _lines(path) if ln.strip()]
    head = lines[0].split()
    if head[0] != "design" or len(head) != 4:
        raise InvalidInputError(f"{path}: bad header {lines[0]!r}")
    v, k, lam = (int(x) for x in head[1:])
    rows = [[int(ch) for ch in ln] for ln in lines[1 : 1 + v]]
    if len(rows) != v or any(len(r) != v for r in rows):
        raise InvalidInputError(f"{path}: expected {v} rows of {v} characters")
    return IncidenceMatrix(np.array(rows, dtype=np.uint8), DesignParams(v, k, lam))


def save_design(a: IncidenceMatrix, path: str | Path) -> None:
    if a.params is None:
        raise InvalidInputError("design file needs tagged parameters")
    p = a.params
    body = "\n".join("".join(str(int(x)) for x in row) for row in a.bits)
    Path(path).write_text(f"design {p.v} {p.k} {p.lam}\n" + body + "\n")


def save_cube(c: Cube, path: str | Path) -> None:
    p = c.params
    head = f"cube n={c.n} v={c.v} k={p.k} lambda={p.lam}"
    flat = c.bits.reshape((-1, c.v, c.v)) if c.n > 2 else c.bits.reshape((1, c.v, c.v))
    chunks = []
    for block in flat:
        chunks.append("\n".join("".join(str(int(x)) for x in row) for row in block))
    Path(path).write_text(head + "\n" + "\n\n".join(chunks) + "\n")


def load_cube(path: str | Path) -> Cube:
    lines = _lines(path)
    head = lines[0].split()
    if not lines[0].startswith("cube "):
        raise InvalidInputError(f"{path}: bad header {lines[0]!r}")
    fields = dict(part.split("=") for part in head[1:])
    n, v = int(fields["n"]), int(fields["v"])
    k, lam = int(fields["k"]), int(fields["lambda"])
    rows = [ln for ln in lines[1:] if ln.strip()]
    expected = v ** (n - 2) * v
    if len(rows) != expected:
        raise InvalidInputError(f"{path}: expected {expected} matrix rows, got {len(rows)}")
    arr = np.array([[int(ch) for ch in ln] for ln in rows], dtype=np.uint8)
    return Cube(arr.reshape((v,) * n), DesignParams(v, k, lam))


def save_transversal(t: TransversalRep, path_or_io: str | Path | TextIO) -> None:
    lines = [f"td n={t.n} v={t.v} blocks={len(t.blocks)}"]
    for b in t.blocks:
        lines.append(" ".join(str(x + 1) for x in sorted(b)))
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_io, "write"):
        path_or_io.write(text)
    else:
        Path(path_or_io).write_text(text)


def load_transversal(path: str | Path) -> TransversalRep:
    lines = [ln for ln in _lines(path) if ln.strip()]
    head = lines[0].split()
    if not lines[0].startswith("td "):
        raise InvalidInputError(f"{path}: bad header {lines[0]!r}")
    fields = dict(part.split("=") for part in head[1:])
    n, v, m = int(fields["n"]), int(fields["v"]), int(fields["blocks"])
    blocks = tuple(
        tuple(int(x) - 1 for x in ln.split()) for ln in lines[1 : 1 + m]
    )
    if len(blocks) != m:
        raise InvalidInputError(f"{path}: expected {m} blocks")
    k = m // v ** (n - 1)
    return TransversalRep(n=n, v=v, k=k, blocks=blocks)


def save_certificate(cert: CanonicalCertificate, path: str | Path) -> None:
    Path(path).write_text(f"mode={cert.mode}\n{cert.bytes_.hex()}\n")


def load_certificate(path: str | Path) -> CanonicalCertificate:
    lines = [ln for ln in _lines(path) if ln.strip()]
    if not lines[0].startswith("mode="):
        raise InvalidInputError(f"{path}: missing mode header")
    return CanonicalCertificate(bytes.fromhex(lines[1]), lines[0][len("mode=") :])


def load_orbit_input(path: str | Path) -> OrbitCubeInput:
    lines = [ln for ln in _lines(path) if ln.strip()]
    head = lines[0].split()
    if head[0] != "orbitcube" or not head[1].startswith("v="):
        raise InvalidInputError(f"{path}: bad header {lines[0]!r}")
    v = int(head[1][2:])
    gens = []
    blocks = []
    for ln in lines[1:]:
        if ln.startswith("gen "):
            gens.append(parse_cycles(ln[4:], 3 * v, one_based=True))
        elif ln.startswith("block "):
            parts = tuple(int(x) - 1 for x in ln.split()[1:])
            if len(parts) != 3:
                raise InvalidInputError(f"{path}: blocks must have 3 points: {ln!r}")
            blocks.append(parts)
        else:
            raise InvalidInputError(f"{path}: unrecognized line {ln!r}")
    return OrbitCubeInput(v=v, generators=tuple(gens), base_blocks=tuple(blocks))


def save_orbit_input(inp: OrbitCubeInput, path: str | Path) -> None:
    lines = [f"orbitcube v={inp.v}"]
    for g in inp.generators:
        lines.append("gen " + format_cycles(g, one_based=True))
    for b in inp.base_blocks:
        lines.append("block " + " ".join(str(x + 1) for x in b))
    Path(path).write_text("\n".join(lines) + "\n")
