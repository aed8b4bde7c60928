"""Reference catalog of small symmetric designs.

Built on first use from difference sets plus the block-switching recipe;
nothing here is hand-typed incidence data.  Certificates are the ground
truth; names are presentation only.  For each parameter set with a unique
class arising from a difference set the class is named D0; the three
(16,6,2) classes are D1 (the development), D2 (one switch), D3 (two
switches).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .designs import DesignClass, DesignParams, IncidenceMatrix, switch_blocks, verify_design
from .errors import ConstructionBugError

__all__ = ["Catalog", "CatalogEntry", "reference_catalog", "klein_group", "elementary_16"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: DesignParams
    certificate: bytes
    aut_order: int
    matrix: IncidenceMatrix


class Catalog:
    def __init__(self, entries: list[CatalogEntry]):
        self.entries = entries
        self._by_cert = {e.certificate: e for e in entries}

    def name_for(self, certificate: bytes) -> str | None:
        entry = self._by_cert.get(certificate)
        return entry.name if entry else None

    def names(self, params: DesignParams | None = None) -> dict[bytes, str]:
        return {
            e.certificate: e.name
            for e in self.entries
            if params is None or e.params == params
        }

    def entry(self, name: str, params: DesignParams) -> CatalogEntry:
        for e in self.entries:
            if e.name == name and e.params == params:
                return e
        raise KeyError((name, params))


def klein_group():
    from .groups import make_cyclic, make_direct_product

    return make_direct_product(make_cyclic(2), make_cyclic(2))


def elementary_16():
    """Z_2^4 with elements numbered lexicographically on 4-bit strings,
    so that multiplication is XOR of indices."""
    from .groups import make_direct_product

    k4 = klein_group()
    return make_direct_product(k4, k4)


def switched_16_designs():
    """The three (16,6,2) designs: the development of {1,2,3,4,8,12} in
    Z_2^4, and the two block-switched variants."""
    from .groups import DifferenceSet, development

    g = elementary_16()
    base_set = DifferenceSet(g, (1, 2, 3, 4, 8, 12), (16, 6, 2))
    d1 = development(base_set)
    d2 = switch_blocks(d1, (0, 1, 12, 13), (2, 3, 14, 15))
    d3 = switch_blocks(d2, (0, 1, 4, 5), (6, 7, 14, 15))
    params = DesignParams(16, 6, 2)
    for m in (d1, d2, d3):
        if not verify_design(m, params):
            raise ConstructionBugError("switching recipe produced an invalid design")
    return d1, d2, d3


_CATALOG: Catalog | None = None
_LOCK = threading.Lock()


def _build() -> Catalog:
    from .designs import design_class
    from .groups import (
        DifferenceSet,
        development,
        difference_sets_up_to_equivalence,
        make_cyclic,
        make_metacyclic,
    )

    entries: list[CatalogEntry] = []

    def add(name: str, matrix: IncidenceMatrix):
        cls = design_class(matrix)
        entries.append(
            CatalogEntry(
                name=name,
                params=matrix.params,
                certificate=cls.certificate,
                aut_order=cls.aut_order,
                matrix=matrix,
            )
        )

    # unique classes from cyclic difference sets
    add("D0", development(DifferenceSet(make_cyclic(7), (1, 2, 4), (7, 3, 1))))
    add("D0", development(DifferenceSet(make_cyclic(11), (1, 3, 4, 5, 9), (11, 5, 2))))
    add("D0", development(DifferenceSet(make_cyclic(13), (0, 1, 3, 9), (13, 4, 1))))
    d15 = difference_sets_up_to_equivalence(make_cyclic(15), 7, 3)[0]
    add("D0", development(d15))

    # unique (21,5,1) class; the Frobenius and cyclic groups develop the same design
    f21 = make_metacyclic(3, 7, 2)
    d21 = difference_sets_up_to_equivalence(f21, 5, 1)[0]
    add("D0", development(d21))

    d1, d2, d3 = switched_16_designs()
    add("D1", d1)
    add("D2", d2)
    add("D3", d3)

    return Catalog(entries)


def reference_catalog() -> Catalog:
    """The shared catalog; built once, safe under concurrent first use."""
    global _CATALOG
    if _CATALOG is None:
        with _LOCK:
            if _CATALOG is None:
                _CATALOG = _build()
    return _CATALOG
