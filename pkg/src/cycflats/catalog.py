"""Built-in example matroids used by the CLI and the verification suites.

All entries are small rank-3 matroids built from 3-point lines; each is
validated on load.  Two of them carry a transversal presentation, and the
three-lines matroid carries its natural width-3 branch decomposition
(a center vertex with one arm per line).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .branchwidth import BranchDecomposition
from .core import GroundSet, Matroid, validate_axioms
from .expansion import Presentation


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    matroid: Matroid
    note: str
    presentation: Optional[Presentation] = None


def _m(labels, flats) -> Matroid:
    return validate_axioms([(set(s), r) for s, r in flats], labels)


def _entries() -> Dict[str, CatalogEntry]:
    e6 = [str(i) for i in range(1, 7)]
    e7 = [str(i) for i in range(1, 8)]
    e9 = [str(i) for i in range(1, 10)]
    fig1_M = _m(e6, [((), 0), ("123", 2), ("456", 2), (e6, 3)])
    fig1_N = _m(e6, [((), 0), ("123", 2), ("145", 2), (e6, 3)])
    fig2_M = _m(e9, [((), 0), ("123", 2), ("456", 2), ("789", 2), (e9, 3)])
    fig2_N = _m(e9, [((), 0), ("234", 2), ("456", 2), ("789", 2), (e9, 3)])
    fig3_M = _m(e6, [((), 0), ("123", 2), ("145", 2), (e6, 3)])
    fig3_N = _m(e7, [((), 0), ("123", 2), ("145", 2), (e7, 3)])
    out = {
        "fig1_M": CatalogEntry(
            "fig1_M", fig1_M,
            "two disjoint 3-point lines spanning rank 3",
            Presentation.from_labels(
                [set("123"), set("456"), set(e6)], e6)),
        "fig1_N": CatalogEntry(
            "fig1_N", fig1_N,
            "two 3-point lines meeting in a point, plus a free point"),
        "fig2_M": CatalogEntry(
            "fig2_M", fig2_M,
            "three pairwise disjoint 3-point lines in rank 3",
            Presentation.from_labels(
                [set("123456"), set("456789"), set("123789")], e9)),
        "fig2_N": CatalogEntry(
            "fig2_N", fig2_N,
            "three 3-point lines, the first two sharing a point; "
            "element 1 is free"),
        "fig3_M": CatalogEntry(
            "fig3_M", fig3_M,
            "two 3-point lines meeting in a point, plus a free point"),
        "fig3_N": CatalogEntry(
            "fig3_N", fig3_N,
            "two 3-point lines meeting in a point, plus two free points"),
    }
    return out


_CACHE: Optional[Dict[str, CatalogEntry]] = None


def entries() -> Dict[str, CatalogEntry]:
    global _CACHE
    if _CACHE is None:
        _CACHE = _entries()
    return _CACHE


def names() -> Tuple[str, ...]:
    return tuple(sorted(entries()))


def get(name: str) -> Matroid:
    try:
        return entries()[name].matroid
    except KeyError:
        raise KeyError("unknown catalog entry %r; have %s"
                       % (name, ", ".join(names())))


def presentation(name: str) -> Presentation:
    entry = entries()[name]
    if entry.presentation is None:
        raise KeyError("catalog entry %r carries no presentation" % name)
    return entry.presentation


def three_lines_tree() -> BranchDecomposition:
    """The width-3 decomposition of fig2_M: a center with three arms.

    Arm i holds the i-th line; the vertex next to the center carries one
    leaf and hands the other two to its child.
    """
    vertices = ["c"]
    edges = []
    leaf_labels = {}
    for i in range(3):
        u = "u%d" % (i + 1)
        w = "w%d" % (i + 1)
        vertices += [u, w]
        edges += [("c", u), (u, w)]
        first, second, third = (str(3 * i + 1), str(3 * i + 2),
                                str(3 * i + 3))
        for lab, parent in ((first, u), (second, w), (third, w)):
            leaf = "l%s" % lab
            vertices.append(leaf)
            edges.append((parent, leaf))
            leaf_labels[lab] = leaf
    return BranchDecomposition.build(vertices, edges, leaf_labels)
