"""Torus geometry and the four-tessellation cover used by the walk.

Vertices of the ``2n x 2n`` torus are indexed row-major with x fastest,
``index = x + 2n*y``. Every tessellation pairs each even-parity vertex
(the anchor) with one odd-parity neighbour (the partner).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

LABELS = ("00", "01", "10", "11")


@dataclass(frozen=True)
class LatticeSpec:
    """A torus of side ``2n`` holding ``N = 4n^2`` vertices."""

    n: int
    side: int = field(init=False)
    num_vertices: int = field(init=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise TypeError(f"n must be an integer, got {self.n!r}")
        if self.n <= 1:
            raise ValueError(f"n must be > 1 (got n={self.n}); side 2 gives multi-edges")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "side", 2 * self.n)
        object.__setattr__(self, "num_vertices", 4 * self.n * self.n)


class Vertex(NamedTuple):
    x: int
    y: int

    @property
    def parity(self) -> int:
        return (self.x + self.y) % 2


class Polygon(NamedTuple):
    anchor: Vertex
    partner: Vertex


@dataclass(frozen=True)
class Tessellation:
    label: str
    polygons: tuple[Polygon, ...]


Edge = frozenset  # unordered vertex pair


def _check_label(label: str) -> tuple[int, int]:
    if label not in LABELS:
        raise ValueError(f"unknown tessellation label {label!r}; expected one of {LABELS}")
    return int(label[0]), int(label[1])


def shift(label: str) -> tuple[int, int]:
    """Displacement from anchor to partner for a tessellation label."""
    a, b = _check_label(label)
    sign = -1 if a else 1
    return (sign, 0) if b == 0 else (0, sign)


def vertex_index(v: Vertex | tuple[int, int], lattice: LatticeSpec) -> int:
    x, y = v
    if not (0 <= x < lattice.side and 0 <= y < lattice.side):
        raise ValueError(f"vertex {tuple(v)} outside the {lattice.side}x{lattice.side} torus")
    return x + lattice.side * y


def index_vertex(index: int, lattice: LatticeSpec) -> Vertex:
    if not 0 <= index < lattice.num_vertices:
        raise ValueError(f"index {index} outside [0, {lattice.num_vertices})")
    y, x = divmod(index, lattice.side)
    return Vertex(x, y)


def build_tessellation(lattice: LatticeSpec, label: str) -> Tessellation:
    dx, dy = shift(label)
    s = lattice.side
    polygons = []
    for y in range(s):
        for x in range(y % 2, s, 2):
            polygons.append(Polygon(Vertex(x, y), Vertex((x + dx) % s, (y + dy) % s)))
    return Tessellation(label, tuple(polygons))


def tessellation_edges(tess: Tessellation) -> set[Edge]:
    return {Edge((p.anchor, p.partner)) for p in tess.polygons}


def torus_edges(lattice: LatticeSpec) -> set[Edge]:
    s = lattice.side
    edges = set()
    for y in range(s):
        for x in range(s):
            v = Vertex(x, y)
            edges.add(Edge((v, Vertex((x + 1) % s, y))))
            edges.add(Edge((v, Vertex(x, (y + 1) % s))))
    return edges


def edge_cover_check(
    tessellations: list[Tessellation], lattice: LatticeSpec
) -> tuple[bool, list[tuple[Vertex, Vertex]]]:
    """Check that the polygon edges jointly cover every torus edge.

    Returns ``(covered, uncovered)`` where ``uncovered`` lists the missing
    edges as sorted vertex pairs.
    """
    have: set[Edge] = set()
    for tess in tessellations:
        have |= tessellation_edges(tess)
    missing = torus_edges(lattice) - have
    uncovered = sorted(tuple(sorted(e)) for e in missing)
    return not uncovered, uncovered


@lru_cache(maxsize=64)
def _pair_arrays(n: int, label: str) -> tuple[np.ndarray, np.ndarray]:
    s = 2 * n
    dx, dy = shift(label)
    ys, xs = np.divmod(np.arange(s * s), s)
    even = (xs + ys) % 2 == 0
    xa, ya = xs[even], ys[even]
    anchors = (xa + s * ya).astype(np.intp)
    partners = ((xa + dx) % s + s * ((ya + dy) % s)).astype(np.intp)
    anchors.setflags(write=False)
    partners.setflags(write=False)
    return anchors, partners


def pair_indices(lattice: LatticeSpec, label: str) -> tuple[np.ndarray, np.ndarray]:
    """Flat (anchor, partner) index arrays for one tessellation, cached per lattice."""
    _check_label(label)
    return _pair_arrays(lattice.n, label)


def parity_mask(lattice: LatticeSpec) -> np.ndarray:
    """Boolean mask over flat indices, True on even-parity vertices."""
    ys, xs = np.divmod(np.arange(lattice.num_vertices), lattice.side)
    return (xs + ys) % 2 == 0
