"""Exact 2D primitives: vectors, closed axis-aligned boxes, integer cell coordinates.

Cell adjacency is decided in integer arithmetic only, so results never depend on
floating-point rounding of box edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Vec2:
    """Immutable 2D vector in world units."""

    x: float
    y: float

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def norm2(self) -> float:
        return self.x * self.x + self.y * self.y

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


ZERO = Vec2(0.0, 0.0)


@dataclass(frozen=True, slots=True)
class AABB:
    """Closed axis-aligned box; lo is the min corner, hi the max corner."""

    lo: Vec2
    hi: Vec2

    def __post_init__(self) -> None:
        if not (self.lo.x <= self.hi.x and self.lo.y <= self.hi.y):
            raise ValueError(f"box has lo above hi: lo={self.lo}, hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi.x - self.lo.x

    @property
    def height(self) -> float:
        return self.hi.y - self.lo.y

    @property
    def center(self) -> Vec2:
        return Vec2((self.lo.x + self.hi.x) / 2.0, (self.lo.y + self.hi.y) / 2.0)

    def contains(self, p: Vec2) -> bool:
        """Closed membership test, boundary points included."""
        return self.lo.x <= p.x <= self.hi.x and self.lo.y <= p.y <= self.hi.y


def boxes_overlap_or_touch(a: AABB, b: AABB) -> bool:
    """Closed-box intersection: shared edges and shared corners count as contact."""
    return (a.lo.x <= b.hi.x and b.lo.x <= a.hi.x
            and a.lo.y <= b.hi.y and b.lo.y <= a.hi.y)


@dataclass(frozen=True, slots=True, order=True)
class CellCoord:
    """Identity of a quadtree cell: subdivision depth plus column/row index.

    Index ranges are 0 <= ix, iy < 2**depth.  Ordering is lexicographic on
    (depth, ix, iy), which gives every deterministic sort in the package a
    single well-defined key.
    """

    depth: int
    ix: int
    iy: int

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError(f"negative depth: {self.depth}")
        side = 1 << self.depth
        if not (0 <= self.ix < side and 0 <= self.iy < side):
            raise ValueError(
                f"cell index out of range at depth {self.depth}: ({self.ix}, {self.iy})")


def child_coords(c: CellCoord) -> tuple[CellCoord, CellCoord, CellCoord, CellCoord]:
    """The four children in fixed offset order (0,0), (1,0), (0,1), (1,1)."""
    d = c.depth + 1
    x = c.ix * 2
    y = c.iy * 2
    return (CellCoord(d, x, y), CellCoord(d, x + 1, y),
            CellCoord(d, x, y + 1), CellCoord(d, x + 1, y + 1))


def cell_box(root: AABB, c: CellCoord) -> AABB:
    """Sub-box reached from the root by `depth` rounds of 4-way bisection.

    Computed as root.lo + index * (side / 2**depth).  Because halving a float
    is exact, sibling boxes meet bitwise at their shared edges and the four
    children of any cell tile their parent exactly.
    """
    n = 1 << c.depth
    w = root.width / n
    h = root.height / n
    x0 = root.lo.x
    y0 = root.lo.y
    return AABB(Vec2(x0 + c.ix * w, y0 + c.iy * h),
                Vec2(x0 + (c.ix + 1) * w, y0 + (c.iy + 1) * h))


def cells_touch(a: CellCoord, b: CellCoord) -> bool:
    """Closed-box contact decided in exact integer arithmetic.

    Both cells are rescaled to the finer of the two depths; a cell then spans
    the closed index interval [ix << s, (ix + 1) << s] per axis.  Contact
    requires overlap on both axes, and corner contact counts.  Nested cells
    also report True since their boxes genuinely intersect.
    """
    d = a.depth if a.depth > b.depth else b.depth
    sa = d - a.depth
    sb = d - b.depth
    alo = a.ix << sa
    blo = b.ix << sb
    if alo > ((b.ix + 1) << sb) or blo > ((a.ix + 1) << sa):
        return False
    alo = a.iy << sa
    blo = b.iy << sb
    return alo <= ((b.iy + 1) << sb) and blo <= ((a.iy + 1) << sa)


def cells_adjacent(a: CellCoord, b: CellCoord) -> bool:
    """True when two distinct cells share an edge or a corner point.

    Intended for non-nested cells, such as two leaves of the same tree.
    Raises ValueError when called with a cell and itself; a cell is not its
    own neighbor.
    """
    if a == b:
        raise ValueError(f"adjacency is defined between distinct cells, got {a} twice")
    return cells_touch(a, b)
