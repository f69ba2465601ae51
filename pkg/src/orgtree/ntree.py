"""Adaptive quadtree over point bodies with per-node charge aggregates.

The tree is rebuilt from scratch whenever bodies move and is treated as
immutable afterwards.  A cell splits only while it holds more than
`capacity` bodies and is above `max_depth`, so every internal node's subtree
holds more than `capacity` bodies and a leaf shallower than `max_depth` never
exceeds it.  Bodies that coincide or nearly coincide pile up in a leaf at
`max_depth`, which is allowed to exceed capacity.

Child order everywhere is the fixed offset order (0,0), (1,0), (0,1), (1,1),
which makes traversals, queries, and aggregate sums reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import AABB, CellCoord, Vec2, cell_box, child_coords


@dataclass(frozen=True, slots=True)
class Body:
    """Point body carried by the simulation.

    `charge` doubles as mass for gravity-style kernels and stays at 1.0 for
    plain boids runs.
    """

    id: int
    species: int
    position: Vec2
    velocity: Vec2
    charge: float = 1.0

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"negative body id: {self.id}")
        if self.species < 0:
            raise ValueError(f"negative species index: {self.species}")
        if not (self.position.is_finite() and self.velocity.is_finite()
                and math.isfinite(self.charge)):
            raise ValueError(f"body {self.id} has a non-finite component")


@dataclass(slots=True)
class Node:
    """One tree cell.  Internal nodes have exactly four children; leaves hold bodies.

    The box bounds are duplicated as flat floats; query and field traversals
    visit hundreds of thousands of nodes per run and the flattened reads keep
    those loops cheap.
    """

    coord: CellCoord
    box: AABB
    children: tuple[Node, Node, Node, Node] | None
    bodies: tuple[Body, ...]
    count: int
    total_charge: float
    center_of_charge: Vec2 | None
    lo_x: float
    lo_y: float
    hi_x: float
    hi_y: float

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    def aggregates(self) -> tuple[int, float, Vec2 | None]:
        """(count, total charge, charge-weighted centroid; None when undefined).

        The centroid is undefined for empty nodes and for nodes whose signed
        charges cancel exactly.
        """
        return self.count, self.total_charge, self.center_of_charge


@dataclass(slots=True)
class NTree:
    bodies: tuple[Body, ...]
    root_box: AABB
    capacity: int
    max_depth: int
    root: Node = field(repr=False)

    def leaves(self) -> list[Node]:
        """All leaf nodes, empty ones included, in traversal order."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.children is None:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def leaf_cells(self, min_depth: int = 0) -> dict[CellCoord, tuple[int, ...]]:
        """Non-empty leaf cells at depth >= min_depth, mapped to their body ids.

        The depth cut is inclusive, so deeper leaves always survive a cut that
        their shallower siblings pass.
        """
        if min_depth < 0:
            raise ValueError(f"negative depth threshold: {min_depth}")
        out: dict[CellCoord, tuple[int, ...]] = {}
        for node in self.leaves():
            if node.count > 0 and node.coord.depth >= min_depth:
                out[node.coord] = tuple(b.id for b in node.bodies)
        return out

    def query_radius(self, center: Vec2, radius: float) -> list[int]:
        """Ids of bodies with distance <= radius from center, boundary inclusive.

        Only nodes whose box touches the disk's bounding square are descended;
        bodies are then filtered by exact squared distance, so no square root
        is taken and a body exactly on the radius is always included.
        """
        if radius < 0:
            raise ValueError(f"negative query radius: {radius}")
        cx = center.x
        cy = center.y
        qlo_x = cx - radius
        qhi_x = cx + radius
        qlo_y = cy - radius
        qhi_y = cy + radius
        r2 = radius * radius
        out: list[int] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.count == 0:
                continue
            if (node.lo_x > qhi_x or qlo_x > node.hi_x
                    or node.lo_y > qhi_y or qlo_y > node.hi_y):
                continue
            if node.children is None:
                for b in node.bodies:
                    p = b.position
                    dx = p.x - cx
                    dy = p.y - cy
                    if dx * dx + dy * dy <= r2:
                        out.append(b.id)
            else:
                stack.extend(reversed(node.children))
        return out

    def query_radius_bodies(self, center: Vec2, radius: float) -> list[Body]:
        """Same traversal as query_radius but yields the bodies themselves."""
        if radius < 0:
            raise ValueError(f"negative query radius: {radius}")
        cx = center.x
        cy = center.y
        qlo_x = cx - radius
        qhi_x = cx + radius
        qlo_y = cy - radius
        qhi_y = cy + radius
        r2 = radius * radius
        out: list[Body] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.count == 0:
                continue
            if (node.lo_x > qhi_x or qlo_x > node.hi_x
                    or node.lo_y > qhi_y or qlo_y > node.hi_y):
                continue
            if node.children is None:
                for b in node.bodies:
                    p = b.position
                    dx = p.x - cx
                    dy = p.y - cy
                    if dx * dx + dy * dy <= r2:
                        out.append(b)
            else:
                stack.extend(reversed(node.children))
        return out

    def leaf_at(self, coord: CellCoord) -> Node | None:
        """The leaf with exactly this coordinate, or None when no such leaf exists."""
        node = self.root
        while node.coord != coord:
            if node.children is None:
                return None
            if coord.depth <= node.coord.depth:
                return None
            shift = coord.depth - node.coord.depth - 1
            cx = (coord.ix >> shift) & 1
            cy = (coord.iy >> shift) & 1
            node = node.children[cx + 2 * cy]
        return node if node.children is None else None

    def dump_leaves(self) -> str:
        """Debug dump, one sorted line per leaf: `depth ix iy count`."""
        rows = sorted((n.coord, n.count) for n in self.leaves())
        return "\n".join(f"{c.depth} {c.ix} {c.iy} {k}" for c, k in rows)


def build_tree(bodies, root_box: AABB, capacity: int, max_depth: int = 24) -> NTree:
    """Build the quadtree for a snapshot of bodies.

    Splitting is triggered by count > capacity, so a cell holding exactly
    `capacity` bodies stays a leaf.  Bodies sitting exactly on a split line go
    to the child with the larger index; a body on the root's upper boundary
    therefore still lands in a valid leaf.  All four children are materialized
    on a split, empty ones as empty leaves.
    """
    if capacity < 1:
        raise ValueError(f"capacity must be at least 1, got {capacity}")
    if max_depth < 0:
        raise ValueError(f"negative max_depth: {max_depth}")
    bodies = tuple(bodies)
    seen: set[int] = set()
    for b in bodies:
        if b.id in seen:
            raise ValueError(f"duplicate body id: {b.id}")
        seen.add(b.id)
        if not root_box.contains(b.position):
            raise ValueError(
                f"body {b.id} at ({b.position.x}, {b.position.y}) lies outside the root box")
    root, _, _, _ = _build(list(bodies), CellCoord(0, 0, 0), root_box,
                           root_box, capacity, max_depth)
    return NTree(bodies=bodies, root_box=root_box, capacity=capacity,
                 max_depth=max_depth, root=root)


def _build(items: list[Body], coord: CellCoord, box: AABB, root_box: AABB,
           capacity: int, max_depth: int) -> tuple[Node, float, float, float]:
    # Returns the node plus raw (charge, charge*x, charge*y) sums.  Raw sums
    # propagate bottom-up so a parent centroid stays exact even when a child's
    # signed charges cancel and its own centroid is undefined.
    if len(items) <= capacity or coord.depth >= max_depth:
        q = 0.0
        wx = 0.0
        wy = 0.0
        for b in items:
            q += b.charge
            wx += b.charge * b.position.x
            wy += b.charge * b.position.y
        com = Vec2(wx / q, wy / q) if q != 0.0 else None
        node = Node(coord, box, None, tuple(items), len(items), q, com,
                    box.lo.x, box.lo.y, box.hi.x, box.hi.y)
        return node, q, wx, wy

    kid_coords = child_coords(coord)
    kid_boxes = tuple(cell_box(root_box, k) for k in kid_coords)
    split_x = kid_boxes[1].lo.x
    split_y = kid_boxes[2].lo.y
    buckets: tuple[list[Body], ...] = ([], [], [], [])
    for b in items:
        i = (1 if b.position.x >= split_x else 0) + (2 if b.position.y >= split_y else 0)
        buckets[i].append(b)

    kids = []
    count = 0
    q = 0.0
    wx = 0.0
    wy = 0.0
    for kc, kb, bucket in zip(kid_coords, kid_boxes, buckets):
        child, cq, cwx, cwy = _build(bucket, kc, kb, root_box, capacity, max_depth)
        kids.append(child)
        count += child.count
        q += cq
        wx += cwx
        wy += cwy
    com = Vec2(wx / q, wy / q) if q != 0.0 else None
    node = Node(coord, box, (kids[0], kids[1], kids[2], kids[3]), (), count, q, com,
                box.lo.x, box.lo.y, box.hi.x, box.hi.y)
    return node, q, wx, wy
