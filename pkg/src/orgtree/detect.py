"""Dense-group detection over deep leaf cells.

A depth cut keeps every non-empty leaf at or below a threshold depth in the
tree; only regions dense enough to force subdivision reach such depths, so
the surviving cells mark crowded areas.  Grouping then partitions those cells
into connected components under closed-box adjacency, where sharing an edge
or a single corner point counts as contact.

Two interchangeable grouping routines are provided.  `group_cells` is the
quadratic reference sweep; `group_cells2` expands a frontier through the tree
with `neighbors_of` and never scans cells far from the group.  Both return
the same partition for any input and any seed, which the test suite checks
against an independent union-find oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import fsum
from typing import Iterable

from .geometry import AABB, CellCoord, Vec2, cells_touch
from .ntree import NTree, Node


@dataclass(frozen=True, slots=True)
class CellSet:
    """Cut result: coordinates of the kept leaves, each with its body ids."""

    cells: dict[CellCoord, tuple[int, ...]]

    @classmethod
    def from_tree(cls, tree: NTree, min_depth: int) -> CellSet:
        """Non-empty leaf cells with depth >= min_depth (inclusive cut)."""
        return cls(tree.leaf_cells(min_depth))

    def coords(self) -> set[CellCoord]:
        return set(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, coord: CellCoord) -> bool:
        return coord in self.cells


@dataclass(frozen=True, slots=True)
class Organization:
    """A detected group: its cells, member body ids, and position summary."""

    id: int
    cells: frozenset[CellCoord]
    members: tuple[int, ...]
    centroid: Vec2
    bounding_box: AABB


def _coord_pool(cells: CellSet | Iterable[CellCoord]):
    if isinstance(cells, CellSet):
        return cells.cells
    return cells


def group_cells(cells: CellSet, seed: int = 0, *,
                single_pass: bool = False) -> list[frozenset[CellCoord]]:
    """Reference grouping: seed a group on a random cell, sweep for contacts.

    Each sweep scans the remaining cells in sorted order and absorbs any cell
    touching the group built so far; sweeps repeat until one adds nothing, so
    the group closes into a full connected component no matter where the seed
    fell.  A later sweep only needs to test against cells absorbed by the
    previous one: anything touching an older member was already absorbed in
    the sweep after that member joined.

    single_pass=True stops after the first sweep.  That variant can split a
    chain of cells depending on scan order and exists only to demonstrate why
    the closure matters; see the companion test.
    """
    rng = random.Random(seed)
    remaining = set(_coord_pool(cells))
    groups: list[frozenset[CellCoord]] = []
    while remaining:
        pool = sorted(remaining)
        c = pool[rng.randrange(len(pool))]
        remaining.remove(c)
        group = {c}
        if single_pass:
            for cand in sorted(remaining):
                if any(cells_touch(cand, m) for m in group):
                    remaining.remove(cand)
                    group.add(cand)
        else:
            frontier = [c]
            while frontier:
                absorbed = [cand for cand in sorted(remaining)
                            if any(cells_touch(cand, m) for m in frontier)]
                if not absorbed:
                    break
                remaining.difference_update(absorbed)
                group.update(absorbed)
                frontier = absorbed
        groups.append(frozenset(group))
    return groups


def neighbors_of(node: Node, c: CellCoord, cells: CellSet | Iterable[CellCoord]) -> list[CellCoord]:
    """Leaf cells from `cells` whose closed box touches cell c's box.

    Descends from `node`, recursing only into children whose box touches c's,
    so subtrees that cannot contain a contact are never inspected.  Contact is
    decided by the exact integer test, corner contact included.  The returned
    list is sorted; it contains c itself when c is present in `cells`.
    """
    pool = _coord_pool(cells)
    out: list[CellCoord] = []
    stack = [node]
    while stack:
        n = stack.pop()
        if n.children is None:
            if n.coord in pool and cells_touch(n.coord, c):
                out.append(n.coord)
        else:
            for child in n.children:
                if cells_touch(child.coord, c):
                    stack.append(child)
    out.sort()
    return out


def group_cells2(cells: CellSet, tree: NTree, seed: int = 0) -> list[frozenset[CellCoord]]:
    """Frontier grouping: grow each group through tree-guided neighbor lookups.

    Matches `group_cells` output exactly while touching only the cells near
    the growing group.  Candidates come from `neighbors_of`, so with the exact
    contact test every candidate is genuinely adjacent; the membership check
    before absorbing is kept as a guard against a looser neighbor search.
    """
    rng = random.Random(seed)
    remaining = set(_coord_pool(cells))
    groups: list[frozenset[CellCoord]] = []
    while remaining:
        pool = sorted(remaining)
        c = pool[rng.randrange(len(pool))]
        remaining.remove(c)
        group = {c}
        pending = set(neighbors_of(tree.root, c, remaining))
        while pending:
            cand = min(pending)
            pending.remove(cand)
            if any(cells_touch(cand, m) for m in group):
                remaining.remove(cand)
                group.add(cand)
                pending.update(neighbors_of(tree.root, cand, remaining))
        groups.append(frozenset(group))
    return groups


def organizations_from(groups: Iterable[Iterable[CellCoord]],
                       tree: NTree) -> list[Organization]:
    """Materialize organizations from cell groups.

    Members are the union of the body ids in each group's leaves, sorted and
    duplicate-free.  The centroid is the unweighted mean of member positions
    and the bounding box covers member positions, not cell extents.  Ids are
    assigned by descending member count, ties broken by the smallest cell
    coordinate, so output order is deterministic.
    """
    position = {b.id: b.position for b in tree.bodies}
    protos = []
    for raw in groups:
        cell_group = frozenset(raw)
        if not cell_group:
            continue
        members: list[int] = []
        for coord in sorted(cell_group):
            leaf = tree.leaf_at(coord)
            if leaf is None:
                raise ValueError(
                    f"cell ({coord.depth}, {coord.ix}, {coord.iy}) is not a leaf of the tree")
            members.extend(b.id for b in leaf.bodies)
        members.sort()
        pts = [position[i] for i in members]
        centroid = Vec2(fsum(p.x for p in pts) / len(pts),
                        fsum(p.y for p in pts) / len(pts))
        bbox = AABB(Vec2(min(p.x for p in pts), min(p.y for p in pts)),
                    Vec2(max(p.x for p in pts), max(p.y for p in pts)))
        protos.append((cell_group, tuple(members), centroid, bbox))

    protos.sort(key=lambda t: (-len(t[1]), min(t[0])))
    return [Organization(i, cells, members, centroid, bbox)
            for i, (cells, members, centroid, bbox) in enumerate(protos)]
