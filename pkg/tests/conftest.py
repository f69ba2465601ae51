"""Shared scene builders for the test suite."""

from __future__ import annotations

import math
import random
from pathlib import Path

from orgtree.geometry import AABB, Vec2
from orgtree.ntree import Body, build_tree

UNIT_BOX = AABB(Vec2(0.0, 0.0), Vec2(1.0, 1.0))
BOX_100 = AABB(Vec2(0.0, 0.0), Vec2(100.0, 100.0))
CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def uniform_bodies(n: int, seed: int, box: AABB = UNIT_BOX, *,
                   charge: float = 1.0, species: int = 0) -> list[Body]:
    rng = random.Random(seed)
    w = box.width
    h = box.height
    return [Body(i, species,
                 Vec2(box.lo.x + w * rng.random(), box.lo.y + h * rng.random()),
                 Vec2(0.0, 0.0), charge)
            for i in range(n)]


def uniform_tree(n: int, seed: int, capacity: int = 10, box: AABB = UNIT_BOX):
    bodies = uniform_bodies(n, seed, box)
    return build_tree(bodies, box, capacity), bodies


def clustered_bodies(centers, per_cluster: int, spread: float, seed: int,
                     box: AABB = BOX_100) -> list[Body]:
    """Disk clusters around the given centers; ids are sequential across clusters."""
    rng = random.Random(seed)
    bodies = []
    i = 0
    for cx, cy in centers:
        for _ in range(per_cluster):
            r = spread * math.sqrt(rng.random())
            a = 2.0 * math.pi * rng.random()
            x = min(max(cx + r * math.cos(a), box.lo.x), box.hi.x)
            y = min(max(cy + r * math.sin(a), box.lo.y), box.hi.y)
            bodies.append(Body(i, 0, Vec2(x, y), Vec2(0.0, 0.0), 1.0))
            i += 1
    return bodies
