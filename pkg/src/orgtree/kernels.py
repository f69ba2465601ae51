"""Pairwise 1/r^2 field kernels with optional tree acceleration.

A source body contributes

    constant * charge * (x_src - x_tgt) / (|x_src - x_tgt|^2 + softening^2)^(3/2)

to the field at a target point.  With zero softening this is the plain
inverse-square law; gravity mode keeps the sign as written (the field points
toward the source), coulomb mode is the same expression over signed charges.

Both the direct sum and the tree-accelerated sum accumulate their per-source
terms with exactly rounded summation (math.fsum).  The result is therefore
independent of the order in which terms are produced, and at theta = 0, where
the tree visits every body individually, the tree result equals the direct
result bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularPairError
from .geometry import Vec2
from .ntree import Body, NTree

MODE_GRAVITY = "gravity"
MODE_COULOMB = "coulomb"
MODES = (MODE_GRAVITY, MODE_COULOMB)


@dataclass(frozen=True, slots=True)
class KernelParams:
    """Field kernel settings.

    theta is the tree opening parameter: a cell of side s at distance d from
    the target collapses to one pseudo-body when s / d < theta.  theta = 0
    therefore forces full recursion and reproduces the direct sum exactly.
    """

    constant: float = 1.0
    softening: float = 0.0
    theta: float = 0.5
    mode: str = MODE_GRAVITY

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown kernel mode: {self.mode!r}")
        if self.theta < 0:
            raise ValueError(f"negative theta: {self.theta}")
        if self.softening < 0:
            raise ValueError(f"negative softening: {self.softening}")
        if not math.isfinite(self.constant):
            raise ValueError("kernel constant must be finite")


def pair_field(source: Body, target: Vec2, params: KernelParams,
               target_id: int | None = None) -> Vec2:
    """Field contribution of one source body at a target point."""
    dx = source.position.x - target.x
    dy = source.position.y - target.y
    r2 = dx * dx + dy * dy
    eps2 = params.softening * params.softening
    if r2 + eps2 == 0.0:
        raise SingularPairError(
            f"source body {source.id} coincides with the target and softening is 0",
            pair=(source.id, target_id if target_id is not None else -1))
    w = params.constant * source.charge / ((r2 + eps2) * math.sqrt(r2 + eps2))
    return Vec2(w * dx, w * dy)


def direct_field(bodies, target_index: int, params: KernelParams) -> Vec2:
    """Exact field at bodies[target_index] summed over every other body."""
    bodies = list(bodies)
    if not 0 <= target_index < len(bodies):
        raise IndexError(f"target index {target_index} out of range")
    target = bodies[target_index]
    tx = target.position.x
    ty = target.position.y
    const = params.constant
    eps2 = params.softening * params.softening
    xs: list[float] = []
    ys: list[float] = []
    for i, b in enumerate(bodies):
        if i == target_index:
            continue
        dx = b.position.x - tx
        dy = b.position.y - ty
        r2 = dx * dx + dy * dy + eps2
        if r2 == 0.0:
            raise SingularPairError(
                f"bodies {b.id} and {target.id} coincide and softening is 0",
                pair=(b.id, target.id))
        w = const * b.charge / (r2 * math.sqrt(r2))
        xs.append(w * dx)
        ys.append(w * dy)
    return Vec2(math.fsum(xs), math.fsum(ys))


def direct_fields(bodies, params: KernelParams) -> list[Vec2]:
    """Direct field at every body; one quadratic sweep over a plain float table."""
    bodies = list(bodies)
    px = [b.position.x for b in bodies]
    py = [b.position.y for b in bodies]
    qs = [b.charge for b in bodies]
    ids = [b.id for b in bodies]
    const = params.constant
    eps2 = params.softening * params.softening
    n = len(bodies)
    out: list[Vec2] = []
    for j in range(n):
        tx = px[j]
        ty = py[j]
        xs: list[float] = []
        ys: list[float] = []
        for i in range(n):
            if i == j:
                continue
            dx = px[i] - tx
            dy = py[i] - ty
            r2 = dx * dx + dy * dy + eps2
            if r2 == 0.0:
                raise SingularPairError(
                    f"bodies {ids[i]} and {ids[j]} coincide and softening is 0",
                    pair=(ids[i], ids[j]))
            w = const * qs[i] / (r2 * math.sqrt(r2))
            xs.append(w * dx)
            ys.append(w * dy)
        out.append(Vec2(math.fsum(xs), math.fsum(ys)))
    return out


def tree_field(tree: NTree, target: Vec2, target_id: int,
               params: KernelParams) -> Vec2:
    """Tree-accelerated field at a point.

    Descends from the root in the fixed child order.  Any node (internal or
    leaf) whose side-to-distance ratio beats theta is collapsed to a single
    pseudo-body at its center of charge; other internal nodes recurse, and
    surviving leaves are summed body by body, skipping target_id.  Pass a
    target_id of -1 when the target point is not a tree body.

    Two kinds of node are never collapsed regardless of theta.  A node whose
    signed charges cancel has no defined center.  And a node whose box holds
    the target must open: collapsing it would fold the target's own charge
    into the monopole, which the distance test alone does not prevent when
    cancellation pushes the center of charge far from the box.
    """
    tx = target.x
    ty = target.y
    const = params.constant
    eps2 = params.softening * params.softening
    th2 = params.theta * params.theta
    xs: list[float] = []
    ys: list[float] = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if node.count == 0:
            continue
        com = node.center_of_charge
        if (com is not None
                and not (node.lo_x <= tx <= node.hi_x
                         and node.lo_y <= ty <= node.hi_y)):
            dx = com.x - tx
            dy = com.y - ty
            d2 = dx * dx + dy * dy
            side = node.hi_x - node.lo_x
            h = node.hi_y - node.lo_y
            if h > side:
                side = h
            # s/d < theta without the square root: s^2 < theta^2 * d^2.
            if d2 > 0.0 and side * side < th2 * d2:
                w = const * node.total_charge / ((d2 + eps2) * math.sqrt(d2 + eps2))
                xs.append(w * dx)
                ys.append(w * dy)
                continue
        if node.children is None:
            for b in node.bodies:
                if b.id == target_id:
                    continue
                dx = b.position.x - tx
                dy = b.position.y - ty
                r2 = dx * dx + dy * dy + eps2
                if r2 == 0.0:
                    raise SingularPairError(
                        f"body {b.id} coincides with the target and softening is 0",
                        pair=(b.id, target_id))
                w = const * b.charge / (r2 * math.sqrt(r2))
                xs.append(w * dx)
                ys.append(w * dy)
        else:
            stack.extend(reversed(node.children))
    return Vec2(math.fsum(xs), math.fsum(ys))


def tree_fields(tree: NTree, params: KernelParams) -> list[Vec2]:
    """Tree-accelerated field at every tree body, in tree.bodies order."""
    return [tree_field(tree, b.position, b.id, params) for b in tree.bodies]
