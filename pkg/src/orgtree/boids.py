"""Flocking dynamics over the quadtree neighborhood structure.

Steering terms follow the weighted forms below, where eta(j) is the set of
neighbors of boid j within its species' neighbor radius and d_i is the
distance |x_i - x_j|:

    cohesion (normalized): sum(w_i * x_i) / sum(w_i) - x_j   with w_i = 1 / d_i^2
    cohesion (literal):    sum(x_i / d_i^2) - x_j
    separation:            coefficient * sum((x_j - x_i) / d_i^3)
    alignment:             sum(v_i / (|eta(j)| * d_i^2))

The literal cohesion variant keeps the raw un-normalized sum; its magnitude
depends on absolute coordinates, which makes it scale-sensitive, so the
normalized variant is the default.  Both are selectable per run.

The velocity update for a boid of species s is

    v' = alpha * v + beta * c + gamma * s_intra + delta * a + isg * s_inter

with s_inter the separation sum over neighbors of other species and isg that
species' inter-species separation coefficient.  The speed |v'| is clamped to
max_speed.  All boids read the pre-step state only, then positions advance by
dt * v' and the tree is rebuilt, so the update is synchronous and independent
of processing order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ZeroDistanceError
from .geometry import AABB, Vec2, ZERO
from .ntree import Body, NTree, build_tree

COHESION_NORMALIZED = "normalized"
COHESION_LITERAL = "literal"
COHESION_MODES = (COHESION_NORMALIZED, COHESION_LITERAL)

BOUNDARY_REFLECT = "reflect"
BOUNDARY_WRAP = "wrap"
BOUNDARY_POLICIES = (BOUNDARY_REFLECT, BOUNDARY_WRAP)


@dataclass(frozen=True, slots=True)
class SpeciesParams:
    """Steering coefficients and limits for one species."""

    alpha: float = 1.0
    beta: float = 0.3
    gamma: float = 0.5
    delta: float = 0.3
    inter_species_gamma: float = 2.0
    neighbor_radius: float = 10.0
    max_speed: float = 2.0

    def __post_init__(self) -> None:
        if self.neighbor_radius <= 0:
            raise ValueError(f"neighbor_radius must be positive, got {self.neighbor_radius}")
        if self.max_speed <= 0:
            raise ValueError(f"max_speed must be positive, got {self.max_speed}")


@dataclass(frozen=True, slots=True)
class SimParams:
    """World-level settings shared by every step."""

    box: AABB
    species: tuple[SpeciesParams, ...]
    capacity: int = 10
    max_depth: int = 24
    dt: float = 0.1
    boundary: str = BOUNDARY_REFLECT
    cohesion_mode: str = COHESION_NORMALIZED

    def __post_init__(self) -> None:
        if not self.species:
            raise ValueError("at least one species is required")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.boundary not in BOUNDARY_POLICIES:
            raise ValueError(f"unknown boundary policy: {self.boundary!r}")
        if self.cohesion_mode not in COHESION_MODES:
            raise ValueError(f"unknown cohesion mode: {self.cohesion_mode!r}")
        if self.box.width <= 0 or self.box.height <= 0:
            raise ValueError("world box must have positive extent")


@dataclass(frozen=True, slots=True)
class WorldState:
    """One synchronous snapshot: bodies sorted by id plus their tree."""

    bodies: tuple[Body, ...]
    tree: NTree
    step: int
    seed: int
    params: SimParams
    by_id: dict[int, Body] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "by_id", {b.id: b for b in self.bodies})


def make_world(bodies, params: SimParams, seed: int = 0) -> WorldState:
    """Initial state from a body list; bodies are sorted by id and validated."""
    ordered = tuple(sorted(bodies, key=lambda b: b.id))
    for b in ordered:
        if b.species >= len(params.species):
            raise ValueError(f"body {b.id} references unknown species {b.species}")
    tree = build_tree(ordered, params.box, params.capacity, params.max_depth)
    return WorldState(bodies=ordered, tree=tree, step=0, seed=seed, params=params)


def neighborhood(state: WorldState, j: int, same_species: bool) -> list[int]:
    """Neighbor ids of body j within its species' radius, j itself excluded.

    The radius test is inclusive.  same_species=True keeps neighbors of j's
    species, False keeps every other species.
    """
    body = state.by_id[j]
    radius = state.params.species[body.species].neighbor_radius
    out = []
    for i in state.tree.query_radius(body.position, radius):
        if i == j:
            continue
        if (state.by_id[i].species == body.species) == same_species:
            out.append(i)
    return out


def _pair_d2(j: Body, other: Body) -> float:
    dx = other.position.x - j.position.x
    dy = other.position.y - j.position.y
    d2 = dx * dx + dy * dy
    if d2 == 0.0:
        raise ZeroDistanceError(
            f"boids {j.id} and {other.id} occupy the same position",
            pair=(j.id, other.id))
    return d2


def cohesion(j: Body, neighbors: list[Body], mode: str = COHESION_NORMALIZED) -> Vec2:
    """Pull toward the inverse-square-weighted neighbor centroid.

    Normalized mode returns that centroid minus x_j.  Literal mode skips the
    normalization and returns sum(x_i / d_i^2) - x_j as written above.
    """
    if mode not in COHESION_MODES:
        raise ValueError(f"unknown cohesion mode: {mode!r}")
    if not neighbors:
        return ZERO
    sw = 0.0
    sx = 0.0
    sy = 0.0
    for nb in neighbors:
        w = 1.0 / _pair_d2(j, nb)
        sw += w
        sx += w * nb.position.x
        sy += w * nb.position.y
    if mode == COHESION_LITERAL:
        return Vec2(sx - j.position.x, sy - j.position.y)
    return Vec2(sx / sw - j.position.x, sy / sw - j.position.y)


def separation(j: Body, neighbors: list[Body], coefficient: float) -> Vec2:
    """Scaled push away from close neighbors, with inverse-cube weights."""
    sx = 0.0
    sy = 0.0
    for nb in neighbors:
        d2 = _pair_d2(j, nb)
        d3 = d2 * math.sqrt(d2)
        sx += (j.position.x - nb.position.x) / d3
        sy += (j.position.y - nb.position.y) / d3
    return Vec2(coefficient * sx, coefficient * sy)


def alignment(j: Body, neighbors: list[Body]) -> Vec2:
    """Average of neighbor velocities, weighted by inverse squared distance."""
    if not neighbors:
        return ZERO
    card = float(len(neighbors))
    sx = 0.0
    sy = 0.0
    for nb in neighbors:
        w = 1.0 / (card * _pair_d2(j, nb))
        sx += w * nb.velocity.x
        sy += w * nb.velocity.y
    return Vec2(sx, sy)


def step_velocity(state: WorldState, j: int) -> Vec2:
    """Post-update velocity of body j, computed from the pre-step state only.

    Equivalent, float for float, to combining the cohesion, separation, and
    alignment functions above; the loop here just shares one distance
    computation per neighbor instead of recomputing it per term.
    """
    body = state.by_id[j]
    sp = state.params.species[body.species]
    species = body.species
    same: list[Body] = []
    other: list[Body] = []
    for nb in state.tree.query_radius_bodies(body.position, sp.neighbor_radius):
        if nb.id == j:
            continue
        (same if nb.species == species else other).append(nb)

    px = body.position.x
    py = body.position.y
    sw = csx = csy = 0.0
    ssx = ssy = 0.0
    asx = asy = 0.0
    card = float(len(same))
    for nb in same:
        dx = nb.position.x - px
        dy = nb.position.y - py
        d2 = dx * dx + dy * dy
        if d2 == 0.0:
            raise ZeroDistanceError(
                f"boids {body.id} and {nb.id} occupy the same position",
                pair=(body.id, nb.id))
        w = 1.0 / d2
        sw += w
        csx += w * nb.position.x
        csy += w * nb.position.y
        d3 = d2 * math.sqrt(d2)
        ssx += (px - nb.position.x) / d3
        ssy += (py - nb.position.y) / d3
        aw = 1.0 / (card * d2)
        asx += aw * nb.velocity.x
        asy += aw * nb.velocity.y
    if not same:
        cx = cy = 0.0
    elif state.params.cohesion_mode == COHESION_LITERAL:
        cx = csx - px
        cy = csy - py
    else:
        cx = csx / sw - px
        cy = csy / sw - py

    osx = osy = 0.0
    for nb in other:
        dx = nb.position.x - px
        dy = nb.position.y - py
        d2 = dx * dx + dy * dy
        if d2 == 0.0:
            raise ZeroDistanceError(
                f"boids {body.id} and {nb.id} occupy the same position",
                pair=(body.id, nb.id))
        d3 = d2 * math.sqrt(d2)
        osx += (px - nb.position.x) / d3
        osy += (py - nb.position.y) / d3

    vx = (sp.alpha * body.velocity.x + sp.beta * cx + sp.gamma * ssx
          + sp.delta * asx + sp.inter_species_gamma * osx)
    vy = (sp.alpha * body.velocity.y + sp.beta * cy + sp.gamma * ssy
          + sp.delta * asy + sp.inter_species_gamma * osy)
    v2 = vx * vx + vy * vy
    limit = sp.max_speed
    if v2 > limit * limit:
        scale = limit / math.sqrt(v2)
        vx *= scale
        vy *= scale
        # Rounding can leave the rescaled speed an ulp over the cap; nudge
        # toward zero until the invariant holds exactly.
        while vx * vx + vy * vy > limit * limit:
            vx = math.nextafter(vx, 0.0)
            vy = math.nextafter(vy, 0.0)
    return Vec2(vx, vy)


def _reflect(x: float, v: float, lo: float, hi: float) -> tuple[float, float]:
    # Fold back into [lo, hi], negating the velocity component per bounce.
    while x < lo or x > hi:
        if x < lo:
            x = 2.0 * lo - x
        else:
            x = 2.0 * hi - x
        v = -v
    return x, v


def _wrap(x: float, lo: float, hi: float) -> float:
    if lo <= x <= hi:
        return x
    return lo + ((x - lo) % (hi - lo))


def step_world(state: WorldState) -> WorldState:
    """Advance every boid by one synchronous step and rebuild the tree.

    Velocities are all computed against the current state before any position
    moves, then positions advance by dt and the boundary policy is applied:
    reflect folds the position back inside and negates the offending velocity
    component, wrap translates it periodically.
    """
    params = state.params
    new_v = [step_velocity(state, b.id) for b in state.bodies]
    box = params.box
    dt = params.dt
    reflect = params.boundary == BOUNDARY_REFLECT
    moved: list[Body] = []
    for b, v in zip(state.bodies, new_v):
        x = b.position.x + dt * v.x
        y = b.position.y + dt * v.y
        vx = v.x
        vy = v.y
        if reflect:
            x, vx = _reflect(x, vx, box.lo.x, box.hi.x)
            y, vy = _reflect(y, vy, box.lo.y, box.hi.y)
        else:
            x = _wrap(x, box.lo.x, box.hi.x)
            y = _wrap(y, box.lo.y, box.hi.y)
        moved.append(Body(b.id, b.species, Vec2(x, y), Vec2(vx, vy), b.charge))
    tree = build_tree(moved, box, params.capacity, params.max_depth)
    return WorldState(bodies=tuple(moved), tree=tree, step=state.step + 1,
                      seed=state.seed, params=params)
