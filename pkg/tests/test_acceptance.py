"""Release gates for the package, one test per gate.

Each test here states a requirement the package must meet end to end: broad
randomized agreement sweeps, byte-level determinism, accuracy and timing
bounds, and reference values.  `pytest -v` therefore prints one pass or fail
line per gate.  These tests favor breadth over speed; together they run for
a few minutes, dominated by the field timing sweep and the long boids run.
"""

from __future__ import annotations

import math
import random
import time

import numpy as np

from conftest import (BOX_100, CONFIG_DIR, UNIT_BOX, clustered_bodies,
                      uniform_bodies)
from oracles import brute_force_groups, linear_radius
from orgtree.config import load_config
from orgtree.detect import CellSet, group_cells, group_cells2, organizations_from
from orgtree.geometry import AABB, Vec2
from orgtree.kernels import KernelParams, direct_fields, tree_fields
from orgtree.metrics import (WeightedGraph, interaction_graph, modularity,
                             organization_partition)
from orgtree.ntree import Body, build_tree
from orgtree.run import field_run, run_simulation

WORLD_BOXES = (UNIT_BOX, BOX_100, AABB(Vec2(-8.0, 2.0), Vec2(24.0, 18.0)))


def test_grouping_matches_union_find_on_300_random_scenes():
    """Both grouping routines return the brute-force partition, exactly.

    Scenes draw up to 2000 bodies, capacity from {1, 3, 10}, and cut depth
    from 2..6.  Sizes are log-skewed small with a tail of large scenes so the
    all-pairs rational oracle stays inside the one minute budget.
    """
    start = time.perf_counter()
    rng = random.Random(20260822)
    scenes = 0
    for i in range(300):
        if i % 75 == 74:
            n = rng.randint(1000, 2000)
        elif i % 15 == 14:
            n = rng.randint(300, 1000)
        else:
            n = round(10.0 ** rng.uniform(math.log10(2), math.log10(300)))
        capacity = rng.choice([1, 3, 10])
        depth = rng.randint(2, 6)
        box = WORLD_BOXES[i % len(WORLD_BOXES)]
        bodies = uniform_bodies(n, seed=5000 + i, box=box)
        tree = build_tree(bodies, box, capacity)
        cut = CellSet.from_tree(tree, depth)
        sweep = set(group_cells(cut, seed=i))
        frontier = set(group_cells2(cut, tree, seed=i * 7 + 1))
        assert sweep == frontier == brute_force_groups(cut.coords())
        scenes += 1
    assert scenes >= 300
    assert time.perf_counter() - start < 60.0


def test_three_species_run_is_fast_and_byte_stable(tmp_path):
    """500 steps of the 300-boid scene finish under 30 s and rerun identically."""
    cfg = load_config(CONFIG_DIR / "three_species.json")
    start = time.perf_counter()
    first = run_simulation(cfg, tmp_path / "a", steps=500)
    elapsed = time.perf_counter() - start
    second = run_simulation(cfg, tmp_path / "b", steps=500)
    assert first.read_bytes() == second.read_bytes()
    assert elapsed < 30.0


def test_two_separated_clusters_are_recovered_for_20_seeds():
    """Detection on two synthetic blobs finds exactly two organizations whose
    members agree with the generating labels at 95% or better."""
    for seed in range(20):
        bodies = clustered_bodies([(25.0, 25.0), (75.0, 75.0)],
                                  per_cluster=80, spread=4.0, seed=seed)
        tree = build_tree(bodies, BOX_100, capacity=3)
        cut = CellSet.from_tree(tree, 4)
        orgs = organizations_from(group_cells2(cut, tree, seed=seed), tree)
        assert len(orgs) == 2
        label = {b.id: b.id // 80 for b in bodies}
        agree = sum(max(sum(1 for m in org.members if label[m] == lab)
                        for lab in (0, 1))
                    for org in orgs)
        assert agree / len(bodies) >= 0.95


def test_tree_field_is_exact_at_theta_zero_and_within_2pct_at_half(tmp_path):
    """theta = 0 reproduces the direct sum bit for bit on 100 random setups;
    theta = 0.5 on the committed 1000-body scene stays within 2e-2 relative
    error."""
    for case in range(100):
        rng = random.Random(7000 + case)
        n = rng.randint(2, 120)
        capacity = rng.choice([1, 2, 10])
        mode = rng.choice(["gravity", "coulomb"])
        softening = rng.choice([0.0, 1e-3, 0.05])
        box = WORLD_BOXES[case % len(WORLD_BOXES)]
        w, h = box.width, box.height
        bodies = [Body(i, 0,
                       Vec2(box.lo.x + w * rng.random(),
                            box.lo.y + h * rng.random()),
                       Vec2(0.0, 0.0),
                       rng.choice([1.0, -1.0, 2.0]) if mode == "coulomb" else 1.0)
                  for i in range(n)]
        params = KernelParams(constant=1.0, softening=softening,
                              theta=0.0, mode=mode)
        tree = build_tree(bodies, box, capacity)
        assert tree_fields(tree, params) == direct_fields(bodies, params)

    cfg = load_config(CONFIG_DIR / "field_1000.json")
    summary = field_run(cfg, tmp_path)
    assert summary["n"] == 1000
    assert summary["max_rel_error"] <= 2e-2


def test_tree_field_scales_subquadratically_where_direct_does_not():
    """Doubling the body count from 2000 to 8000 grows the tree sweep by less
    than 3.5x per doubling while the direct sum grows by more, within a two
    minute budget."""
    start = time.perf_counter()
    params = KernelParams(theta=0.5)
    sizes = (2000, 4000, 8000)

    warm = uniform_bodies(500, seed=1)
    tree_fields(build_tree(warm, UNIT_BOX, 10), params)
    direct_fields(warm, params)

    def timed(fn, repeats):
        best = math.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        return best

    tree_times = []
    direct_times = []
    for n in sizes:
        bodies = uniform_bodies(n, seed=12000 + n)
        tree_times.append(timed(
            lambda: tree_fields(build_tree(bodies, UNIT_BOX, 10), params), 2))
        direct_times.append(timed(
            lambda: direct_fields(bodies, params), 1 if n == 8000 else 2))

    for small, big in zip(tree_times, tree_times[1:]):
        assert big / small < 3.5
    for small, big in zip(direct_times, direct_times[1:]):
        assert big / small > 3.5
    assert time.perf_counter() - start < 120.0


def test_structure_invariants_hold_across_1000_randomized_builds():
    """Capacity, partition, and aggregate invariants hold on every build,
    including near-coincident clusters that bottom out at the depth cap."""
    rng = random.Random(777)
    for case in range(1000):
        adversarial = case % 10 == 9
        if adversarial:
            capacity = 1
            bodies = []
            for _ in range(rng.randint(1, 4)):
                bx = rng.uniform(0.2, 0.8)
                by = rng.uniform(0.2, 0.8)
                for _ in range(rng.randint(2, 8)):
                    bodies.append(Body(len(bodies), 0,
                                       Vec2(bx + rng.choice([0.0, 1e-13, -1e-13, 2e-13]),
                                            by + rng.choice([0.0, 1e-13, -1e-13])),
                                       Vec2(0.0, 0.0),
                                       rng.choice([1.0, -1.0, 0.5])))
        else:
            capacity = rng.choice([1, 3, 10])
            bodies = [Body(i, 0, Vec2(rng.random(), rng.random()),
                           Vec2(0.0, 0.0), rng.choice([1.0, -1.0, 2.0]))
                      for i in range(rng.randint(1, 100))]

        tree = build_tree(bodies, UNIT_BOX, capacity)
        seen_ids: list[int] = []
        deepest = 0
        crowded_floor = False
        stack = [tree.root]
        while stack:
            node = stack.pop()
            assert node.coord.depth <= 24
            assert (node.center_of_charge is None) == (node.total_charge == 0.0)
            if node.children is None:
                deepest = max(deepest, node.coord.depth)
                assert node.count == len(node.bodies)
                assert node.count <= capacity or node.coord.depth == 24
                if node.count > capacity:
                    crowded_floor = True
                for b in node.bodies:
                    assert node.lo_x <= b.position.x <= node.hi_x
                    assert node.lo_y <= b.position.y <= node.hi_y
                seen_ids.extend(b.id for b in node.bodies)
            else:
                assert len(node.children) == 4
                assert not node.bodies
                assert node.count == sum(c.count for c in node.children)
                q = 0.0
                for c in node.children:
                    q += c.total_charge
                assert node.total_charge == q
                stack.extend(node.children)
        assert sorted(seen_ids) == list(range(len(bodies)))
        if adversarial:
            assert deepest == 24 and crowded_floor


def test_modularity_reference_values_and_cluster_advantage():
    """One all-covering group scores exactly 0; two isolated pairs score
    0.5; detected organizations beat size-matched random partitions on two
    blob scenes, 20 out of 20."""
    bodies = clustered_bodies([(30.0, 30.0), (70.0, 70.0)],
                              per_cluster=15, spread=5.0, seed=1)
    graph = interaction_graph(bodies)
    assert modularity(graph, [range(len(bodies))]) == 0.0

    w = np.zeros((4, 4))
    w[0, 1] = w[1, 0] = w[2, 3] = w[3, 2] = 2.5
    assert abs(modularity(WeightedGraph(4, w), [[0, 1], [2, 3]]) - 0.5) <= 1e-12

    wins = 0
    for seed in range(20):
        bodies = clustered_bodies([(30.0, 30.0), (70.0, 70.0)],
                                  per_cluster=25, spread=5.0, seed=100 + seed)
        tree = build_tree(bodies, BOX_100, capacity=3)
        cut = CellSet.from_tree(tree, 4)
        orgs = organizations_from(group_cells2(cut, tree, seed=seed), tree)
        graph = interaction_graph(bodies)
        detected = organization_partition(orgs, len(bodies))

        ids = list(range(len(bodies)))
        random.Random(900 + seed).shuffle(ids)
        shuffled = []
        k = 0
        for g in detected:
            shuffled.append(ids[k:k + len(g)])
            k += len(g)
        if modularity(graph, detected) > modularity(graph, shuffled):
            wins += 1
    assert wins == 20


def test_radius_queries_match_linear_scan_on_100_states():
    """Tree radius queries return exactly the linear-scan id set, including
    bodies planted at exactly the query radius."""
    rng = random.Random(4242)
    for case in range(100):
        n = rng.randint(1, 300)
        capacity = rng.choice([1, 4, 16])
        bodies = uniform_bodies(n, seed=8800 + case, box=BOX_100)
        center = Vec2(float(rng.randrange(20, 80)), float(rng.randrange(20, 80)))
        planted = case % 3 == 0
        if planted:
            # Dyadic center and radius make the planted distance exact, so
            # the body sits exactly on the closed boundary.
            radius = rng.choice([4.0, 6.25, 12.5, 18.0])
            bodies[-1] = Body(n - 1, 0, Vec2(center.x + radius, center.y),
                              Vec2(0.0, 0.0), 1.0)
        else:
            radius = rng.uniform(0.5, 25.0)
        tree = build_tree(bodies, BOX_100, capacity)
        got = set(tree.query_radius(center, radius))
        assert got == linear_radius(bodies, center, radius)
        if planted:
            assert n - 1 in got
