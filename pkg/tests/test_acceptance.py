"""Acceptance criteria 1-10, one test each.

Every expected value comes from an independent computation (the two
exhaustive oracles, the MST weight, or repeated runs); nothing is asserted
from a precomputed constant.
"""

import json
import math
import statistics
import subprocess
import sys
import time

import numpy as np
import pytest

from blobtree import build_mst, convex_hull, solve, validate_solution
from blobtree.bench import warm_up
from blobtree.chords import classify_endpoint, crossing_set
from blobtree.instances import cluster_with_far_point, generate
from blobtree.oracle import mst_subset_oracle, partition_oracle
from blobtree.render import render_svg
from blobtree.solver import blob_faces_ok, is_hull_of_mst_subtree

REL = 1e-9
KINDS = ("uniform", "cluster")


def _close(a, b, rel=REL):
    return math.isclose(a, b, rel_tol=rel, abs_tol=rel)


@pytest.fixture(scope="module")
def partition_runs():
    """Partition-oracle optima for 200 instances per generator and n = 1..9."""
    runs = []
    for n in range(1, 10):
        for kind in KINDS:
            for seed in range(200):
                ps = generate(kind, n, 10_000 * n + seed)
                runs.append((ps, partition_oracle(ps)))
    return runs


@pytest.fixture(scope="module")
def subset_runs():
    """MST-subset-oracle optima for 100 instances per generator and n = 10..16."""
    runs = []
    for n in range(10, 17):
        for kind in KINDS:
            for seed in range(100):
                ps = generate(kind, n, 20_000 * n + seed)
                runs.append((ps, mst_subset_oracle(ps)))
    return runs


def test_criterion_01_partition_oracle_equivalence(partition_runs):
    costs = [(len(ps), solve(ps).cost, res.cost) for ps, res in partition_runs]
    bad = [c for c in costs if not _close(c[1], c[2])]
    with_blobs = sum(bool(res.solution.blobs) for _, res in partition_runs)
    print(f"\ncriterion 1: {len(partition_runs)} instances, {with_blobs} with blobs, {len(bad)} mismatches")
    assert len(partition_runs) >= 9 * 2 * 200
    assert with_blobs > 0
    assert bad == []


def test_criterion_02_subset_oracle_equivalence(subset_runs):
    costs = [(len(ps), solve(ps).cost, res.cost) for ps, res in subset_runs]
    bad = [c for c in costs if not _close(c[1], c[2])]
    with_blobs = sum(bool(res.solution.blobs) for _, res in subset_runs)
    print(f"\ncriterion 2: {len(subset_runs)} instances, {with_blobs} with blobs, {len(bad)} mismatches")
    assert with_blobs > 0
    assert bad == []


def test_criterion_03_optimal_blobs_are_mst_subtree_hulls(partition_runs):
    violations = []
    for ps, res in partition_runs:
        t = build_mst(ps)
        mst_edges = {tuple(sorted(e)) for e in t.edges}
        for blob in res.solution.blobs:
            if not is_hull_of_mst_subtree(ps, t, blob):
                violations.append(("blob", blob.vertices))
        for e in res.solution.tree_edges:
            if tuple(sorted(e)) not in mst_edges:
                violations.append(("edge", e))
    assert violations == []


def test_criterion_04_crossing_edges_have_one_endpoint_per_side():
    violations = checked = 0
    for seed in range(50):
        n = 10 + seed % 31
        ps = generate(KINDS[seed % 2], n, 30_000 + seed)
        t = build_mst(ps)
        for a in range(n):
            for b in range(n):
                if ps[a].y >= ps[b].y:
                    continue
                x, _ = crossing_set(ps, t, a, b)
                for u, p in x:
                    checked += 1
                    if classify_endpoint(ps, a, b, u) is classify_endpoint(ps, a, b, p):
                        violations += 1
    print(f"\ncriterion 4: {checked} crossing edges checked")
    assert checked > 0 and violations == 0


def test_criterion_05_one_exit_face_per_optimal_blob(partition_runs, subset_runs):
    violations, blobs = [], 0
    for ps, res in partition_runs + subset_runs:
        if not res.solution.blobs:
            continue
        t = build_mst(ps)
        cache = {}
        for blob in res.solution.blobs:
            blobs += 1
            ok, kinds = blob_faces_ok(ps, t, blob, cache)
            if not ok:
                violations.append((blob.vertices, [k and k.kind for k in kinds]))
    print(f"\ncriterion 5: {blobs} optimal blobs checked")
    assert blobs > 0 and violations == []


def _mixed_instances(count=300, max_n=60):
    kinds = ("uniform", "cluster", "circle", "grid")
    for k in range(count):
        n = 4 + (k * 7) % (max_n - 3)
        yield generate(kinds[k % 4], n, 40_000 + k)


def test_criterion_06_solutions_pass_validation():
    problems, count = [], 0
    for ps in _mixed_instances():
        count += 1
        sol = solve(ps)
        found = validate_solution(ps, sol)
        if found:
            problems.append((len(ps), found))
    assert count >= 300 and problems == []


def test_criterion_07_cost_bounded_by_mst():
    over = []
    for ps in _mixed_instances(200):
        if solve(ps).cost > build_mst(ps).weight * (1 + 1e-12):
            over.append(len(ps))
    for seed in range(100):
        ps = generate(KINDS[seed % 2], 3, 50_000 + seed)
        cost, w = solve(ps).cost, build_mst(ps).weight
        if not math.isclose(cost, w, rel_tol=1e-12):
            over.append(("n=3", cost, w))
    assert over == []


def test_criterion_08_regimes():
    ps = cluster_with_far_point(m=15, seed=8)
    sol, ref = solve(ps), mst_subset_oracle(ps)
    hull = convex_hull(list(ps)[:15]).canonical()
    assert [b.canonical() for b in sol.blobs] == [hull]
    assert len(sol.tree_edges) == 1
    assert _close(sol.cost, ref.cost)
    assert sol.canonical() == ref.solution.canonical()

    ps = generate("circle", 12, 8)
    sol, ref = solve(ps), mst_subset_oracle(ps)
    t = build_mst(ps)
    assert sol.blobs == () and ref.solution.blobs == ()
    assert {tuple(sorted(e)) for e in sol.tree_edges} == {tuple(sorted(e)) for e in t.edges}
    assert _close(sol.cost, ref.cost) and _close(sol.cost, t.weight)


def test_criterion_09_cubic_scaling():
    warm_up()

    def median_time(n):
        times = []
        for k in range(5):
            ps = generate("uniform", n, 60_000 + k)
            t0 = time.perf_counter()
            solve(ps)
            times.append(time.perf_counter() - t0)
        return statistics.median(times)

    t200, t400 = median_time(200), median_time(400)
    ratio = t400 / t200
    print(f"\ncriterion 9: median 200 -> {t200:.3f}s, 400 -> {t400:.3f}s, ratio {ratio:.2f}")
    assert 5.0 <= ratio <= 11.0


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "blobtree.cli", *args], capture_output=True, check=True).stdout


def test_criterion_10_determinism(tmp_path):
    for kind in ("cluster", "uniform", "grid"):
        a, b = generate(kind, 40, 7), generate(kind, 40, 7)
        assert np.array_equal(a.coords, b.coords)
        s1, s2 = solve(a), solve(b)
        assert s1 == s2
        assert render_svg(a, s1, build_mst(a)) == render_svg(b, s2, build_mst(b))

    inst = tmp_path / "c.txt"
    inst.write_bytes(_cli("generate", "cluster", "25", "--seed", "3"))
    assert _cli("generate", "cluster", "25", "--seed", "3") == inst.read_bytes()
    assert _cli("render", str(inst)) == _cli("render", str(inst))
    first = json.loads(_cli("solve", str(inst)))
    second = json.loads(_cli("solve", str(inst)))
    first.pop("time_ms")
    second.pop("time_ms")
    assert first == second
