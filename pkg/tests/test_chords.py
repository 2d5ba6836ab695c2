import numpy as np
import pytest

from blobtree import PointSet, build_mst, convex_hull, solve
from blobtree import _kernels as K
from blobtree.chords import (
    Face,
    Facing,
    assign_vertex_edge,
    classify_chord,
    classify_endpoint,
    classify_face,
    classify_wall_edges,
    crossing_set,
    fan_faces,
)
from blobtree.geometry import Orientation, Segment, Side, orient, segments_cross_properly
from blobtree.mst import subtree_points
from blobtree.solver import _prepare, bulk_chords, compute_sizes

from conftest import lattice_instance, random_instance


def zigzag(n=8):
    # a path-shaped MST climbing to the right
    return PointSet([(i + 0.013 * i * i, 0.6 * (i % 2) + 0.05 * i) for i in range(n)])


def test_crossing_set_leaf_pair():
    ps = PointSet([(0, 0), (1, 0.2), (10, 5.3), (11.1, 5)])
    t = build_mst(ps)
    x, xplus = crossing_set(ps, t, 2, 3)
    assert x == []
    assert {tuple(sorted(e)) for e in xplus} == {tuple(sorted(e)) for e in t.edges if 2 in e or 3 in e}


def test_crossing_set_through_a_path():
    ps = zigzag()
    t = build_mst(ps)
    a, b = 0, 7
    x, _ = crossing_set(ps, t, a, b)
    seg = Segment(ps[a], ps[b])
    brute = [e for e in t.edges if a not in e and b not in e
             and segments_cross_properly(seg, Segment(ps[e[0]], ps[e[1]]))]
    assert x == brute and len(x) > 0


def test_crossing_set_root_with_two_edges():
    ps = PointSet([(0, 0), (-1, 0.5), (1.2, 0.7), (0.1, 3)])
    t = build_mst(ps)
    assert t.root == 0 and t.degree(0) == 2
    _, xplus = crossing_set(ps, t, 0, 3)
    for e in t.edges:
        if 0 in e or 3 in e:
            assert e in xplus


def test_classify_endpoint():
    ps = PointSet([(0, 0), (0.1, 2), (1, 1), (-1, 1.3)])
    assert classify_endpoint(ps, 0, 1, 2) is Side.RIGHT
    assert classify_endpoint(ps, 0, 1, 3) is Side.LEFT
    with pytest.raises(ValueError):
        classify_endpoint(ps, 0, 1, 1)


def test_chord_with_nothing_to_mix_is_valid():
    ps = PointSet([(0, 0), (1, 0.2), (10, 5.3), (11.1, 5)])
    t = build_mst(ps)
    rec = classify_chord(ps, t, 3, 2)
    assert rec.valid


def test_root_chord_is_right_facing():
    ps = lattice_instance(4)
    t = build_mst(ps)
    for b in range(len(ps)):
        if b != t.root:
            rec = classify_chord(ps, t, t.root, b)
            if rec.valid:
                assert rec.facing is Facing.RIGHT_FACING
                assert all(classify_endpoint(ps, t.root, b, v) is Side.LEFT
                           for v in rec.backward_points if v in {w for e in crossing_set(ps, t, t.root, b)[1] for w in e})


@pytest.mark.parametrize("seed", range(6))
def test_backward_points_by_traversal(seed):
    ps = lattice_instance(seed)
    t = build_mst(ps)
    n = len(ps)
    for a in range(n):
        for b in range(n):
            if ps[a].y >= ps[b].y:
                continue
            rec = classify_chord(ps, t, a, b)
            if not rec.valid:
                continue
            _, xplus = crossing_set(ps, t, a, b)
            cut = {t.child_of_edge(*e) for e in xplus}
            # start from each cut endpoint on the backward side and walk
            starts = set()
            for u in cut:
                for v in (u, t.parent[u]):
                    if v not in (a, b) and classify_endpoint(ps, a, b, v) is rec.facing.backward:
                        starts.add(v)
            seen, stack = set(starts), list(starts)
            while stack:
                v = stack.pop()
                nbrs = [c for c in t.children[v] if c not in cut]
                if t.parent[v] >= 0 and v not in cut:
                    nbrs.append(t.parent[v])
                for w in nbrs:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            assert seen == set(rec.backward_points)


def test_relabeling_invariance():
    ps = lattice_instance(9)
    perm = np.random.default_rng(1).permutation(len(ps))
    qs = PointSet(ps.coords[perm])
    inv = np.argsort(perm)
    t, tq = build_mst(ps), build_mst(qs)
    for a in range(len(ps)):
        for b in range(len(ps)):
            if ps[a].y < ps[b].y:
                r1 = classify_chord(ps, t, a, b)
                r2 = classify_chord(qs, tq, int(inv[a]), int(inv[b]))
                assert r1.valid == r2.valid and r1.facing == r2.facing
                assert {int(inv[v]) for v in r1.backward_points} == set(r2.backward_points)


def test_wall_edges():
    ps = PointSet([(0, 0), (1, 0.2), (10, 5.3), (11.1, 5)])
    t = build_mst(ps)
    assert classify_wall_edges(ps, t, 0, 1) == ([], [])
    ps = PointSet([(0, 0), (0.3, 1.7), (2.2, 0.4), (2.6, 2.1), (1.4, 3.9)])
    t = build_mst(ps)
    for b in range(5):
        for c in range(5):
            if b != c:
                e1, x1 = classify_wall_edges(ps, t, b, c)
                e2, x2 = classify_wall_edges(ps, t, c, b)
                assert e1 == x2 and x1 == e2
                for u, p in e1:
                    assert orient(ps[b], ps[c], ps[u]) == Orientation.RIGHT
                    assert orient(ps[b], ps[c], ps[p]) == Orientation.LEFT


def test_single_exit_edge():
    # MST: 3 -> 0, 2 -> 3, 1 -> 2; only 2-3 crosses the upward wall 0 -> 1, child on the left
    ps = PointSet([(0.02, -2), (-0.03, 5), (-0.5, 1.5), (0.6, 1.45)])
    t = build_mst(ps)
    assert t.parent[2] == 3
    assert classify_wall_edges(ps, t, 0, 1) == ([], [(2, 3)])
    assert classify_wall_edges(ps, t, 1, 0) == ([(2, 3)], [])


@pytest.mark.parametrize("seed", range(10))
def test_vertex_edges_partition_exterior(seed):
    ps = random_instance(seed, 30)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        sub = rng.choice(30, 8, replace=False)
        blob = convex_hull([ps[i] for i in sub])
        faces = fan_faces(ps, blob)
        ids = list(blob.vertices)
        for k, w in enumerate(ids):
            prev, nxt = ids[k - 1], ids[(k + 1) % len(ids)]
            for o in range(30):
                if o in ids:
                    continue
                hits = sum(assign_vertex_edge(ps, f, w, o) for f in faces)
                # edges into the polygon's angle at w belong to no face
                inward = orient(ps[prev], ps[w], ps[o]) == Orientation.LEFT and \
                    orient(ps[w], ps[nxt], ps[o]) == Orientation.LEFT
                assert hits == (0 if inward else 1), (w, o)


def test_face_with_invalid_chords():
    for seed in range(40):
        ps = lattice_instance(seed)
        t = build_mst(ps)
        n = len(ps)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if len({a, b, c}) < 3 or not (ps[a].y < ps[b].y and ps[a].y < ps[c].y):
                        continue
                    if orient(ps[a], ps[b], ps[c]) != Orientation.LEFT:
                        continue
                    if not classify_chord(ps, t, a, b).valid and not classify_chord(ps, t, a, c).valid:
                        assert classify_face(ps, t, Face(a, b, c)) is None
                        return
    pytest.fail("no triangle with two invalid chords found")


@pytest.mark.parametrize("seed", range(15))
def test_bulk_chords_match_reference(seed):
    ps = lattice_instance(seed) if seed % 3 else random_instance(seed, 25)
    t = build_mst(ps)
    facing, csize = bulk_chords(ps, t)
    n = len(ps)
    for a in range(n):
        for b in range(n):
            if ps[a].y >= ps[b].y:
                assert facing[a, b] == 0
                continue
            rec = classify_chord(ps, t, a, b)
            if not rec.valid:
                assert facing[a, b] == K.INVALID and csize[a, b] == -1
            else:
                want = K.LEFT_FACING if rec.facing is Facing.LEFT_FACING else K.RIGHT_FACING
                assert facing[a, b] == want and csize[a, b] == rec.size


@pytest.mark.parametrize("seed", range(10))
def test_wall_tables_match_reference(seed):
    ps = lattice_instance(seed) if seed % 2 else random_instance(seed, 25)
    t = build_mst(ps)
    p = _prepare(ps, t)
    ent_cnt, ent_size, ex_cnt, ex_child = K.wall_tables(p.x, p.y, p.parent, p.size)
    sizes = compute_sizes(ps, t)
    for (b, c), s in sizes["wall"].items():
        entry, exit_ = classify_wall_edges(ps, t, b, c)
        assert ent_cnt[b, c] == len(entry) and ex_cnt[b, c] == len(exit_)
        assert ent_size[b, c] == s == sum(len(subtree_points(t, u)) for u, _ in entry)
        if exit_:
            assert ex_child[b, c] == exit_[0][0]


def test_compute_sizes_examples():
    ps = lattice_instance(2)
    t = build_mst(ps)
    sizes = compute_sizes(ps, t)
    leaves = [u for u in range(len(ps)) if not t.children[u]]
    assert all(sizes["edge"][u] == 1 for u in leaves)
    assert any(s == 0 for s in sizes["chord"].values())
    facing, csize = bulk_chords(ps, t)
    assert {k: int(csize[k]) for k in sizes["chord"]} == sizes["chord"]


def test_wall_size_can_exceed_n():
    # many entries across one long wall
    found = False
    for seed in range(40):
        ps = random_instance(seed, 40)
        t = build_mst(ps)
        p = _prepare(ps, t)
        _, ent_size, _, _ = K.wall_tables(p.x, p.y, p.parent, p.size)
        if ent_size.max() > len(ps):
            found = True
            break
    assert found


@pytest.mark.parametrize("seed", range(8))
def test_fan_faces_of_solution_blobs(seed):
    ps = lattice_instance(seed)
    t = build_mst(ps)
    for blob in solve(ps).blobs:
        faces = fan_faces(ps, blob)
        assert len(faces) == len(blob)
        kinds = [classify_face(ps, t, f) for f in faces]
        assert all(k is not None for k in kinds)
        assert sum(k.kind.is_exit for k in kinds) == 1
