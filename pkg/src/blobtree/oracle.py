"""Exhaustive baselines for small instances.

``mst_subset_oracle`` tries every way of marking MST edges as blob-internal
or tree-edge. ``partition_oracle`` assumes nothing about the MST: it tries
every set partition of the points, turns blocks of three or more points into
hulls and connects the contracted clusters as cheaply as possible.

Both are vectorized over the enumerated candidates with numpy.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .geometry import PointSet, convex_hull, perimeter
from .mst import build_mst
from .solver import BlobTreeSolution

SUBSET_MAX_N = 22
PARTITION_MAX_N = 10
_CHUNK = 1 << 15


@dataclass(frozen=True)
class OracleResult:
    cost: float
    solution: BlobTreeSolution
    nodes_examined: int


def _hull_perimeters(ps: PointSet, masks: np.ndarray) -> np.ndarray:
    """Hull perimeter of each point subset given as a bitmask (0 for size <= 1)."""
    uniq, inv = np.unique(masks, return_inverse=True)
    out = np.empty(uniq.size)
    for k, m in enumerate(uniq.tolist()):
        ids = [i for i in range(len(ps)) if m >> i & 1]
        out[k] = perimeter(convex_hull([ps[i] for i in ids])) if len(ids) > 1 else 0.0
    return out[inv.reshape(masks.shape)]


def _trivial(ps: PointSet) -> OracleResult | None:
    n = len(ps)
    if n == 0:
        raise ValueError("empty point set")
    if n == 1:
        return OracleResult(0.0, BlobTreeSolution((), (), 0.0), 1)
    return None


def _finish(ps: PointSet, groups: list[list[int]], edges: list[tuple[int, int]], examined: int) -> OracleResult:
    blobs, tree_edges = [], list(edges)
    for g in groups:
        if len(g) >= 3:
            blobs.append(convex_hull([ps[i] for i in g]))
        elif len(g) == 2:
            tree_edges.append((g[0], g[1]))  # a two-point blob is never cheaper
    sol = BlobTreeSolution(tuple(blobs), tuple(tree_edges), 0.0)
    cost = sol.recomputed_cost(ps)
    return OracleResult(cost, BlobTreeSolution(sol.blobs, sol.tree_edges, cost), examined)


def mst_subset_oracle(ps: PointSet) -> OracleResult:
    """Best labeling of MST edges as tree-edges or blob-internal edges."""
    n = len(ps)
    if n > SUBSET_MAX_N:
        raise ValueError(f"subset oracle is limited to n <= {SUBSET_MAX_N}, got {n}")
    done = _trivial(ps)
    if done:
        return done
    t = build_mst(ps)
    order = sorted(range(n), key=lambda u: t.tin[u])  # parents before children
    kids = [u for u in order if u != t.root]
    lengths = np.array([t.lengths[u] for u in kids])
    col = {u: k for k, u in enumerate(kids)}
    bits = np.int64(1) << np.arange(n, dtype=np.int64)
    total = 1 << (n - 1)
    best_cost, best_label = np.inf, 0
    for lo in range(0, total, _CHUNK):
        labels = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
        blue = (labels[:, None] >> np.arange(n - 1)) & 1
        # component head of every point: follow blue edges up to the first black one
        head = np.empty((labels.size, n), dtype=np.int64)
        head[:, t.root] = t.root
        for u in kids:
            head[:, u] = np.where(blue[:, col[u]] == 1, head[:, t.parent[u]], u)
        comp = np.zeros((labels.size, n), dtype=np.int64)
        rows = np.repeat(np.arange(labels.size), n)
        np.add.at(comp, (rows, head.ravel()), np.tile(bits, labels.size))
        cost = (1 - blue) @ lengths + _hull_perimeters(ps, comp).sum(axis=1)
        k = int(np.argmin(cost))
        if cost[k] < best_cost:
            best_cost, best_label = float(cost[k]), int(labels[k])

    groups: dict[int, list[int]] = {}
    edges = []
    head = {t.root: t.root}
    for u in kids:
        if best_label >> col[u] & 1:
            head[u] = head[t.parent[u]]
        else:
            head[u] = u
            edges.append((u, t.parent[u]))
    for u in order:
        groups.setdefault(head[u], []).append(u)
    return _finish(ps, list(groups.values()), edges, total)


@functools.lru_cache(maxsize=None)
def restricted_growth_strings(n: int) -> np.ndarray:
    """All set partitions of n items as restricted growth strings, one per row."""
    rgs = np.zeros((1, 1), dtype=np.int8)
    for _ in range(1, n):
        top = rgs.max(axis=1)
        reps = top.astype(np.int64) + 2
        base = np.repeat(rgs, reps, axis=0)
        nxt = np.concatenate([np.arange(r) for r in reps]).astype(np.int8)
        rgs = np.hstack([base, nxt[:, None]])
    rgs.setflags(write=False)
    return rgs


def _batched_prim(w: np.ndarray) -> np.ndarray:
    """MST weight of each (n x n) weight matrix in a stack."""
    m, n, _ = w.shape
    rows = np.arange(m)
    in_tree = np.zeros((m, n), dtype=bool)
    in_tree[:, 0] = True
    best = w[:, 0, :].copy()
    total = np.zeros(m)
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        v = np.argmin(cand, axis=1)
        total += cand[rows, v]
        in_tree[rows, v] = True
        best = np.minimum(best, w[rows, v, :])
    return total


def _prim_edges(w: np.ndarray) -> list[tuple[int, int]]:
    n = w.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best, src = w[0].copy(), np.zeros(n, dtype=np.int64)
    out = []
    for _ in range(n - 1):
        v = int(np.argmin(np.where(in_tree, np.inf, best)))
        if best[v] > 0:
            out.append((v, int(src[v])))
        in_tree[v] = True
        closer = w[v] < best
        best[closer], src[closer] = w[v][closer], v
    return out


def partition_oracle(ps: PointSet) -> OracleResult:
    """Best blob-tree over all set partitions of the points."""
    n = len(ps)
    if n > PARTITION_MAX_N:
        raise ValueError(f"partition oracle is limited to n <= {PARTITION_MAX_N}, got {n}")
    done = _trivial(ps)
    if done:
        return done
    xy = ps.coords
    d = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    rgs = restricted_growth_strings(n)
    bits = np.int64(1) << np.arange(n, dtype=np.int64)
    best_cost, best_row = np.inf, 0
    for lo in range(0, len(rgs), _CHUNK):
        part = rgs[lo: lo + _CHUNK].astype(np.int64)
        masks = np.stack([((part == k) * bits).sum(axis=1) for k in range(n)], axis=1)
        counts = (part[:, :, None] == np.arange(n)).sum(axis=1)
        big = counts >= 3
        hulls = np.where(big, _hull_perimeters(ps, masks), 0.0).sum(axis=1)
        in_big = np.take_along_axis(big, part, axis=1)
        same = (part[:, :, None] == part[:, None, :]) & in_big[:, :, None]
        cost = hulls + _batched_prim(np.where(same, 0.0, d[None]))
        k = int(np.argmin(cost))
        if cost[k] < best_cost:
            best_cost, best_row = float(cost[k]), lo + k

    part = rgs[best_row].astype(np.int64)
    groups = [np.flatnonzero(part == k).tolist() for k in range(int(part.max()) + 1)]
    w = d.copy()
    for g in groups:
        if len(g) >= 3:
            w[np.ix_(g, g)] = 0.0
    singles = [[i] for g in groups if len(g) < 3 for i in g]
    return _finish(ps, [g for g in groups if len(g) >= 3] + singles, _prim_edges(w), len(rgs))
