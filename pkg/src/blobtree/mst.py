"""Euclidean minimum spanning tree, rooted at the lowest point."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import GeneralPositionError, PointSet


@dataclass(frozen=True)
class RootedMst:
    """The MST with every edge directed from a child ``u`` to its parent.

    An edge is identified by its child endpoint, so ``edges`` holds the pairs
    ``(u, parent[u])`` for every non-root ``u``.
    """

    root: int
    parent: tuple[int, ...]  # -1 at the root
    children: tuple[tuple[int, ...], ...]
    subtree_size: tuple[int, ...]
    lengths: tuple[float, ...]  # length of the edge above u, 0 at the root
    tin: tuple[int, ...] = field(repr=False)
    tout: tuple[int, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, p) for u, p in enumerate(self.parent) if p >= 0]

    @property
    def weight(self) -> float:
        return float(sum(self.lengths))

    def degree(self, u: int) -> int:
        return len(self.children[u]) + (self.parent[u] >= 0)

    def is_ancestor(self, u: int, v: int) -> bool:
        """True iff ``v`` lies in the subtree rooted at ``u`` (u counts)."""
        return self.tin[u] <= self.tin[v] < self.tout[u]

    def has_edge(self, u: int, v: int) -> bool:
        return self.parent[u] == v or self.parent[v] == u

    def child_of_edge(self, u: int, v: int) -> int:
        if self.parent[u] == v:
            return u
        if self.parent[v] == u:
            return v
        raise KeyError(f"({u}, {v}) is not an MST edge")


def build_mst(ps: PointSet) -> RootedMst:
    """Dense O(n^2) Prim, rooted at the point of minimum y."""
    n = len(ps)
    if n == 0:
        raise ValueError("empty point set")
    xy = ps.coords
    root = int(np.argmin(xy[:, 1]))
    parent = np.full(n, -1, dtype=np.int64)
    best = np.full(n, np.inf)
    best_from = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    lengths = np.zeros(n)
    u = root
    for _ in range(n - 1):
        done[u] = True
        d = np.hypot(xy[:, 0] - xy[u, 0], xy[:, 1] - xy[u, 1])
        closer = (~done) & (d < best)
        best[closer] = d[closer]
        best_from[closer] = u
        cand = np.where(done, np.inf, best)
        u = int(np.argmin(cand))
        # a near tie for the next edge would make the tree ill-defined
        ties = np.flatnonzero(np.abs(cand - cand[u]) <= 1e-12 * cand[u])
        ties = ties[ties != u]
        if ties.size:
            v = int(ties[0])
            raise GeneralPositionError(f"candidate MST edges to {u} and {v} have equal length", (u, v))
        parent[u] = best_from[u]
        lengths[u] = best[u]
    return _rooted(root, parent.tolist(), lengths.tolist())


def _rooted(root: int, parent: list[int], lengths: list[float]) -> RootedMst:
    n = len(parent)
    children: list[list[int]] = [[] for _ in range(n)]
    for u, p in enumerate(parent):
        if p >= 0:
            children[p].append(u)
    for c in children:
        c.sort()
    tin = [0] * n
    tout = [0] * n
    size = [1] * n
    order = []
    stack = [root]
    while stack:
        u = stack.pop()
        tin[u] = len(order)
        order.append(u)
        stack.extend(reversed(children[u]))
    for u in reversed(order):
        if parent[u] >= 0:
            size[parent[u]] += size[u]
    for u in range(n):
        tout[u] = tin[u] + size[u]
    return RootedMst(
        root=root,
        parent=tuple(parent),
        children=tuple(tuple(c) for c in children),
        subtree_size=tuple(size),
        lengths=tuple(float(x) for x in lengths),
        tin=tuple(tin),
        tout=tuple(tout),
    )


def subtree_points(t: RootedMst, u: int) -> set[int]:
    if not 0 <= u < t.n:
        raise KeyError(f"unknown point id {u}")
    out = set()
    stack = [u]
    while stack:
        v = stack.pop()
        out.add(v)
        stack.extend(t.children[v])
    return out


def forest_components(t: RootedMst, removed) -> list[set[int]]:
    """Connected components of the tree after deleting the ``removed`` edges.

    Edges are given as unordered point pairs.
    """
    cut = set()
    for u, v in removed:
        cut.add(t.child_of_edge(u, v))
    comps = []
    seen = [False] * t.n
    for start in range(t.n):
        if seen[start]:
            continue
        comp = set()
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.add(v)
            nbrs = [c for c in t.children[v] if c not in cut]
            if t.parent[v] >= 0 and v not in cut:
                nbrs.append(t.parent[v])
            for w in nbrs:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(comp)
    return comps
