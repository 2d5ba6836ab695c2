"""Minimum-cost blob-tree by dynamic programming over bottom-vertex fans.

Three families of subproblems are solved in order of increasing size:

* ``edge[u]``: the best structure for the subtree below ``u`` when the MST
  edge from ``u`` to its parent is a tree-edge (its length included);
  ``edge[root]`` is the overall answer.
* ``wall[b, c]``: the summed ``edge`` values of the MST edges entering a
  blob across the directed wall b -> c.
* ``chord[a, b]``: the best backward part of a blob whose bottom-vertex fan
  contains the chord ab, including everything that hangs off it.

Within one size the order is edge, wall, chord. Every read of a table entry
that is not yet final counts as infinite, so each value is a cost of some
feasible structure; the optimum's own configuration only ever reads
strictly earlier entries.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels as K
from .chords import Face, classify_chord, classify_wall_edges, face_edges, fan_faces
from .geometry import (
    Orientation,
    PointSet,
    Polygon,
    Side,
    convex_hull,
    convex_polygons_intersect,
    orient,
    perimeter,
)
from .mst import RootedMst, build_mst

log = logging.getLogger(__name__)

COST_RTOL = 1e-9


@dataclass(frozen=True)
class BlobTreeSolution:
    blobs: tuple[Polygon, ...]
    tree_edges: tuple[tuple[int, int], ...]
    cost: float

    @property
    def blob_vertices(self) -> list[list[int]]:
        return [list(b.vertices) for b in self.blobs]

    def recomputed_cost(self, ps: PointSet) -> float:
        return sum(perimeter(b) for b in self.blobs) + sum(ps.dist(i, j) for i, j in self.tree_edges)

    def canonical(self) -> tuple:
        """Order-independent form, handy for comparing two solutions."""
        blobs = tuple(sorted(b.canonical() for b in self.blobs))
        edges = tuple(sorted(tuple(sorted(e)) for e in self.tree_edges))
        return blobs, edges


@dataclass
class SubproblemTables:
    n: int
    root: int
    edge_cost: np.ndarray
    wall_cost: np.ndarray
    chord_cost: np.ndarray  # inf where the chord is invalid
    chord_step: np.ndarray  # best value using at least one triangle
    facing: np.ndarray
    edge_size: np.ndarray
    wall_size: np.ndarray
    chord_size: np.ndarray  # -1 where the chord is invalid
    edge_kind: np.ndarray
    edge_witness: np.ndarray
    chord_choice: np.ndarray
    step_choice: np.ndarray
    exit_count: np.ndarray = field(repr=False)

    @property
    def cost(self) -> float:
        return float(self.edge_cost[self.root])

    def valid_chords(self) -> list[tuple[int, int]]:
        return [tuple(map(int, ab)) for ab in np.argwhere(self.facing > 0)]


@dataclass
class _Prepared:
    ps: PointSet
    tree: RootedMst
    x: np.ndarray
    y: np.ndarray
    parent: np.ndarray
    children: np.ndarray
    size: np.ndarray
    elen: np.ndarray


def _prepare(ps: PointSet, tree: Optional[RootedMst] = None) -> _Prepared:
    t = tree or build_mst(ps)
    n = len(ps)
    width = max([1] + [len(c) for c in t.children])
    children = np.full((n, width), -1, dtype=np.int64)
    for u, ch in enumerate(t.children):
        children[u, : len(ch)] = ch
    return _Prepared(
        ps=ps,
        tree=t,
        x=np.ascontiguousarray(ps.coords[:, 0]),
        y=np.ascontiguousarray(ps.coords[:, 1]),
        parent=np.array(t.parent, dtype=np.int64),
        children=children,
        size=np.array(t.subtree_size, dtype=np.int64),
        elen=np.array(t.lengths, dtype=float),
    )


def bulk_chords(ps: PointSet, tree: Optional[RootedMst] = None) -> tuple[np.ndarray, np.ndarray]:
    """Facing codes and backward sizes of all chords, computed in bulk."""
    p = _prepare(ps, tree)
    t = p.tree
    return K.chord_tables(p.x, p.y, p.parent, p.children, p.size,
                          np.array(t.tin, dtype=np.int64), np.array(t.tout, dtype=np.int64), t.root)


def compute_sizes(ps: PointSet, t: RootedMst, chords=None) -> dict:
    """Sizes of all subproblems from per-query classification.

    ``chords`` maps (a, b) to ChordRecord; missing pairs are classified here.
    """
    n = len(ps)
    chords = dict(chords or {})
    sizes = {"edge": {u: t.subtree_size[u] for u in range(n)}, "wall": {}, "chord": {}}
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            entry, _ = classify_wall_edges(ps, t, a, b)
            sizes["wall"][a, b] = sum(t.subtree_size[u] for u, _ in entry)
            if ps[a].y < ps[b].y:
                rec = chords.get((a, b)) or classify_chord(ps, t, a, b)
                if rec.valid:
                    sizes["chord"][a, b] = rec.size
    return sizes


def _task_order(n, facing, csize, ent_size, size):
    ei = np.arange(n)
    wb, wc = np.nonzero(ent_size > 0)
    ca, cb = np.nonzero(facing > 0)
    kind = np.concatenate([np.full(n, K.TASK_EDGE), np.full(wb.size, K.TASK_WALL), np.full(ca.size, K.TASK_CHORD)])
    ii = np.concatenate([ei, wb, ca])
    jj = np.concatenate([np.full(n, -1), wc, cb])
    sz = np.concatenate([size, ent_size[wb, wc], csize[ca, cb]])
    order = np.lexsort((jj, ii, kind, sz))
    return (kind[order].astype(np.int64), ii[order].astype(np.int64), jj[order].astype(np.int64))


def solve_tables(ps: PointSet, tree: Optional[RootedMst] = None) -> tuple[SubproblemTables, RootedMst]:
    p = _prepare(ps, tree)
    t = p.tree
    n = len(ps)
    tin = np.array(t.tin, dtype=np.int64)
    tout = np.array(t.tout, dtype=np.int64)
    ent_cnt, ent_size, ex_cnt, ex_child = K.wall_tables(p.x, p.y, p.parent, p.size)
    facing, csize = K.chord_tables(p.x, p.y, p.parent, p.children, p.size, tin, tout, t.root)

    # directed walls whose single exit edge hangs below u, grouped by u
    wb, wc = np.nonzero(ex_cnt == 1)
    owner = ex_child[wb, wc]
    order = np.argsort(owner, kind="stable")
    wb, wc, owner = wb[order], wc[order], owner[order]
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, owner + 1, 1)
    ptr = np.cumsum(ptr)

    tt, ti, tj = _task_order(n, facing, csize, ent_size, p.size)
    log.debug("n=%d valid chords=%d tasks=%d", n, int((facing > 0).sum()), tt.size)
    (edge_val, edge_kind, edge_w, wall_val, chord_val, chord_step,
     chord_choice, step_choice) = K.run_dp(
        p.x, p.y, p.parent, p.children, p.size, p.elen, t.root, facing, csize,
        ent_size, ex_cnt, ex_child, ptr, wb.astype(np.int64), wc.astype(np.int64), tt, ti, tj)
    tables = SubproblemTables(
        n=n, root=t.root, edge_cost=edge_val, wall_cost=wall_val, chord_cost=chord_val,
        chord_step=chord_step, facing=facing, edge_size=p.size, wall_size=ent_size,
        chord_size=csize, edge_kind=edge_kind, edge_witness=edge_w,
        chord_choice=chord_choice, step_choice=step_choice, exit_count=ex_cnt,
    )
    return tables, t


def solve(ps: PointSet) -> BlobTreeSolution:
    """Minimum-cost blob-tree of ``ps`` (which must be in general position)."""
    n = len(ps)
    if n == 0:
        raise ValueError("empty point set")
    if n == 1:
        return BlobTreeSolution((), (), 0.0)
    tables, t = solve_tables(ps)
    return reconstruct(tables, ps, t)


def _right_chain(tables, a, b, step=False):
    """Fan vertices from the right digon up to b, for a left-facing chord."""
    out = [b]
    c = tables.step_choice[a, b] if step else tables.chord_choice[a, b]
    while c >= 0:
        out.append(int(c))
        c = tables.chord_choice[a, c]
    if c == -2:
        raise RuntimeError(f"dangling chord choice below ({a}, {b})")
    return out[::-1]


def _left_chain(tables, a, b, step=False):
    """Fan vertices from b out to the left digon, for a right-facing chord."""
    out = [b]
    c = tables.step_choice[a, b] if step else tables.chord_choice[a, b]
    while c >= 0:
        out.append(int(c))
        c = tables.chord_choice[a, c]
    if c == -2:
        raise RuntimeError(f"dangling chord choice below ({a}, {b})")
    return out


def _blob_fan(tables: SubproblemTables, u: int) -> list[int]:
    kind = tables.edge_kind[u]
    w0, w1, w2 = (int(v) for v in tables.edge_witness[u])
    if kind == K.EXIT_TRIANGLE:
        return [w0] + _right_chain(tables, w0, w1) + _left_chain(tables, w0, w2)
    if kind in (K.EXIT_RIGHT_DIGON, K.ROOT_DIGON):
        return [w0] + _left_chain(tables, w0, w1, step=True)
    if kind == K.EXIT_LEFT_DIGON:
        return [w0] + _right_chain(tables, w0, w1, step=True)
    raise RuntimeError(f"edge[{u}] has no blob")


def reconstruct(tables: SubproblemTables, ps: PointSet, t: RootedMst) -> BlobTreeSolution:
    """Walk the recorded choices down from the root."""
    blobs: list[Polygon] = []
    tree_edges: list[tuple[int, int]] = []
    stack = [t.root]
    while stack:
        u = stack.pop()
        if u != t.root:
            tree_edges.append((u, t.parent[u]))
        if tables.edge_kind[u] == K.BARE:
            stack.extend(t.children[u])
            continue
        fan = _blob_fan(tables, u)
        blob = Polygon(tuple(ps[v] for v in fan))
        blobs.append(blob)
        for face in fan_faces(ps, blob):
            entry, vertex_entries, _ = face_edges(ps, t, face)
            stack.extend(v for v, _ in entry + vertex_entries)
    sol = BlobTreeSolution(tuple(blobs), tuple(tree_edges), tables.cost)
    again = sol.recomputed_cost(ps)
    if not math.isclose(again, sol.cost, rel_tol=COST_RTOL, abs_tol=COST_RTOL):
        raise RuntimeError(f"reconstructed cost {again!r} differs from table value {sol.cost!r}")
    return sol


def validate_solution(ps: PointSet, sol: BlobTreeSolution, rtol: float = COST_RTOL) -> list[str]:
    """Structural check of a solution; returns human-readable violations."""
    problems = []
    n = len(ps)
    for k, blob in enumerate(sol.blobs):
        if len(blob) < 3:
            problems.append(f"blob {k} has {len(blob)} vertices")
        elif not blob.is_convex():
            problems.append(f"blob {k} is not convex and counterclockwise: {blob.vertices}")
        if len(set(blob.vertices)) != len(blob):
            problems.append(f"blob {k} repeats a vertex")
    for i in range(len(sol.blobs)):
        for j in range(i + 1, len(sol.blobs)):
            if convex_polygons_intersect(sol.blobs[i], sol.blobs[j]):
                problems.append(f"blobs intersect: {i} and {j}")

    # contract every blob (with the points it encloses) to one node
    node = list(range(n))
    for k, blob in enumerate(sol.blobs):
        if len(blob) < 3:
            continue
        for p in ps:
            if blob.contains(p):
                node[p.id] = n + k
    parent = {v: v for v in set(node)}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in sol.tree_edges:
        if not (0 <= i < n and 0 <= j < n) or i == j:
            problems.append(f"tree-edge ({i}, {j}) is not a segment between input points")
            continue
        ri, rj = find(node[i]), find(node[j])
        if ri == rj:
            problems.append(f"tree-edge ({i}, {j}) closes a cycle after contraction")
        else:
            parent[ri] = rj
    roots = {find(v) for v in set(node)}
    if len(roots) != 1:
        problems.append(f"contraction is disconnected: {len(roots)} components")

    again = sol.recomputed_cost(ps)
    if not math.isclose(again, sol.cost, rel_tol=rtol, abs_tol=rtol):
        problems.append(f"cost mismatch: stated {sol.cost!r}, recomputed {again!r}")
    return problems


def choice_violations(tables: SubproblemTables) -> list[str]:
    """Recorded choices that read a problem not strictly smaller than the reader.

    Chord-to-chord and edge-to-chord reads must be strictly smaller. Reads of
    edge and wall problems by a chord may be of equal size, since those are
    solved earlier within the same size class.
    """
    out = []
    cs = tables.chord_size
    for a, b in np.argwhere(tables.facing > 0):
        for table, what in ((tables.chord_choice, "choice"), (tables.step_choice, "step")):
            c = table[a, b]
            if c >= 0 and not cs[a, c] < cs[a, b]:
                out.append(f"chord[{a},{b}] {what} reads chord[{a},{c}] of size {cs[a, c]} >= {cs[a, b]}")
    for u in range(tables.n):
        kind = tables.edge_kind[u]
        if kind == K.BARE or u == tables.root:
            continue
        w0, w1, w2 = tables.edge_witness[u]
        reads = [(w0, w1)] + ([(w0, w2)] if kind == K.EXIT_TRIANGLE else [])
        for a, b in reads:
            if not cs[a, b] < tables.edge_size[u]:
                out.append(f"edge[{u}] reads chord[{a},{b}] of size {cs[a, b]} >= {tables.edge_size[u]}")
    return out


def is_hull_of_mst_subtree(ps: PointSet, t: RootedMst, blob: Polygon) -> bool:
    """True iff the points enclosed by ``blob`` induce a connected MST subtree
    whose convex hull is ``blob``."""
    inside = {p.id for p in ps if blob.contains(p)}
    if convex_hull([ps[i] for i in inside]).canonical() != blob.canonical():
        return False
    start = next(iter(inside))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        nbrs = list(t.children[v]) + ([t.parent[v]] if t.parent[v] >= 0 else [])
        for w in nbrs:
            if w in inside and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == inside


def blob_faces_ok(ps: PointSet, t: RootedMst, blob: Polygon, chord_cache=None) -> tuple[bool, list]:
    """Fan faces of an optimal blob: exactly one exit face, all others valid."""
    from .chords import classify_face

    cands = [classify_face(ps, t, f, chord_cache) for f in fan_faces(ps, blob)]
    if any(c is None for c in cands):
        return False, cands
    return sum(c.kind.is_exit for c in cands) == 1, cands


__all__ = [
    "BlobTreeSolution",
    "SubproblemTables",
    "Face",
    "Side",
    "Orientation",
    "orient",
    "solve",
    "solve_tables",
    "reconstruct",
    "validate_solution",
    "choice_violations",
    "compute_sizes",
    "bulk_chords",
    "is_hull_of_mst_subtree",
    "blob_faces_ok",
]
