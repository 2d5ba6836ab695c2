"""Crossing sets, chord validity and facing, wall edges and fan faces.

These are straightforward per-query implementations. The solver computes
the same quantities in bulk (see ``_kernels``); the two are cross-checked
in the test suite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .geometry import (
    Orientation,
    PointSet,
    Polygon,
    Segment,
    Side,
    boundary_curve_side,
    orient,
    segments_cross_properly,
)
from .mst import RootedMst, forest_components

Edge = tuple[int, int]  # (child, parent)


class Facing(enum.Enum):
    LEFT_FACING = "left"
    RIGHT_FACING = "right"

    @property
    def forward(self) -> Side:
        return Side.LEFT if self is Facing.LEFT_FACING else Side.RIGHT

    @property
    def backward(self) -> Side:
        return self.forward.flip()


class FaceKind(enum.Enum):
    LR_TRIANGLE = "LR"
    RL_TRIANGLE = "RL"
    EXIT_TRIANGLE = "exit-triangle"
    ENTRY_DIGON = "entry-digon"
    EXIT_DIGON = "exit-digon"
    ROOT_DIGON = "root-digon"

    @property
    def is_exit(self) -> bool:
        return self in (FaceKind.EXIT_TRIANGLE, FaceKind.EXIT_DIGON, FaceKind.ROOT_DIGON)


@dataclass(frozen=True)
class ChordRecord:
    a: int
    b: int
    valid: bool
    facing: Optional[Facing] = None
    backward_points: frozenset = frozenset()
    forward_points: frozenset = frozenset()

    @property
    def size(self) -> int:
        return len(self.backward_points)


@dataclass(frozen=True)
class Face:
    """One face of a bottom-vertex fan.

    A triangle ``(apex, b, c)`` is counterclockwise, so ``b`` lies right of
    the ray apex->c and the wall runs b -> c. A digon has ``c = None`` and
    ``side`` says whether it is the rightmost (wall apex -> b) or the
    leftmost (wall b -> apex) face of the fan.
    """

    apex: int
    b: int
    c: Optional[int] = None
    side: Optional[Side] = None

    @property
    def is_triangle(self) -> bool:
        return self.c is not None

    @property
    def wall(self) -> Edge:
        if self.c is not None:
            return (self.b, self.c)
        return (self.apex, self.b) if self.side is Side.RIGHT else (self.b, self.apex)

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.apex, self.b) if self.c is None else (self.apex, self.b, self.c)


@dataclass(frozen=True)
class FaceCandidate:
    kind: FaceKind
    face: Face
    entry_edges_crossing_wall: tuple[Edge, ...] = ()
    vertex_assigned_entries: tuple[Edge, ...] = ()
    exit_edges: tuple[Edge, ...] = field(default=())

    @property
    def apex(self) -> int:
        return self.face.apex

    @property
    def wall(self) -> Edge:
        return self.face.wall

    @property
    def entries(self) -> tuple[Edge, ...]:
        return self.entry_edges_crossing_wall + self.vertex_assigned_entries


def crossing_set(ps: PointSet, t: RootedMst, a: int, b: int) -> tuple[list[Edge], list[Edge]]:
    """MST edges properly crossing segment ab, and those plus the edges at a or b."""
    if a == b:
        raise ValueError("crossing set needs two distinct points")
    seg = Segment(ps[a], ps[b])
    x, incident = [], []
    for u, p in t.edges:
        if a in (u, p) or b in (u, p):
            incident.append((u, p))
        elif segments_cross_properly(seg, Segment(ps[u], ps[p])):
            x.append((u, p))
    return x, x + incident


def classify_endpoint(ps: PointSet, a: int, b: int, v: int) -> Side:
    if v in (a, b):
        raise ValueError("chord endpoints are not classified")
    return boundary_curve_side(ps[a], ps[b], ps[v])


def classify_chord(ps: PointSet, t: RootedMst, a: int, b: int) -> ChordRecord:
    if not ps[a].y < ps[b].y:
        raise ValueError("chord (a, b) needs a strictly below b")
    _, xplus = crossing_set(ps, t, a, b)
    comps = forest_components(t, xplus)
    where = {v: k for k, comp in enumerate(comps) for v in comp}
    label: dict[int, Side] = {}
    for edge in xplus:
        for v in edge:
            if v in (a, b):
                continue
            side = classify_endpoint(ps, a, b, v)
            if label.setdefault(where[v], side) is not side:
                return ChordRecord(a, b, valid=False)
    if a == t.root:
        forward = Side.RIGHT
    else:
        forward = label[where[t.root]]
    back, fwd = set(), set()
    for k, comp in enumerate(comps):
        if a in comp or b in comp:
            continue
        (fwd if label[k] is forward else back).update(comp)
    facing = Facing.RIGHT_FACING if forward is Side.RIGHT else Facing.LEFT_FACING
    return ChordRecord(a, b, True, facing, frozenset(back), frozenset(fwd))


def classify_wall_edges(ps: PointSet, t: RootedMst, b: int, c: int) -> tuple[list[Edge], list[Edge]]:
    """Split the MST edges crossing the directed wall b -> c.

    An entry edge goes from a child right of the wall to a parent left of it.
    """
    x, _ = crossing_set(ps, t, b, c)
    entry, exit_ = [], []
    for u, p in x:
        if orient(ps[b], ps[c], ps[u]) == Orientation.RIGHT:
            entry.append((u, p))
        else:
            exit_.append((u, p))
    return entry, exit_


def assign_vertex_edge(ps: PointSet, face: Face, vertex: int, other: int) -> bool:
    """Whether the MST edge ``vertex``-``other`` leaves ``vertex`` inside the
    exterior sector that ``face`` owns at that vertex."""
    a, b, c = face.apex, face.b, face.c
    if other in face.vertices or vertex not in face.vertices:
        return False
    P, o = ps.points, ps[other]
    if face.is_triangle:
        if vertex == b:
            return orient(P[a], P[b], o) == Orientation.LEFT and orient(P[b], P[c], o) == Orientation.RIGHT
        if vertex == c:
            return orient(P[a], P[c], o) == Orientation.RIGHT and orient(P[b], P[c], o) == Orientation.RIGHT
        return False  # exterior at the apex is owned by the two digons
    want = Orientation.RIGHT if face.side is Side.RIGHT else Orientation.LEFT
    if vertex == a:
        return boundary_curve_side(P[a], P[b], o) is face.side
    return orient(P[a], P[b], o) == want


def face_edges(ps: PointSet, t: RootedMst, face: Face) -> tuple[list[Edge], list[Edge], list[Edge]]:
    """(wall entries, vertex-assigned entries, exits) owned by ``face``."""
    entry, exit_ = classify_wall_edges(ps, t, *face.wall)
    vertex_entries = []
    for w in face.vertices:
        for v in t.children[w]:
            if assign_vertex_edge(ps, face, w, v):
                vertex_entries.append((v, w))
        p = t.parent[w]
        if p >= 0 and assign_vertex_edge(ps, face, w, p):
            exit_.append((w, p))
    return entry, vertex_entries, exit_


def classify_face(
    ps: PointSet,
    t: RootedMst,
    face: Face,
    chord_cache: Optional[dict] = None,
) -> Optional[FaceCandidate]:
    """Classify a fan face, or return None if it cannot occur in an optimum."""

    def chord(x, y):
        if chord_cache is None:
            return classify_chord(ps, t, x, y)
        if (x, y) not in chord_cache:
            chord_cache[x, y] = classify_chord(ps, t, x, y)
        return chord_cache[x, y]

    a = face.apex
    if any(ps[v].y <= ps[a].y for v in face.vertices[1:]):
        return None
    entry, vertex_entries, exits = face_edges(ps, t, face)
    ab = chord(a, face.b)
    if not ab.valid:
        return None
    if face.is_triangle:
        if orient(ps[a], ps[face.b], ps[face.c]) != Orientation.LEFT:
            return None
        ac = chord(a, face.c)
        if not ac.valid:
            return None
        if ab.facing is Facing.RIGHT_FACING and ac.facing is Facing.RIGHT_FACING:
            kind = FaceKind.LR_TRIANGLE
        elif ab.facing is Facing.LEFT_FACING and ac.facing is Facing.LEFT_FACING:
            kind = FaceKind.RL_TRIANGLE
        elif ab.facing is Facing.LEFT_FACING and ac.facing is Facing.RIGHT_FACING:
            kind = FaceKind.EXIT_TRIANGLE
        else:
            return None
    elif face.side is Side.RIGHT:
        if a == t.root:
            kind = FaceKind.ROOT_DIGON
        elif ab.facing is Facing.RIGHT_FACING:
            kind = FaceKind.EXIT_DIGON
        else:
            kind = FaceKind.ENTRY_DIGON
    else:
        kind = FaceKind.EXIT_DIGON if ab.facing is Facing.LEFT_FACING else FaceKind.ENTRY_DIGON

    wanted_exits = 1 if kind in (FaceKind.EXIT_TRIANGLE, FaceKind.EXIT_DIGON) else 0
    if len(exits) != wanted_exits:
        return None
    return FaceCandidate(kind, face, tuple(entry), tuple(vertex_entries), tuple(exits))


def fan_faces(ps: PointSet, blob: Polygon) -> list[Face]:
    """Bottom-vertex decomposition of a blob, right digon first.

    Works for any polygon that is star-shaped around its lowest vertex.
    """
    ids = list(blob.vertices)
    if len(ids) < 3:
        raise ValueError("a blob needs at least three vertices")
    k = min(range(len(ids)), key=lambda i: ps[ids[i]].y)
    cyc = ids[k:] + ids[:k]
    a, rest = cyc[0], cyc[1:]
    faces = [Face(a, rest[0], side=Side.RIGHT)]
    faces += [Face(a, rest[i], rest[i + 1]) for i in range(len(rest) - 1)]
    faces.append(Face(a, rest[-1], side=Side.LEFT))
    return faces
