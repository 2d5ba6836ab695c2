"""Planar primitives: points, orientation, crossings, hulls and perimeters."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

ORIENT_EPS = 1e-12


class GeneralPositionError(ValueError):
    """The input violates the general-position assumptions of the solver."""

    def __init__(self, message: str, witnesses: tuple = ()):
        super().__init__(message)
        self.witnesses = witnesses


class Orientation(enum.IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    def flip(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    id: int = -1

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate in point {self.id}: ({self.x}, {self.y})")


@dataclass(frozen=True)
class Segment:
    p: Point
    q: Point


class PointSet:
    """An immutable, indexed planar point set.

    With ``check=True`` (the default) the constructor rejects inputs that are
    not in general position: repeated x or y coordinates, collinear triples
    and repeated pairwise distances, all judged with relative tolerance
    ``tol``.
    """

    def __init__(self, coords: Iterable[Sequence[float]], check: bool = True, tol: float = ORIENT_EPS):
        arr = np.array([(float(x), float(y)) for x, y in coords], dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(arr)):
            raise ValueError("coordinates must be finite")
        arr.setflags(write=False)
        self._coords = arr
        self._points = tuple(Point(float(x), float(y), i) for i, (x, y) in enumerate(arr))
        if check:
            validate_general_position(arr, tol)

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def points(self) -> tuple[Point, ...]:
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, i: int) -> Point:
        return self._points[i]

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)})"

    def dist(self, i: int, j: int) -> float:
        return distance(self._points[i], self._points[j])


def validate_general_position(coords: np.ndarray, tol: float = ORIENT_EPS) -> None:
    """Raise GeneralPositionError if ``coords`` is not in general position."""
    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    if n < 2:
        return
    scale = float(np.ptp(coords, axis=0).max()) or 1.0
    for axis, name in ((0, "x"), (1, "y")):
        order = np.argsort(coords[:, axis], kind="stable")
        gaps = np.diff(coords[order, axis])
        bad = np.flatnonzero(gaps <= tol * scale)
        if bad.size:
            i, j = int(order[bad[0]]), int(order[bad[0] + 1])
            raise GeneralPositionError(f"points {i} and {j} share an {name}-coordinate", (i, j))

    for i in range(n - 2):
        v = coords[i + 1:] - coords[i]
        cr = np.outer(v[:, 0], v[:, 1]) - np.outer(v[:, 1], v[:, 0])
        norms = np.hypot(v[:, 0], v[:, 1])
        bound = tol * np.outer(norms, norms)
        hit = np.argwhere(np.triu(np.abs(cr) <= bound, k=1))
        if hit.size:
            j, k = (int(t) + i + 1 for t in hit[0])
            raise GeneralPositionError(f"points {i}, {j}, {k} are collinear", (i, j, k))

    iu, ju = np.triu_indices(n, k=1)
    d = np.hypot(*(coords[iu] - coords[ju]).T)
    order = np.argsort(d, kind="stable")
    ds = d[order]
    bad = np.flatnonzero(np.diff(ds) <= tol * np.maximum(ds[1:], 1e-300))
    if bad.size:
        e, f = order[bad[0]], order[bad[0] + 1]
        pairs = ((int(iu[e]), int(ju[e])), (int(iu[f]), int(ju[f])))
        raise GeneralPositionError(f"pairs {pairs[0]} and {pairs[1]} have equal length", pairs)


def distance(p: Point, q: Point) -> float:
    return math.hypot(q.x - p.x, q.y - p.y)


def cross(p: Point, q: Point, r: Point) -> float:
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def orient(p: Point, q: Point, r: Point) -> Orientation:
    """Side of ``r`` relative to the directed line p -> q."""
    c = cross(p, q, r)
    # scale by the two longest sides so the test is unit-free and symmetric
    a, b, d = sorted((distance(p, q), distance(q, r), distance(r, p)))
    bound = ORIENT_EPS * b * d
    if abs(c) <= bound:
        return Orientation.COLLINEAR
    return Orientation.LEFT if c > 0 else Orientation.RIGHT


def segments_cross_properly(s1: Segment, s2: Segment) -> bool:
    """True iff the open segments meet in exactly one interior point."""
    o1 = orient(s1.p, s1.q, s2.p)
    o2 = orient(s1.p, s1.q, s2.q)
    o3 = orient(s2.p, s2.q, s1.p)
    o4 = orient(s2.p, s2.q, s1.q)
    return o1 * o2 < 0 and o3 * o4 < 0


def boundary_curve_side(a: Point, b: Point, v: Point) -> Side:
    """Side of ``v`` relative to the curve made of the downward vertical ray
    from ``a`` followed by the ray from ``a`` through ``b``.

    Left and right are taken while walking the curve upward, i.e. from far
    below ``a`` to ``a`` and then on towards ``b``.
    """
    if a.y >= b.y:
        raise ValueError("boundary curve needs a strictly below b")
    d = Point(a.x, a.y - 1.0)
    below = orient(d, a, v) == Orientation.RIGHT
    beyond = orient(a, b, v) == Orientation.RIGHT
    if orient(d, a, b) == Orientation.LEFT:
        # reflex on the right: the right region is the union of two half-planes
        return Side.RIGHT if (below or beyond) else Side.LEFT
    return Side.RIGHT if (below and beyond) else Side.LEFT


@dataclass(frozen=True)
class Polygon:
    """A cycle of input points in counterclockwise order.

    Sizes 1 and 2 are degenerate hulls that only the oracles produce.
    """

    points: tuple[Point, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def edges(self) -> list[tuple[Point, Point]]:
        k = len(self.points)
        if k < 2:
            return []
        return [(self.points[i], self.points[(i + 1) % k]) for i in range(k)]

    def is_convex(self) -> bool:
        k = len(self.points)
        if k < 3:
            return False
        return all(
            orient(self.points[i], self.points[(i + 1) % k], self.points[(i + 2) % k]) == Orientation.LEFT
            for i in range(k)
        )

    def contains(self, p: Point) -> bool:
        """Closed containment test; only meaningful for convex polygons."""
        if len(self.points) < 3:
            return p.id in self.vertices
        return all(orient(s, t, p) != Orientation.RIGHT for s, t in self.edges())

    def canonical(self) -> tuple[int, ...]:
        """Vertex ids rotated so the smallest id comes first."""
        ids = self.vertices
        if not ids:
            return ids
        k = ids.index(min(ids))
        return ids[k:] + ids[:k]


def convex_hull(points: Sequence[Point]) -> Polygon:
    """Counterclockwise convex hull (monotone chain)."""
    pts = sorted(set(points), key=lambda p: (p.x, p.y))
    if not pts:
        raise ValueError("convex hull of an empty set")
    if len(pts) <= 2:
        return Polygon(tuple(pts))

    def chain(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) != Orientation.LEFT:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return Polygon(tuple(lower[:-1] + upper[:-1]))


def perimeter(poly: Polygon) -> float:
    k = len(poly)
    if k <= 1:
        return 0.0
    if k == 2:
        return 2.0 * distance(poly.points[0], poly.points[1])
    return sum(distance(p, q) for p, q in poly.edges())


def convex_polygons_intersect(p1: Polygon, p2: Polygon) -> bool:
    """Closed intersection test for two convex polygons (separating axes)."""
    for poly in (p1, p2):
        for s, t in poly.edges():
            nx, ny = t.y - s.y, s.x - t.x
            a = [nx * p.x + ny * p.y for p in p1.points]
            b = [nx * p.x + ny * p.y for p in p2.points]
            if max(a) < min(b) or max(b) < min(a):
                return False
    return True
