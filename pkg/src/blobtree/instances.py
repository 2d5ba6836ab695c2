"""Instance files, result records and seeded instance generators."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import GeneralPositionError, PointSet
from .solver import BlobTreeSolution

GENERATORS = ("uniform", "cluster", "circle", "grid")
DEFAULT_JITTER = 1e-7  # times the bounding-box diagonal
_MAX_RESAMPLE = 100


class InstanceError(ValueError):
    """Malformed instance text; the message carries line/field positions."""


@dataclass
class Instance:
    coords: np.ndarray
    name: Optional[str] = None
    seed: Optional[int] = None
    generator: Optional[str] = None

    def point_set(self, jitter: Optional[float] = None, seed: int = 0) -> PointSet:
        """Validated point set; ``jitter`` (absolute) perturbs coordinates first."""
        xy = self.coords
        if jitter:
            xy = apply_jitter(xy, jitter, seed)
        return PointSet(xy)


def default_jitter(coords: np.ndarray) -> float:
    span = np.ptp(np.asarray(coords, dtype=float), axis=0)
    return DEFAULT_JITTER * (float(math.hypot(*span)) or 1.0)


def apply_jitter(coords: np.ndarray, eps: float, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    xy = np.asarray(coords, dtype=float)
    return xy + rng.uniform(-eps, eps, xy.shape)


def _number(tok: str, where: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise InstanceError(f"{where}: malformed number {tok!r}") from None
    if not math.isfinite(v):
        raise InstanceError(f"{where}: coordinate must be finite, got {tok!r}")
    return v


def _parse_plain(text: str) -> Instance:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.replace(",", " ").split()
        if len(toks) != 2:
            raise InstanceError(f"line {lineno}: expected 'x y', got {len(toks)} fields")
        rows.append([_number(tok, f"line {lineno}, field {k + 1}") for k, tok in enumerate(toks)])
    return Instance(np.array(rows, dtype=float).reshape(-1, 2))


def _parse_json(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict) or "points" not in doc:
        raise InstanceError("structured instance needs a 'points' array")
    rows = []
    for k, p in enumerate(doc["points"]):
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise InstanceError(f"points[{k}]: expected [x, y]")
        rows.append([_number(str(v), f"points[{k}][{j}]") for j, v in enumerate(p)])
    return Instance(
        np.array(rows, dtype=float).reshape(-1, 2),
        name=doc.get("name"),
        seed=doc.get("seed"),
        generator=doc.get("generator"),
    )


def read_instance(text: str) -> Instance:
    """Parse either the plain "x y" format or a JSON document with "points"."""
    inst = _parse_json(text) if text.lstrip().startswith("{") else _parse_plain(text)
    if len(inst.coords) == 0:
        raise InstanceError("instance has no points")
    return inst


def parse_instance(text: str, jitter: Optional[float] = None, seed: int = 0) -> PointSet:
    return read_instance(text).point_set(jitter, seed)


def format_plain(coords: np.ndarray, comment: Optional[str] = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines += [f"{x:.17g} {y:.17g}" for x, y in np.asarray(coords, dtype=float)]
    return "\n".join(lines) + "\n"


def format_json(inst: Instance) -> str:
    doc = {}
    if inst.name is not None:
        doc["name"] = inst.name
    if inst.seed is not None:
        doc["seed"] = inst.seed
    if inst.generator is not None:
        doc["generator"] = inst.generator
    doc["points"] = [[float(x), float(y)] for x, y in inst.coords]
    return json.dumps(doc, indent=1) + "\n"


@dataclass
class ResultRecord:
    instance: str
    cost: float
    blobs: list[list[int]]
    tree_edges: list[list[int]]
    time_ms: float
    table_sizes: dict = field(default_factory=dict)

    @classmethod
    def from_solution(cls, instance: str, sol: BlobTreeSolution, time_ms: float, table_sizes=None):
        return cls(
            instance=instance,
            cost=float(sol.cost),
            blobs=[list(map(int, b.vertices)) for b in sol.blobs],
            tree_edges=[sorted(map(int, e)) for e in sol.tree_edges],
            time_ms=float(time_ms),
            table_sizes=dict(table_sizes or {}),
        )

    def to_json(self) -> str:
        # repr-based float output round-trips every double exactly
        return json.dumps(self.__dict__, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        return cls(**json.loads(text))


def hex_patch(m: int) -> np.ndarray:
    """The ``m`` triangular-lattice points closest to the origin (unit spacing)."""
    r = int(math.ceil(math.sqrt(m))) + 1
    i, j = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1))
    pts = np.c_[(i + 0.5 * j).ravel(), (j * math.sqrt(3) / 2).ravel()]
    d = np.round(np.hypot(pts[:, 0], pts[:, 1]), 9)
    order = np.lexsort((np.arctan2(pts[:, 1], pts[:, 0]), d))
    return pts[order[:m]]


def _uniform(rng, n):
    return rng.uniform(0.0, 1.0, (n, 2))


def _cluster(rng, n):
    # jittered hexagonal patches of up to 19 points, far apart from each other
    out = []
    left, k = n, 0
    while left > 0:
        m = min(left, 19)
        amp = rng.uniform(0.03, 0.15)
        centre = np.array([8.0 * k, 3.0 * (k % 2)])
        out.append(hex_patch(m) + centre + rng.uniform(-amp, amp, (m, 2)))
        left -= m
        k += 1
    pts = np.vstack(out)
    return pts[rng.permutation(n)]


def _circle(rng, n):
    t = 2 * np.pi * (np.arange(n) + rng.uniform(-0.05, 0.05, n)) / n + rng.uniform(0, 2 * np.pi)
    r = 1.0 + rng.uniform(-0.01, 0.01, n)
    return np.c_[r * np.cos(t), r * np.sin(t)]


def _grid(rng, n):
    side = int(math.ceil(math.sqrt(n)))
    i, j = np.divmod(np.arange(n), side)
    return np.c_[j, i].astype(float) + rng.uniform(-0.1, 0.1, (n, 2))


_KINDS = {"uniform": _uniform, "cluster": _cluster, "circle": _circle, "grid": _grid}


def generate_instance(kind: str, n: int, seed: int = 0) -> Instance:
    if kind not in _KINDS:
        raise ValueError(f"unknown generator {kind!r}; choose from {', '.join(GENERATORS)}")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    for _ in range(_MAX_RESAMPLE):
        xy = _KINDS[kind](rng, n)
        try:
            PointSet(xy)
        except GeneralPositionError:
            continue
        return Instance(xy, name=f"{kind}-{n}-{seed}", seed=seed, generator=kind)
    raise GeneralPositionError(f"could not draw a {kind} instance in general position")


def generate(kind: str, n: int, seed: int = 0) -> PointSet:
    """Deterministic random instance of the given kind."""
    return PointSet(generate_instance(kind, n, seed).coords)


def cluster_with_far_point(m: int = 15, seed: int = 0, spacing: float = 0.02, distance: float = 5.0) -> PointSet:
    """A dense hexagonal cluster of ``m`` points plus one point far away."""
    rng = np.random.default_rng(seed)
    for _ in range(_MAX_RESAMPLE):
        pts = hex_patch(m) * spacing + rng.uniform(-0.05, 0.05, (m, 2)) * spacing
        angle = rng.uniform(0, 2 * np.pi)
        far = np.array([[distance * math.cos(angle), distance * math.sin(angle)]])
        try:
            return PointSet(np.vstack([pts, far]))
        except GeneralPositionError:
            continue
    raise GeneralPositionError("could not draw a cluster instance in general position")
