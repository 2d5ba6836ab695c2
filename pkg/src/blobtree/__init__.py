"""Minimum-cost blob-trees of planar point sets."""

from .geometry import GeneralPositionError, Point, PointSet, Polygon, convex_hull, perimeter
from .mst import RootedMst, build_mst
from .solver import BlobTreeSolution, SubproblemTables, solve, solve_tables, validate_solution

__all__ = [
    "GeneralPositionError",
    "Point",
    "PointSet",
    "Polygon",
    "convex_hull",
    "perimeter",
    "RootedMst",
    "build_mst",
    "BlobTreeSolution",
    "SubproblemTables",
    "solve",
    "solve_tables",
    "validate_solution",
]
