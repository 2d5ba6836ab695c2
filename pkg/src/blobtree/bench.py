"""Wall-clock scaling measurements for the solver."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .instances import generate
from .solver import solve


@dataclass(frozen=True)
class BenchRow:
    n: int
    median_s: float
    times: tuple[float, ...]


def warm_up() -> None:
    """Trigger compilation of the kernels so it is not timed."""
    solve(generate("uniform", 8, 0))


def run_benchmark(sizes: list[int], seed: int = 0, repeats: int = 5, kind: str = "uniform") -> list[BenchRow]:
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be sorted ascending")
    if repeats < 1:
        raise ValueError("need at least one repeat")
    warm_up()
    rows = []
    for n in sizes:
        times = []
        for k in range(repeats):
            ps = generate(kind, n, seed + k)
            t0 = time.perf_counter()
            solve(ps)
            times.append(time.perf_counter() - t0)
        rows.append(BenchRow(n, statistics.median(times), tuple(times)))
    return rows


def doubling_ratios(rows: list[BenchRow]) -> list[tuple[int, int, float]]:
    """Median-time ratios between consecutive sizes."""
    return [(a.n, b.n, b.median_s / a.median_s) for a, b in zip(rows, rows[1:])]
