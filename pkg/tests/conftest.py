import numpy as np
import pytest

from blobtree import GeneralPositionError, PointSet


def lattice_instance(seed: int, max_n: int = 16) -> PointSet:
    """Jittered square-lattice patch with a few stray points; blobs are common."""
    rng = np.random.default_rng(seed)
    while True:
        w, h = [(3, 3), (3, 4), (4, 4), (2, 3), (2, 4)][rng.integers(5)]
        amp = rng.uniform(0.03, 0.2)
        pts = [(i + rng.uniform(-amp, amp), k + rng.uniform(-amp, amp)) for i in range(w) for k in range(h)]
        pts = [pts[i] for i in rng.permutation(len(pts))]
        pts = pts[: rng.integers(len(pts) - 2, len(pts) + 1)]
        for _ in range(rng.integers(0, 3)):
            pts.append((rng.uniform(-3, 6), rng.uniform(-3, 6)))
        try:
            return PointSet(pts[:max_n])
        except GeneralPositionError:
            continue


def random_instance(seed: int, n: int) -> PointSet:
    rng = np.random.default_rng(seed)
    while True:
        try:
            return PointSet(rng.uniform(0, 1, (n, 2)))
        except GeneralPositionError:
            continue


@pytest.fixture
def square_with_center():
    return PointSet([(0, 0), (1.01, 0.03), (1.04, 1.02), (0.02, 0.97), (0.5, 0.45)])


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in name and rep.when == "call":
                crit = name.split("test_criterion_")[1]
                lines.append((crit, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, verdict in sorted(lines):
            num, _, label = crit.partition("_")
            terminalreporter.write_line(f"criterion {int(num):2d} {verdict}  {label.replace('_', ' ')}")
