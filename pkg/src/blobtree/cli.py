"""Command-line interface.

Exit codes: 0 success (or agreement), 1 usage error, 2 invalid input or
general-position failure, 3 solver/oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path
from typing import Optional

from .bench import doubling_ratios, run_benchmark
from .geometry import GeneralPositionError, PointSet
from .instances import (
    GENERATORS,
    InstanceError,
    ResultRecord,
    default_jitter,
    format_json,
    format_plain,
    generate_instance,
    read_instance,
)
from .mst import build_mst
from .oracle import mst_subset_oracle, partition_oracle
from .render import render_svg
from .solver import solve, validate_solution

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2, 3
ORACLES = {"subset": mst_subset_oracle, "partition": partition_oracle}

log = logging.getLogger("blobtree")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load(path: str, args) -> tuple[str, PointSet]:
    inst = read_instance(_read_text(path))
    eps = None
    if args.jitter is not None:
        eps = default_jitter(inst.coords) if args.jitter == "auto" else float(args.jitter)
    return inst.name or path, inst.point_set(eps, args.seed)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _agree(x: float, y: float, tol: float) -> bool:
    return math.isclose(x, y, rel_tol=tol, abs_tol=tol)


def cmd_solve(args) -> int:
    name, ps = _load(args.input, args)
    t0 = time.perf_counter()
    sol = solve(ps)
    ms = 1000 * (time.perf_counter() - t0)
    problems = validate_solution(ps, sol)
    for p in problems:
        log.error("invalid solution: %s", p)
    rec = ResultRecord.from_solution(name, sol, ms, {"n": len(ps)})
    _emit(rec.to_json() + "\n", args.out)
    return EXIT_INPUT if problems else EXIT_OK


def cmd_oracle(args) -> int:
    name, ps = _load(args.input, args)
    t0 = time.perf_counter()
    res = ORACLES[args.kind](ps)
    ms = 1000 * (time.perf_counter() - t0)
    rec = ResultRecord.from_solution(name, res.solution, ms, {"n": len(ps), "nodes_examined": res.nodes_examined})
    _emit(rec.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    jobs = []
    for path in args.inputs:
        jobs.append(_load(path, args))
    if args.kind:
        for k in range(args.count):
            inst = generate_instance(args.kind, args.n, args.seed + k)
            jobs.append((inst.name, PointSet(inst.coords)))
    if not jobs:
        raise UsageError("compare needs input files or --kind/--n")
    oracle = ORACLES[args.oracle]
    lines, worst = [], EXIT_OK
    for name, ps in jobs:
        dp = solve(ps).cost
        ref = oracle(ps).cost
        ok = _agree(dp, ref, args.tolerance)
        if not ok:
            worst = EXIT_DISAGREE
        lines.append(json.dumps({"instance": name, "dp": dp, "oracle": ref, "agree": ok}))
    _emit("\n".join(lines) + "\n", args.out)
    return worst


def cmd_generate(args) -> int:
    inst = generate_instance(args.kind, args.n, args.seed)
    if args.format == "json":
        text = format_json(inst)
    else:
        text = format_plain(inst.coords, comment=inst.name)
    _emit(text, args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    _, ps = _load(args.input, args)
    t = build_mst(ps)
    sol = solve(ps)
    _emit(render_svg(ps, sol, t), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = sorted(args.sizes)
    rows = run_benchmark(sizes, seed=args.seed, repeats=args.repeats, kind=args.kind)
    out = ["n\tmedian_s"] + [f"{r.n}\t{r.median_s:.6f}" for r in rows]
    out += [f"ratio {a}->{b}\t{q:.3f}" for a, b, q in doubling_ratios(rows)]
    _emit("\n".join(out) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for generators and jitter")
    common.add_argument(
        "--jitter", nargs="?", const="auto", default=None, metavar="EPS",
        help="perturb inputs by up to EPS (default 1e-7 x bounding-box diagonal)",
    )
    common.add_argument("--tolerance", type=float, default=1e-9, help="relative cost tolerance")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="blobtree", description="Minimum-cost blob-trees of planar point sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="solve an instance with the dynamic program")
    s.add_argument("input", help="instance file, or - for stdin")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("oracle", parents=[common], help="solve an instance by exhaustive search")
    s.add_argument("kind", choices=sorted(ORACLES))
    s.add_argument("input")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("compare", parents=[common], help="check the solver against an oracle")
    s.add_argument("inputs", nargs="*")
    s.add_argument("--oracle", choices=sorted(ORACLES), default="subset")
    s.add_argument("--kind", choices=GENERATORS, help="also compare on generated instances")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--count", type=int, default=10)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("generate", parents=[common], help="write a random instance")
    s.add_argument("kind", choices=GENERATORS)
    s.add_argument("n", type=int)
    s.add_argument("--format", choices=("plain", "json"), default="plain")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("render", parents=[common], help="solve and draw an instance as SVG")
    s.add_argument("input")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("bench", parents=[common], help="time the solver at several sizes")
    s.add_argument("sizes", type=int, nargs="+")
    s.add_argument("--repeats", type=int, default=5)
    s.add_argument("--kind", choices=GENERATORS, default="uniform")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tolerance < 0:
        parser.error("--tolerance must be non-negative")
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"blobtree: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InstanceError, GeneralPositionError) as e:
        print(f"blobtree: invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"blobtree: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
