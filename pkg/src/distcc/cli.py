"""``distcc-lab``: command-line driver for the experiment tables.

Exit codes: 0 on success, 2 for bad arguments, 3 when the output cannot be written.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import experiments as ex
from .errors import DistccError

EXIT_OK, EXIT_ARGS, EXIT_IO = 0, 2, 3


def parse_grid(spec: str) -> list[float]:
    """``a:b:step`` to an inclusive grid, e.g. ``0.5:1:0.1``."""
    try:
        a, b, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like a:b:step, got {spec!r}") from None
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"grid needs a <= b and step > 0, got {spec!r}")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(count)]


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--grid", type=str, default=None, help="success grid a:b:step")
    shared.add_argument("--level", type=_int_list, default=[2], help="hierarchy level(s), e.g. 2 or 1,2")
    shared.add_argument("--dim", type=int, default=2, help="see-saw / state dimension")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--seeds", type=int, default=ex.SEESAW_SEEDS, help="see-saw restarts")
    shared.add_argument("--out", type=str, default=None, help="CSV path (default: stdout)")
    shared.add_argument("--json", action="store_true", help="print the run manifest as JSON")
    shared.add_argument("--workers", type=int, default=None, help="process pool size")

    parser = _Parser(prog="distcc-lab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rac = sub.add_parser("rac", parents=[shared], help="RAC distinguishability sweep")
    rac.add_argument("--n", type=int, default=2)
    rac.add_argument("--d", type=int, default=2)
    sub.add_parser("graph-scan", parents=[shared], help="small-graph frontier vs hierarchy scan")
    cyc = sub.add_parser("cycle", parents=[shared], help="odd-cycle advantage ratios")
    cyc.add_argument("--N", type=_int_list, default=[5, 7, 9, 11])
    pair = sub.add_parser("pairdist", parents=[shared], help="pair-distinguishability table")
    pair.add_argument("--N", type=_int_list, default=[3, 4, 5, 6])
    had = sub.add_parser("hadamard", parents=[shared], help="Hadamard-graph advantage ratios")
    had.add_argument("--d", type=_int_list, default=[2, 4, 6, 1124, 1128, 32768])
    sub.add_parser("obs3", parents=[shared], help="depolarized qubit RAC comparison")
    return parser


def _grid(args, default: str) -> tuple[list[float], str]:
    spec = args.grid or default
    return parse_grid(spec), spec


def run(args) -> ex.RunTable:
    if args.command == "rac":
        grid, spec = _grid(args, "0.5:1:0.05")
        return ex.run_rac_sweep(args.n, args.d, grid, args.dim, args.level, args.seed,
                                args.seeds, args.workers, spec)
    if args.command == "graph-scan":
        grid, spec = _grid(args, "0:1:0.02")
        return ex.run_small_graph_scan(grid, args.level[0], args.workers, spec)
    if args.command == "cycle":
        return ex.run_cycle_ratio(args.N)
    if args.command == "pairdist":
        grid = parse_grid(args.grid) if args.grid else None
        return ex.run_pairdist(args.N, args.dim, args.seed, grid, args.seeds, args.workers,
                               args.grid or "")
    if args.command == "hadamard":
        return ex.run_hadamard_ratio(args.d)
    return ex.run_obs3_comparison()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except argparse.ArgumentTypeError as exc:
        print(f"distcc-lab: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.dim < 2 or args.seeds < 1 or any(L < 1 for L in args.level):
        print("distcc-lab: error: --dim must be >= 2, --seeds and --level >= 1", file=sys.stderr)
        return EXIT_ARGS
    try:
        table = run(args)
    except (DistccError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"distcc-lab: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    text = table.to_csv()
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"distcc-lab: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    if args.json:
        print(json.dumps(table.manifest.to_dict(), indent=2))
    elif not args.out:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
