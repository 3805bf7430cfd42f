"""Command line: ``solve``, ``gen`` and ``bench``.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 failed invariant or
verification.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from .dimacs import DimacsError, emit_dimacs, emit_solution, parse_dimacs
from .driver import certify, maximum_matching
from .generators import KINDS, generate
from .graph import GraphError, build_graph, validate_matching
from .oracle import MAX_MATCHING_N, InvariantError, brute_max_matching

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _size(text: str) -> tuple[int, int | None]:
    # "n" or "n:m"
    try:
        if ":" in text:
            n, m = text.split(":", 1)
            return int(n), int(m)
        return int(text), None
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size {text!r}; use N or N:M") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sapmatch", description="Maximum cardinality matching in general graphs.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="solve a DIMACS edge file ('-' for stdin)")
    s.add_argument("file")
    s.add_argument("--verify", action="store_true",
                   help="run invariant checks, the optimality certificate, and brute force on small inputs")
    s.add_argument("--trace", metavar="FILE", help="write one JSON record per search step")
    s.add_argument("--stats", action="store_true", help="add per-phase statistics comments")
    s.add_argument("-o", "--output", metavar="FILE", help="write the solution here instead of stdout")

    gsub = sub.add_parser("gen", help="generate an instance")
    gsub.add_argument("kind", choices=KINDS)
    gsub.add_argument("--n", type=int, default=10)
    gsub.add_argument("--m", type=int, default=0)
    gsub.add_argument("--depth", type=int, default=3, help="nesting depth for nested-blossom-gadget")
    gsub.add_argument("--seed", type=int, default=0)
    gsub.add_argument("-o", "--output", metavar="FILE")

    b = sub.add_parser("bench", help="time solves and print a tab-separated table")
    b.add_argument("--sizes", type=_size, nargs="+", required=True, metavar="N[:M]")
    b.add_argument("--kind", choices=("random-gnm", "random-bipartite", "long-path-chain"), default="random-gnm")
    b.add_argument("--density", type=float, default=5.0, help="m = density * n when M is not given")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeat", type=int, default=1)
    return p


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _solve(args) -> int:
    try:
        text = sys.stdin.read() if args.file == "-" else open(args.file).read()
    except OSError as ex:
        print(f"sapmatch: cannot read {args.file}: {ex.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        g = parse_dimacs(text)
    except (DimacsError, GraphError) as ex:
        print(f"sapmatch: parse error: {ex}", file=sys.stderr)
        return EXIT_PARSE
    try:
        m, stats = maximum_matching(g, debug=args.verify, trace=bool(args.trace))
        if args.verify:
            if not validate_matching(g, m) or not certify(g, m):
                raise InvariantError("optimality certificate rejected")
            if g.n <= MAX_MATCHING_N and brute_max_matching(g)[0] != m.size:
                raise InvariantError("size disagrees with brute force")
    except InvariantError as ex:
        print(f"sapmatch: invariant failure: {ex}", file=sys.stderr)
        return EXIT_INVARIANT
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in stats.trace:
                fh.write(json.dumps(rec) + "\n")
    out = emit_solution(m, stats, per_phase=args.stats)
    if args.verify:
        out += "c verified\n"
    _write(args.output, out)
    return EXIT_OK


def _gen(args) -> int:
    try:
        g = generate(args.kind, n=args.n, m=args.m, seed=args.seed, depth=args.depth)
    except ValueError as ex:
        print(f"sapmatch: {ex}", file=sys.stderr)
        return EXIT_USAGE
    if args.kind == "nested-blossom-gadget":
        desc = f"{args.kind} depth={args.depth} seed={args.seed}"
    elif args.kind == "long-path-chain":
        desc = f"{args.kind} n={args.n} seed={args.seed}"
    else:
        desc = f"{args.kind} n={args.n} m={args.m} seed={args.seed}"
    _write(args.output, emit_dimacs(g, [desc]))
    return EXIT_OK


def _bench(args) -> int:
    # compile everything before timing
    maximum_matching(build_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]))
    cols = ["kind", "n", "m", "seed", "phases", "matched", "total_s", "median_phase_s", "phase_s"]
    print("\t".join(cols))
    for n, m in args.sizes:
        m = int(args.density * n) if m is None else m
        for r in range(args.repeat):
            seed = args.seed + r
            try:
                g = generate(args.kind, n=n, m=m, seed=seed)
            except ValueError as ex:
                print(f"sapmatch: {ex}", file=sys.stderr)
                return EXIT_USAGE
            t0 = time.perf_counter()
            mm, st = maximum_matching(g)
            total = time.perf_counter() - t0
            times = [p.seconds for p in st.per_phase]
            row = [args.kind, g.n, g.m, seed, st.phases, mm.size, f"{total:.4f}",
                   f"{statistics.median(times):.4f}", ",".join(f"{t:.4f}" for t in times)]
            print("\t".join(map(str, row)))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return {"solve": _solve, "gen": _gen, "bench": _bench}[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
