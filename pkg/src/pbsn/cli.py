"""Command-line front end: ``solve``, ``encode`` and ``bench``."""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .cnf import ClauseStore
from .encoder import EncodeOptions, encode_instance
from .opb import OpbParseError, parse_opb, print_result, write_dimacs
from .solver import UNKNOWN, make_backend, optimize

EXIT_OK, EXIT_PARSE, EXIT_SOLVER = 0, 1, 2

BENCH_FIELDS = ["instance", "vars_on", "vars_off", "clauses_on", "clauses_off",
                "sorters_reused", "result", "time"]


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--reuse", dest="reuse", action="store_true", default=True,
                        help="reuse previously built sorters (default)")
    common.add_argument("--no-reuse", dest="reuse", action="store_false")
    common.add_argument("--always-reuse", dest="reuse_guard", action="store_false", default=True,
                        help="reuse every cover found, even when a fresh sorter is cheaper")
    common.add_argument("--no-skip", dest="skip", action="store_false", default=True,
                        help="disable skipping of long sequences in multi-way merges")
    common.add_argument("--block-size", type=int, default=5, metavar="N")
    common.add_argument("--max-base-prime", type=int, default=17, metavar="P")
    common.add_argument("--solver", metavar="PATH", default=None,
                        help="external DIMACS solver (default: $PBSN_SOLVER, else built-in)")
    common.add_argument("--timeout", type=float, default=None, metavar="SECONDS")
    common.add_argument("--emit-cnf", metavar="PATH", default=None)
    common.add_argument("--stats", action="store_true", help="print c-lines with encoding stats")

    p = argparse.ArgumentParser(prog="pbsn", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("solve", parents=[common], help="optimize or decide an OPB instance")
    s.add_argument("file")
    e = sub.add_parser("encode", parents=[common], help="encode hard constraints to CNF")
    e.add_argument("file")
    b = sub.add_parser("bench", parents=[common], help="compare reuse on/off over a directory")
    b.add_argument("dir")
    b.add_argument("--out", metavar="PATH", default=None)
    return p


def _options(args: argparse.Namespace, reuse: Optional[bool] = None) -> EncodeOptions:
    return EncodeOptions(
        reuse=args.reuse if reuse is None else reuse,
        reuse_guard=args.reuse_guard,
        skip=args.skip,
        block_size=args.block_size,
        max_base_prime=args.max_base_prime,
    )


def _stat_lines(stats) -> list[str]:
    return [f"c vars={stats.vars_created} clauses={stats.clauses_added}",
            f"c sorters_built={stats.sorters_built} sorters_reused={stats.sorters_reused}"
            f" reuse_covered_inputs={stats.reuse_covered_inputs}"]


def _load(path: str):
    with open(path) as fh:
        return parse_opb(fh.read())


def _encode(inst, opts: EncodeOptions) -> ClauseStore:
    store = ClauseStore.for_problem(inst.num_vars)
    encode_instance(store, inst, opts)
    return store


def cmd_encode(args, out) -> int:
    inst = _load(args.file)
    store = _encode(inst, _options(args))
    if args.emit_cnf:
        with open(args.emit_cnf, "w") as fh:
            write_dimacs(store, fh)
    else:
        write_dimacs(store, out)
    for line in _stat_lines(store.stats):
        print(line, file=out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    inst = _load(args.file)
    opts = _options(args)
    if args.emit_cnf:
        with open(args.emit_cnf, "w") as fh:
            write_dimacs(_encode(inst, opts), fh)
    backend = make_backend(args.solver)
    res = optimize(inst, opts, backend, timeout=args.timeout,
                   on_improve=lambda v: print(f"o {v}", file=out, flush=True))
    if args.stats:
        for line in _stat_lines(res.stats):
            print(line, file=out)
    for line in print_result(res.status, res.model, num_vars=inst.num_vars):
        print(line, file=out)
    if res.status == UNKNOWN and res.diagnostic:
        print(f"c {res.diagnostic}", file=out)
        return EXIT_SOLVER
    return EXIT_OK


def bench_row(path: Path, args) -> dict:
    inst = _load(str(path))
    on = _encode(inst, _options(args, reuse=True)).stats
    off = _encode(inst, _options(args, reuse=False)).stats
    start = time.perf_counter()
    res = optimize(inst, _options(args, reuse=True), make_backend(args.solver), timeout=args.timeout)
    return {
        "instance": path.name,
        "vars_on": on.vars_created,
        "vars_off": off.vars_created,
        "clauses_on": on.clauses_added,
        "clauses_off": off.clauses_added,
        "sorters_reused": on.sorters_reused,
        "result": res.status,
        "time": f"{time.perf_counter() - start:.3f}",
    }


def cmd_bench(args, out) -> int:
    files = sorted(Path(args.dir).glob("*.opb"))
    sink = open(args.out, "w", newline="") if args.out else out
    try:
        w = csv.DictWriter(sink, fieldnames=BENCH_FIELDS, lineterminator="\n")
        w.writeheader()
        for f in files:
            w.writerow(bench_row(f, args))
    finally:
        if args.out:
            sink.close()
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    if args.solver is None:
        args.solver = os.environ.get("PBSN_SOLVER") or None
    logging.basicConfig(level=logging.WARNING, format="c %(levelname)s %(message)s")
    try:
        return {"solve": cmd_solve, "encode": cmd_encode, "bench": cmd_bench}[args.cmd](args, out)
    except OpbParseError as e:
        print(f"c parse error: {e}", file=out)
        if args.cmd == "solve":
            print("s UNKNOWN", file=out)
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
