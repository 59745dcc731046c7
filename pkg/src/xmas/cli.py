"""Command-line front end.

Exit codes (disjoint across commands):

    0  success (valid / evaluated / drained / all obligations hold)
    1  run: cycle budget exhausted with work left
    2  network fails validation
    3  document cannot be parsed
    4  unknown channel
    5  combinatorial cycle
    6  run: deterministic network is stuck
    7  check: some obligation failed
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from dataclasses import replace
from pathlib import Path

from . import obligations as obl
from .engine import EvalError, Status, run
from .evaluate import Flag, cyclic_keys, eval_all, eval_signal
from .io import (
    ParseError,
    dumps_document,
    load_document,
    load_state_file,
    state_from_dict,
    write_atomic,
)
from .network import validate_network
from .signals import ERROR, NODATA
from .state import OracleMode, derive_seed

EXIT_OK = 0
EXIT_ACTIVE = 1
EXIT_INVALID = 2
EXIT_PARSE = 3
EXIT_NO_CHANNEL = 4
EXIT_CYCLE = 5
EXIT_STUCK = 6
EXIT_OBLIGATION = 7


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(path):
    try:
        return load_document(path)
    except ParseError as e:
        _err(f"{path}: parse error: {e}")
        raise _Exit(EXIT_PARSE)
    except OSError as e:
        _err(f"{path}: {e.strerror}")
        raise _Exit(EXIT_PARSE)


def _load_valid(path):
    ntk, raw_state = _load(path)
    report = validate_network(ntk)
    if report.findings:
        for f in report:
            _err(str(f))
        raise _Exit(EXIT_INVALID)
    return ntk, raw_state


def _state(ntk, raw, path):
    try:
        return state_from_dict(ntk, raw)
    except ParseError as e:
        _err(f"{path}: parse error: {e}")
        raise _Exit(EXIT_PARSE)


def cmd_validate(args) -> int:
    ntk, _ = _load(args.path)
    report = validate_network(ntk)
    if not report.findings:
        print("ok")
        return EXIT_OK
    for f in report:
        print(f)
    return EXIT_INVALID


def _cycle_line(ntk, st) -> str:
    keys = cyclic_keys(eval_all(ntk, st))
    return f"ERROR: combinatorial cycle via {' '.join(map(str, keys))}"


def cmd_eval(args) -> int:
    ntk, raw_state = _load_valid(args.path)
    if args.state:
        try:
            st = load_state_file(ntk, args.state)
        except ParseError as e:
            _err(f"{args.state}: parse error: {e}")
            return EXIT_PARSE
    else:
        st = _state(ntk, raw_state, args.path)
    if not ntk.has_channel(args.channel):
        _err(f"unknown channel {args.channel!r}")
        return EXIT_NO_CHANNEL
    v = eval_signal(Flag(args.signal), args.channel, ntk, None, st)
    if v is ERROR:
        print(_cycle_line(ntk, st))
        return EXIT_CYCLE
    print("NODATA" if v is NODATA else v)
    return EXIT_OK


def cmd_run(args) -> int:
    ntk, raw_state = _load_valid(args.path)
    st = _state(ntk, raw_state, args.path)
    if args.seed is not None:
        names = [*st.sources, *st.sinks]

        def reseed(table):
            return {
                k: replace(o, seed=derive_seed(args.seed, names.index(k))) if o.mode is OracleMode.SEEDED else o
                for k, o in table.items()
            }

        st = replace(st, sources=reseed(st.sources), sinks=reseed(st.sinks))
    try:
        result = run(ntk, st, args.cycles, until_quiescent=True)
    except EvalError as e:
        print(f"ERROR: {e}")
        return EXIT_CYCLE
    text = "".join(ev.line() + "\n" for ev in result.trace)
    if args.trace:
        write_atomic(args.trace, text)
    else:
        sys.stdout.write(text)
    if result.status is Status.STUCK:
        print(f"stuck at cycle {result.stall_cycle}")
        return EXIT_STUCK
    if result.status is Status.DRAINED:
        print(f"drained at cycle {result.state.cycle}")
        return EXIT_OK
    print(f"active after {len(result.trace)} cycles")
    return EXIT_ACTIVE


def _witness_dir(args) -> Path:
    d = Path(args.witness_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def cmd_check(args) -> int:
    evaluate = obl.MUTANTS[args.mutant] if args.mutant else eval_all
    passed, total = Counter(), Counter()
    failures = []

    def tally(label, seed, ntk, st):
        for rep in obl.check_all(ntk, st, evaluate=evaluate):
            total[rep.obligation] += 1
            if rep.passed:
                passed[rep.obligation] += 1
            else:
                failures.append((label, seed, rep))

    if args.random is not None:
        seed0 = args.seed or 0
        for i in range(args.random):
            p = obl.GenParams(seed=seed0 + i, components=(3, args.size))
            ntk, st = obl.generated_pair(p)
            tally(f"random-{p.seed}", p.seed, ntk, st)
    else:
        if not args.path:
            _err("check needs a network file or --random N")
            return EXIT_PARSE
        ntk, raw_state = _load_valid(args.path)
        seed = args.seed or 0
        states = [
            ("empty", obl.gen_random_state(ntk, seed, "empty")),
            ("full", obl.gen_random_state(ntk, seed, "full")),
            ("random", obl.gen_random_state(ntk, seed, "random")),
        ]
        if raw_state:
            states.insert(0, ("document", _state(ntk, raw_state, args.path)))
        for label, st in states:
            tally(label, seed, ntk, st)

    for o in obl.Obligation:
        print(f"{o.value}: {passed[o]}/{total[o]} passed")
    n = sum(total.values())
    print(f"{n} checks, {len(failures)} failures")
    if not failures:
        return EXIT_OK
    out = _witness_dir(args)
    for label, seed, rep in failures:
        path = obl.write_witness(rep, out / f"{label}-{rep.obligation.value}.json")
        print(rep.record(seed, path))
    return EXIT_OBLIGATION


def cmd_gen(args) -> int:
    p = obl.GenParams(seed=args.seed, components=(args.size, args.size), acyclic=not args.cyclic)
    ntk = obl.gen_random_network(p)
    st = obl.gen_random_state(ntk, args.seed)
    text = dumps_document(ntk, st)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xmas", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check network well-formedness")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate one channel signal")
    p.add_argument("path")
    p.add_argument("--channel", required=True)
    p.add_argument("--signal", required=True, choices=[f.value for f in Flag])
    p.add_argument("--state", help="state file (defaults to the document's own state)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run", help="simulate and write a trace")
    p.add_argument("path")
    p.add_argument("--cycles", type=int, default=100)
    p.add_argument("--trace", help="trace output file (default stdout)")
    p.add_argument("--seed", type=int, help="reseed seeded oracles")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="run the routing/transfer obligations")
    p.add_argument("path", nargs="?")
    p.add_argument("--random", type=int, metavar="N", help="check N generated networks instead")
    p.add_argument("--seed", type=int)
    p.add_argument("--size", type=int, default=25, help="max components of generated networks")
    p.add_argument("--witness-dir", default="witnesses")
    p.add_argument("--mutant", choices=sorted(obl.MUTANTS), help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a random well-formed network")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--cyclic", action="store_true", help="allow combinatorial cycles")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as e:
        return e.code


if __name__ == "__main__":
    sys.exit(main())
