"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line (shown even under
output capture). Run the file directly to get just the summary lines::

    python3 tests/test_acceptance.py
"""

import random
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

from xmas.engine import conservation_check, run, step
from xmas.evaluate import EvalStats, Flag, all_keys, eval_all, eval_signal
from xmas.fixtures import loop_net, red_blue
from xmas.network import validate_network
from xmas.obligations import GenParams, check_all, gen_random_state, generated_pair
from xmas.signals import ERROR, Signal, as_set, same_value
from xmas.state import ALWAYS_READY, initial_state, scripted

if __package__:
    from .mutations import single_clause_mutants
else:  # run as a script
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
    from tests.mutations import single_clause_mutants


def c1_golden():
    t0 = time.perf_counter()
    rb = red_blue()
    st = initial_state(rb, {"q0": ["red"]})
    irdy = eval_signal(Flag.IRDY, "c2", rb, None, st)
    trdy = eval_signal(Flag.TRDY, "c1", rb, None, st)
    dt = time.perf_counter() - t0
    ok = (
        irdy == Signal(True, (), ())
        and trdy is not ERROR
        and trdy.b is True
        and as_set(trdy.transfer) == {("q1", "red")}
        and len(trdy.transfer) == 1
        and as_set(trdy.routing) == {("q1", "red"), ("q2", "red")}
        and dt < 1.0
    )
    return ok, f"c2.irdy: {irdy}; c1.trdy: {trdy}; {dt:.3f}s"


def c2_obligations():
    t0 = time.perf_counter()
    failures, checks = [], 0
    for seed in range(1, 1001):
        p = GenParams(seed=seed, components=(3, 25), alphabet=(1, 4), capacity=(1, 3))
        ntk, st = generated_pair(p)
        for rep in check_all(ntk, st):
            checks += 1
            if not rep.passed:
                failures.append((seed, rep.obligation.value))
    dt = time.perf_counter() - t0
    ok = not failures and checks == 4000 and dt < 60
    return ok, f"{checks} checks, {len(failures)} failures, {dt:.1f}s"


def c3_cycles():
    loop = loop_net()
    st = initial_state(loop)
    memo = eval_all(loop, st)
    ref = {k: eval_signal(k.flag, k.channel, loop, None, st) for k in all_keys(loop)}
    loop_ok = set(memo.values()) == {ERROR} and set(ref.values()) == {ERROR}

    worst = 0.0
    nets = [(loop, st)]
    nets += [generated_pair(GenParams(seed=s, acyclic=s % 2 == 0)) for s in range(200)]
    nets += [(red_blue(), initial_state(red_blue(), {"q0": ["red"]}))]
    for ntk, s in nets:
        for k in all_keys(ntk):
            stats = EvalStats()
            eval_signal(k.flag, k.channel, ntk, None, s, stats=stats)
            worst = max(worst, stats.max_depth / (3 * len(ntk.channels)))
    ok = loop_ok and worst <= 1.0
    return ok, f"loop all ERROR in both evaluators: {loop_ok}; max depth / (3*|channels|) = {worst:.3f}"


def c4_equivalence():
    mismatches = compared = 0
    for seed in range(1, 501):
        ntk, st = generated_pair(GenParams(seed=seed))
        st = gen_random_state(ntk, seed + 10_000)
        memo = eval_all(ntk, st)
        for k in all_keys(ntk):
            compared += 1
            if not same_value(memo[k], eval_signal(k.flag, k.channel, ntk, None, st)):
                mismatches += 1
    return mismatches == 0, f"{compared} keys over 500 networks, {mismatches} mismatches"


def c5_simulation():
    t0 = time.perf_counter()
    rb = red_blue()
    st0 = initial_state(rb, sources={"src": scripted("red", "blue", "red")}, sinks={"snk1": ALWAYS_READY, "snk2": ALWAYS_READY})
    result = run(rb, st0, 15, until_quiescent=True)
    drained = result.status.value == "drained"
    conserved = conservation_check(result.trace, st0, result.state)
    consumed = {k: Counter(v) for k, v in result.state.consumed.items()}
    sinks_ok = consumed == {"snk1": Counter(red=2), "snk2": Counter(blue=1)}

    rng = random.Random(2024)
    same = steps = 0
    for seed in range(100):
        st = gen_random_state(rb, seed)
        a, _ = step(rb, st)
        b, _ = step(rb, st, shuffle=rng)
        same += a == b
        steps += 1
    dt = time.perf_counter() - t0
    ok = drained and conserved and sinks_ok and same == steps and dt < 1.0
    return ok, (
        f"drained after {len(result.trace)} cycles: {drained}; conservation: {conserved}; "
        f"consumed {dict(result.state.consumed)}; shuffle-invariant {same}/{steps}; {dt:.3f}s"
    )


STALL_CYCLE = 2  # hand simulation: cycle 0 fires c0, cycle 1 fires c0 c1 c2, cycle 2 fires nothing


def c6_quiescence():
    rb = red_blue(q1=1)
    st0 = initial_state(rb, sources={"src": scripted("red", "red")}, sinks={"snk1": scripted(False), "snk2": ALWAYS_READY})
    result = run(rb, st0, 50, until_quiescent=True)
    ok = result.status.value == "stuck" and result.stall_cycle == STALL_CYCLE
    q = dict(result.state.queues)
    return ok, f"status {result.status.value} at cycle {result.stall_cycle} (expected {STALL_CYCLE}); queues {q}"


def c7_validator():
    bad = []
    mutants = single_clause_mutants()
    for clause, ntk in mutants.items():
        got = validate_network(ntk).clauses()
        if got != {clause}:
            bad.append(f"{clause.label}->{sorted(c.label for c in got)}")
    ok = len(mutants) == 9 and not bad and validate_network(red_blue()).ok
    return ok, f"{len(mutants)} mutants, each fails only its own clause" if ok else "; ".join(bad)


CRITERIA = [
    (1, "worked-trace golden values", c1_golden),
    (2, "obligation property suite", c2_obligations),
    (3, "cycle detection", c3_cycles),
    (4, "evaluator equivalence", c4_equivalence),
    (5, "simulation soundness", c5_simulation),
    (6, "quiescence diagnostic", c6_quiescence),
    (7, "validator clause coverage", c7_validator),
]


def _line(n, name, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {n} ({name}): {detail}"


@pytest.mark.parametrize("n, name, fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(n, name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(n, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n, name, fn in CRITERIA:
        ok, detail = fn()
        results.append(ok)
        print(_line(n, name, ok, detail))
    sys.exit(0 if all(results) else 1)
