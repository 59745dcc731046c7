"""
Checking routing and transfer obligations
=========================================

Four properties must hold for every well-formed network and state:

* every trdy signal has a non-empty routing list,
* routing only names queues, sources and sinks,
* transfer entries are a subset of routing entries,
* every resource in a trdy transfer can receive right now.

We check them on a thousand random networks, then break the evaluator on
purpose to see the harness catch it and shrink the witness.
"""

import time

from xmas import GenParams, check_all, generated_pair
from xmas.obligations import check_transfer_subset, leaky_eval_all, shrink

t0 = time.perf_counter()
failures = 0
for seed in range(1, 1001):
    ntk, st = generated_pair(GenParams(seed=seed))
    failures += sum(not r.passed for r in check_all(ntk, st))
print(f"4000 checks, {failures} failures, {time.perf_counter() - t0:.1f}s")

###############################################################################
# A leaky evaluator adds a bogus transfer entry to every non-empty trdy.


def fails(ntk, st):
    return not check_transfer_subset(ntk, st, evaluate=leaky_eval_all).passed


ntk, st = shrink(GenParams(seed=3, components=(3, 25)), fails)
rep = check_transfer_subset(ntk, st, evaluate=leaky_eval_all)
print("smallest witness:", [f"{c.id}:{c.ctype.value}" for c in ntk.components])
print(f"  {rep.witness.key} = {rep.witness.value}")
print(" ", rep.record(seed=3))
