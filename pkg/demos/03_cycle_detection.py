"""
Combinatorial cycles
====================

Two functions wired into a ring have no queue to break the loop, so every
signal depends on itself. Both evaluators return ERROR instead of
recursing forever, and the simulator refuses to step.
"""

from xmas import EvalError, eval_all, eval_signal, initial_state, loop_net, step
from xmas.evaluate import EvalStats, all_keys, cyclic_keys

ntk = loop_net()
st = initial_state(ntk)

for key in sorted(all_keys(ntk), key=str):
    stats = EvalStats()
    v = eval_signal(key.flag, key.channel, ntk, None, st, stats=stats)
    print(f"{str(key):9s} -> {v!r}  (depth {stats.max_depth}, bound {3 * len(ntk.channels)})")

print("cyclic keys:", [str(k) for k in cyclic_keys(eval_all(ntk, st))])

try:
    step(ntk, st)
except EvalError as e:
    print("step:", e)

###############################################################################
# Randomly generated networks with rings: only rings without a queue are
# cyclic, so some generated networks evaluate cleanly and some do not.

from xmas import GenParams, generated_pair

hits = 0
for seed in range(100):
    n, s = generated_pair(GenParams(seed=seed, acyclic=False))
    hits += bool(cyclic_keys(eval_all(n, s)))
print(f"{hits}/100 cyclic-mode networks contain a combinatorial cycle")
