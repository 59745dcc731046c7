"""
Evaluating channel signals on the red/blue network
==================================================

A source feeds queue q0, a switch sends red packets to q1 and blue ones to
q2, and two sinks drain those queues. We put one red packet in q0 and ask
which handshake wires are high.
"""

from xmas import Flag, eval_all, eval_signal, initial_state, red_blue
from xmas.evaluate import EvalStats

rb = red_blue()
st = initial_state(rb, {"q0": ["red"]})

# irdy on c2 (switch -> q1): q0 can send, and red goes to output 0
print("c2.irdy =", eval_signal(Flag.IRDY, "c2", rb, None, st))

# trdy on c1 (q0 -> switch) carries the routing info: both queues are
# possible targets, only q1 actually receives this red packet
print("c1.trdy =", eval_signal(Flag.TRDY, "c1", rb, None, st))

###############################################################################
# The memoized evaluator computes all 18 signals at once.

for key, value in sorted(eval_all(rb, st).items(), key=lambda kv: str(kv[0])):
    print(f"  {str(key):10s} {value}")

###############################################################################
# The reference evaluator re-derives shared sub-terms. c1.irdy and c1.data
# are reached through both switch outputs, which is a diamond, not a cycle.

stats = EvalStats()
eval_signal(Flag.TRDY, "c1", rb, None, st, stats=stats)
print(f"c1.trdy took {stats.calls} calls, max depth {stats.max_depth}")

###############################################################################
# Fill q1 and the red packet has nowhere to go: routing stays, transfer empties.

full = initial_state(rb, {"q0": ["red"], "q1": ["red", "red"]})
print("c1.trdy with q1 full =", eval_signal(Flag.TRDY, "c1", rb, None, full))
