"""
Cycle-accurate simulation
=========================

Run the red/blue network with a scripted source, print the trace, verify
that no packet was lost or duplicated, then look at queue occupancy under
random (seeded) traffic.
"""

import numpy as np

from xmas import conservation_check, initial_state, red_blue, run, scripted, seeded
from xmas.state import ALWAYS_READY

rb = red_blue()
st0 = initial_state(rb, sources={"src": scripted("red", "blue", "red")})

result = run(rb, st0, 15, until_quiescent=True)
for ev in result.trace:
    print(ev.line())
print("status:", result.status.value, "consumed:", dict(result.state.consumed))
print("conserved:", conservation_check(result.trace, st0, result.state))

###############################################################################
# Random traffic: the source offers a packet with probability 0.8 and each
# sink accepts with probability 0.5. Everything is reproducible from seeds.

st0 = initial_state(
    rb,
    sources={"src": seeded(7, 0.8)},
    sinks={"snk1": seeded(8, 0.5), "snk2": seeded(9, 0.5)},
)
result = run(rb, st0, 500)
queues = ["q0", "q1", "q2"]
occ = np.array([[len(ev.queues[q]) for q in queues] for ev in result.trace])

print("mean occupancy:", dict(zip(queues, occ.mean(axis=0).round(2).tolist())))
print("fraction of cycles full:", dict(zip(queues, (occ == 2).mean(axis=0).round(2).tolist())))
fired = np.array([len(ev.fired) for ev in result.trace])
print("transfers per cycle: mean %.2f, max %d" % (fired.mean(), fired.max()))
print("conserved:", conservation_check(result.trace, st0, result.state))

###############################################################################
# A sink that never accepts backs everything up. With deterministic oracles
# the engine notices the first cycle where nothing moves.

rb1 = red_blue(q1=1)
st0 = initial_state(rb1, sources={"src": scripted("red", "red")}, sinks={"snk1": scripted(False), "snk2": ALWAYS_READY})
result = run(rb1, st0, 50, until_quiescent=True)
print(f"{result.status.value} at cycle {result.stall_cycle}, queues {dict(result.state.queues)}")
