"""Cycle-accurate simulation.

A cycle evaluates every channel signal against the current state, then
applies every transfer (channels with irdy and trdy both true) at once:
all effects are computed from the pre-state, so a queue may hand its head
packet on and accept a new one in the same cycle, but a full queue never
accepts because its trdy was already false.
"""

from __future__ import annotations

import enum
import random
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .evaluate import Flag, SignalKey, cyclic_keys, eval_all
from .network import ComponentType, XmasNetwork
from .signals import NODATA
from .state import NetworkState, OracleMode, oracle_draw

Q, SW, SRC, SNK, FN = (
    ComponentType.QUEUE,
    ComponentType.SWITCH,
    ComponentType.SOURCE,
    ComponentType.SINK,
    ComponentType.FUNCTION,
)


class EvalError(RuntimeError):
    """The network has a combinatorial cycle under the given state."""

    def __init__(self, cycle: int, keys: Sequence[SignalKey]):
        self.cycle = cycle
        self.keys = tuple(keys)
        super().__init__(f"combinatorial cycle at cycle {cycle} via {', '.join(map(str, self.keys))}")


@dataclass(frozen=True)
class Move:
    """One packet going from a resource to the next one in a cycle.

    ``applied`` lists ``(function-id, in-tag, out-tag)`` for every function
    crossed on the way, in path order.
    """

    channel: str
    origin: str
    sent: str
    dest: str
    received: str
    applied: tuple = ()


@dataclass(frozen=True)
class TraceEvent:
    cycle: int
    fired: tuple[tuple[str, str], ...]
    moves: tuple[Move, ...]
    queues: dict = field(default_factory=dict)

    def line(self) -> str:
        fired = ",".join(f"({c},{p})" for c, p in self.fired)
        queues = ",".join(f"{q}:[{','.join(v)}]" for q, v in self.queues.items())
        return f"cycle={self.cycle} fired=[{fired}] queues={{{queues}}}"


def prepare(ntk: XmasNetwork, st: NetworkState) -> NetworkState:
    """Resolve seeded oracles for the current cycle.

    Idempotent: a seeded source keeps an unsent packet, and sink draws are
    a pure function of ``(seed, cycle)``.
    """
    if st.deterministic:
        return st
    sources, sinks = dict(st.sources), dict(st.sinks)
    for sid, o in sources.items():
        if o.mode is OracleMode.SEEDED:
            u, tag = oracle_draw(o.seed, st.cycle, ntk.alphabet)
            if o.current is None and u < o.probability:
                sources[sid] = replace(o, current=tag)
    for sid, o in sinks.items():
        if o.mode is OracleMode.SEEDED:
            u, _ = oracle_draw(o.seed, st.cycle, ntk.alphabet)
            sinks[sid] = replace(o, current=u < o.probability)
    return replace(st, sources=sources, sinks=sinks)


def _moves(ntk: XmasNetwork, values: dict, fired: list[str]) -> list[Move]:
    out = []
    for chid in fired:
        ch = ntk.channel(chid)
        if ntk.component(ch.target).ctype not in (Q, SNK):
            continue
        applied = []
        cur = ch
        while (cpt := ntk.component(cur.init)).ctype not in (Q, SRC):
            prev = ntk.channel(cpt.ins[0])
            if cpt.ctype is FN:
                applied.append(
                    (cpt.id, values[SignalKey(prev.id, Flag.DATA)], values[SignalKey(cur.id, Flag.DATA)])
                )
            cur = prev
        out.append(
            Move(
                channel=chid,
                origin=cur.init,
                sent=values[SignalKey(cur.id, Flag.DATA)],
                dest=ch.target,
                received=values[SignalKey(chid, Flag.DATA)],
                applied=tuple(reversed(applied)),
            )
        )
    return out


def fired_channels(ntk: XmasNetwork, values: dict) -> list[str]:
    out = []
    for ch in ntk.channels:
        irdy = values[SignalKey(ch.id, Flag.IRDY)]
        trdy = values[SignalKey(ch.id, Flag.TRDY)]
        if irdy.b and trdy.b:
            out.append(ch.id)
    return out


def apply_transfers(
    ntk: XmasNetwork,
    st: NetworkState,
    fired: Sequence[tuple[str, str]],
) -> NetworkState:
    """Sequential update for the given ``(channel, packet)`` transfers, in
    the order given. Effects are per channel endpoint."""
    queues = {q: list(v) for q, v in st.queues.items()}
    sources, sinks = dict(st.sources), dict(st.sinks)
    consumed = {k: list(v) for k, v in st.consumed.items()}
    for chid, pkt in fired:
        ch = ntk.channel(chid)
        init, target = ntk.component(ch.init), ntk.component(ch.target)
        if init.ctype is Q:
            # the pre-state head; any same-cycle arrival went to the back
            queues[init.id].pop(0)
        elif init.ctype is SRC:
            sources[init.id] = sources[init.id].fired()
        if target.ctype is Q:
            queues[target.id].append(pkt)
        elif target.ctype is SNK:
            consumed.setdefault(target.id, []).append(pkt)
            sinks[target.id] = sinks[target.id].fired()
    for q, v in queues.items():
        assert len(v) <= ntk.component(q).capacity, f"queue {q} overflow"
    return replace(st, queues=queues, sources=sources, sinks=sinks, consumed=consumed, cycle=st.cycle + 1)


def step(ntk: XmasNetwork, st: NetworkState, *, shuffle: Optional[random.Random] = None):
    """One simulation cycle; returns ``(next_state, event)``.

    `shuffle`, if given, permutes the order in which transfers are applied
    (the result must not depend on it).
    """
    st = prepare(ntk, st)
    values = eval_all(ntk, st)
    bad = cyclic_keys(values)
    if bad:
        raise EvalError(st.cycle, bad)
    chans = fired_channels(ntk, values)
    fired = [(c, values[SignalKey(c, Flag.DATA)]) for c in chans]
    assert all(p is not NODATA for _, p in fired), "transfer without data"
    order = list(fired)
    if shuffle is not None:
        shuffle.shuffle(order)
    nxt = apply_transfers(ntk, st, order)
    event = TraceEvent(st.cycle, tuple(fired), tuple(_moves(ntk, values, chans)), dict(nxt.queues))
    return nxt, event


# -- runs and diagnostics -----------------------------------------------------


class Status(enum.Enum):
    DRAINED = "drained"
    ACTIVE = "active"
    STUCK = "stuck"


@dataclass(frozen=True)
class QuiescenceReport:
    status: Status
    cycle: int


def _work_left(st: NetworkState) -> bool:
    if any(st.queues.values()):
        return True
    return any(o.mode is OracleMode.SCRIPTED and not o.exhausted for o in st.sources.values())


def detect_quiescence(ntk: XmasNetwork, st: NetworkState) -> QuiescenceReport:
    """Classify a state with deterministic oracles.

    A state that fires nothing and still holds work is stuck for good:
    deterministic oracles only change when they fire, so the same state
    comes back every cycle.
    """
    if not st.deterministic:
        raise ValueError("quiescence is only decidable with deterministic oracles")
    if not _work_left(st):
        return QuiescenceReport(Status.DRAINED, st.cycle)
    _, ev = step(ntk, st)
    return QuiescenceReport(Status.ACTIVE if ev.fired else Status.STUCK, st.cycle)


@dataclass
class Run:
    trace: list[TraceEvent]
    state: NetworkState
    status: Status
    stall_cycle: Optional[int] = None


def run(
    ntk: XmasNetwork,
    st0: NetworkState,
    max_cycles: int,
    *,
    until_quiescent: bool = False,
) -> Run:
    """Iterate `step` up to `max_cycles` times.

    With `until_quiescent` and deterministic oracles, stop as soon as the
    network is drained (before stepping) or stuck (a step fired nothing).
    """
    if max_cycles < 1:
        raise ValueError("max_cycles must be positive")
    watch = until_quiescent and st0.deterministic
    trace: list[TraceEvent] = []
    st = st0
    for _ in range(max_cycles):
        if watch and not _work_left(st):
            # an idle network with a combinatorial cycle is still broken
            bad = cyclic_keys(eval_all(ntk, st))
            if bad:
                raise EvalError(st.cycle, bad)
            return Run(trace, st, Status.DRAINED)
        st, ev = step(ntk, st)
        trace.append(ev)
        if watch and not ev.fired and _work_left(st):
            return Run(trace, st, Status.STUCK, stall_cycle=ev.cycle)
    # a seeded source can always inject more, so such runs never drain
    done = st.deterministic and not _work_left(st)
    return Run(trace, st, Status.DRAINED if done else Status.ACTIVE)


# -- conservation -------------------------------------------------------------


@dataclass
class Replay:
    """Packet identities reconstructed from a trace.

    Initial queue contents get ids 0.. in queue order, then every injection
    gets the next id.
    """

    queues: dict[str, deque] = field(default_factory=dict)
    consumed: dict[str, list] = field(default_factory=dict)
    injected: list = field(default_factory=list)
    initial: list = field(default_factory=list)
    problems: list[str] = field(default_factory=list)


def replay(trace: Sequence[TraceEvent], st0: NetworkState) -> Replay:
    r = Replay()
    uid = 0
    for q, contents in st0.queues.items():
        r.queues[q] = deque()
        for pkt in contents:
            r.queues[q].append((uid, pkt))
            r.initial.append((uid, pkt))
            uid += 1
    for sink in st0.consumed:
        r.consumed[sink] = []

    for ev in trace:
        fired = {c for c, _ in ev.fired}
        in_flight = []
        for m in ev.moves:
            if m.channel not in fired:
                r.problems.append(f"cycle {ev.cycle}: move on {m.channel} which did not fire")
            if m.origin in r.queues:
                if not r.queues[m.origin]:
                    r.problems.append(f"cycle {ev.cycle}: {m.origin} empty on departure")
                    continue
                pid, pkt = r.queues[m.origin].popleft()
                if pkt != m.sent:
                    r.problems.append(f"cycle {ev.cycle}: {m.origin} head is {pkt}, trace says {m.sent}")
            else:
                pid = uid
                uid += 1
                r.injected.append((pid, m.origin, m.sent))
            tag = m.sent
            for fn, a, b in m.applied:
                if a != tag:
                    r.problems.append(f"cycle {ev.cycle}: {fn} applied to {a}, packet is {tag}")
                tag = b
            if tag != m.received:
                r.problems.append(f"cycle {ev.cycle}: {m.dest} received {m.received}, expected {tag}")
            in_flight.append((m.dest, pid, m.received))
        for dest, pid, pkt in in_flight:
            if dest in r.queues:
                r.queues[dest].append((pid, pkt))
            else:
                r.consumed.setdefault(dest, []).append((pid, pkt))
    return r


def conservation_check(trace: Sequence[TraceEvent], st0: NetworkState, st_end: NetworkState) -> bool:
    """Every packet present at the start or injected since is, at the end,
    in exactly one queue or consumed by exactly one sink, with its tag
    changed only by the logged function applications."""
    r = replay(trace, st0)
    if r.problems:
        return False
    ends = [pid for v in r.queues.values() for pid, _ in v]
    ends += [pid for v in r.consumed.values() for pid, _ in v]
    starts = [pid for pid, _ in r.initial] + [pid for pid, _, _ in r.injected]
    if Counter(ends) != Counter(starts):
        return False
    for q, v in r.queues.items():
        if tuple(p for _, p in v) != tuple(st_end.queues.get(q, ())):
            return False
    for snk in set(r.consumed) | set(st_end.consumed):
        before = tuple(st0.consumed.get(snk, ()))
        during = tuple(p for _, p in r.consumed.get(snk, ()))
        if before + during != tuple(st_end.consumed.get(snk, ())):
            return False
    return True
