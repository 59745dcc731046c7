"""Combinatorial evaluation of channel signals.

Two evaluators share one dispatch over primitive types:

* `eval_signal` is the reference: it threads the set of signal keys not
  yet on the current evaluation path through every recursive call, and a
  request for a key outside that set is a combinatorial cycle. Sibling
  calls receive the same set, so shared sub-signals (diamonds) are fine.
  Cost can be exponential in the number of switches.
* `eval_all` computes every key once, marking keys unvisited / on-path /
  done; hitting an on-path key is a cycle.

Both return `ERROR` for any signal whose dependencies reach a cycle.
"""

from __future__ import annotations

import contextlib
import enum
import sys
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Union

from .network import (
    Channel,
    Component,
    ComponentType,
    StructuralError,
    XmasNetwork,
    apply_field,
    switch_route,
)
from .signals import ERROR, NODATA, Entry, mk_result, s_and, s_not, s_or
from .state import NetworkState

Q, SW, SRC, SNK, FN = (
    ComponentType.QUEUE,
    ComponentType.SWITCH,
    ComponentType.SOURCE,
    ComponentType.SINK,
    ComponentType.FUNCTION,
)


class Flag(enum.Enum):
    IRDY = "irdy"
    TRDY = "trdy"
    DATA = "data"

    def __repr__(self):
        return self.name


class SignalKey(NamedTuple):
    channel: str
    flag: Flag

    def __str__(self):
        return f"{self.channel}.{self.flag.value}"


def all_keys(ntk: XmasNetwork) -> frozenset[SignalKey]:
    return frozenset(SignalKey(ch.id, f) for ch in ntk.channels for f in Flag)


def can_send(c: Component, st: NetworkState) -> bool:
    if c.ctype is Q:
        return len(st.queues[c.id]) > 0
    if c.ctype is SRC:
        return st.sources[c.id].pending() is not None
    raise TypeError(f"can_send on {c.ctype.value} {c.id}")


def can_receive(c: Component, st: NetworkState) -> bool:
    if c.ctype is Q:
        return len(st.queues[c.id]) < c.capacity
    if c.ctype is SNK:
        return st.sinks[c.id].ready()
    raise TypeError(f"can_receive on {c.ctype.value} {c.id}")


def next_data(c: Component, st: NetworkState):
    contents = st.queues[c.id]
    return contents[0] if contents else NODATA


def _out_index(cpt: Component, chid: str) -> int:
    return cpt.outs.index(chid)


def _dispatch(flag: Flag, chid: str, ntk: XmasNetwork, st: NetworkState, sub: Callable):
    ch = ntk.channel(chid)

    if flag is Flag.DATA:
        cpt = ntk.component(ch.init)
        if cpt.ctype is Q:
            return next_data(cpt, st)
        if cpt.ctype is SRC:
            pkt = st.sources[cpt.id].pending()
            return NODATA if pkt is None else pkt
        if cpt.ctype is SW:
            return sub(Flag.DATA, cpt.ins[0])
        if cpt.ctype is FN:
            d = sub(Flag.DATA, cpt.ins[0])
            if d is ERROR or d is NODATA:
                return d
            return apply_field(0, cpt, d)
        return ERROR

    if flag is Flag.IRDY:
        cpt = ntk.component(ch.init)
        if cpt.ctype is Q or cpt.ctype is SRC:
            return mk_result(can_send(cpt, st))
        if cpt.ctype is FN:
            return sub(Flag.IRDY, cpt.ins[0])
        if cpt.ctype is SW:
            i = cpt.ins[0]
            guard = switch_route(cpt, sub(Flag.DATA, i))
            if _out_index(cpt, chid) == 1:
                guard = s_not(guard)
            return s_and(sub(Flag.IRDY, i), mk_result(guard))
        return ERROR

    cpt = ntk.component(ch.target)
    if cpt.ctype is Q or cpt.ctype is SNK:
        d = sub(Flag.DATA, chid)
        if d is ERROR:
            return ERROR
        ok = can_receive(cpt, st)
        e = Entry(cpt.id, d)
        return mk_result(ok, (e,), (e,) if ok else ())
    if cpt.ctype is FN:
        return sub(Flag.TRDY, cpt.outs[0])
    if cpt.ctype is SW:
        a, b = cpt.outs[0], cpt.outs[1]
        return s_or(
            s_and(sub(Flag.IRDY, a), sub(Flag.TRDY, a)),
            s_and(sub(Flag.IRDY, b), sub(Flag.TRDY, b)),
        )
    return ERROR


@contextlib.contextmanager
def _stack_for(ntk: XmasNetwork):
    # nested evaluations use a few Python frames each
    need = 12 * len(ntk.channels) + 200
    old = sys.getrecursionlimit()
    if need > old:
        sys.setrecursionlimit(need)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


@dataclass
class EvalStats:
    """Instrumentation for `eval_signal`.

    ``max_depth`` counts nested evaluations that passed the cycle check,
    i.e. how many keys the deepest path removed from the unvisited set.
    """

    calls: int = 0
    max_depth: int = 0


def _channel_id(ch: Union[str, Channel]) -> str:
    return ch.id if isinstance(ch, Channel) else ch


def eval_signal(
    flag: Flag,
    ch: Union[str, Channel],
    ntk: XmasNetwork,
    unvisited: Optional[frozenset] = None,
    st: Optional[NetworkState] = None,
    *,
    stats: Optional[EvalStats] = None,
):
    """Value of one signal, computed by path-set threading.

    `unvisited` defaults to every key of the network.
    """
    if st is None:
        raise TypeError("eval_signal needs a network state")
    chid = _channel_id(ch)
    if not ntk.has_channel(chid):
        raise StructuralError(f"no channel {chid!r}")
    if unvisited is None:
        unvisited = all_keys(ntk)
    unvisited = frozenset(unvisited)

    def go(flag, chid, unvisited, depth):
        if stats is not None:
            stats.calls += 1
        key = SignalKey(chid, flag)
        if key not in unvisited:
            return ERROR
        if stats is not None and depth > stats.max_depth:
            stats.max_depth = depth
        nxt = unvisited - {key}
        return _dispatch(flag, chid, ntk, st, lambda f, c: go(f, c, nxt, depth + 1))

    with _stack_for(ntk):
        return go(Flag(flag), chid, unvisited, 1)


_ON_PATH = object()


def eval_all(ntk: XmasNetwork, st: NetworkState) -> dict[SignalKey, object]:
    """Value of every signal of the network, each computed once."""
    memo: dict[SignalKey, object] = {}

    def get(flag, chid):
        key = SignalKey(chid, flag)
        v = memo.get(key)
        if v is _ON_PATH:
            return ERROR
        if v is not None:
            return v
        memo[key] = _ON_PATH
        v = _dispatch(flag, chid, ntk, st, get)
        memo[key] = v
        return v

    with _stack_for(ntk):
        for ch in ntk.channels:
            for flag in Flag:
                get(flag, ch.id)
    return {SignalKey(ch.id, f): memo[SignalKey(ch.id, f)] for ch in ntk.channels for f in Flag}


def cyclic_keys(values: dict) -> list[SignalKey]:
    return [k for k, v in values.items() if v is ERROR]
