"""Routing/transfer correctness obligations as executable checks, plus
random generators of well-formed networks and states to drive them.

Each check evaluates every signal once (`eval_all`) and tests one
property over the relevant keys:

- RoutingNonEmpty: every non-error trdy has at least one routing entry.
- TargetsAreResources: irdy/trdy routing names only queues, sources, sinks.
- TransferSubsetRouting: irdy/trdy transfer entries all occur in routing.
- TransferAvailable: every resource in a trdy transfer can receive now.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional

from .evaluate import Flag, SignalKey, all_keys, can_receive, eval_all, eval_signal
from .io import network_to_dict, state_to_dict, write_atomic
from .network import (
    RESOURCE_TYPES,
    Channel,
    Component,
    ComponentType,
    StructuralError,
    XmasNetwork,
)
from .signals import ERROR, Entry, Signal, as_set
from .state import ALWAYS_READY, NetworkState, Oracle, OracleMode, initial_state

Q, SW, SRC, SNK, FN = (
    ComponentType.QUEUE,
    ComponentType.SWITCH,
    ComponentType.SOURCE,
    ComponentType.SINK,
    ComponentType.FUNCTION,
)


class Obligation(enum.Enum):
    ROUTING_NONEMPTY = "RoutingNonEmpty"
    TARGETS_ARE_RESOURCES = "TargetsAreResources"
    TRANSFER_SUBSET_ROUTING = "TransferSubsetRouting"
    TRANSFER_AVAILABLE = "TransferAvailable"


@dataclass(frozen=True)
class Witness:
    network: XmasNetwork
    state: NetworkState
    key: SignalKey
    value: object

    def to_dict(self) -> dict:
        return {
            "key": {"channel": self.key.channel, "signal": self.key.flag.value},
            "value": str(self.value),
            "network": network_to_dict(self.network),
            "state": state_to_dict(self.state),
        }


@dataclass(frozen=True)
class ObligationReport:
    obligation: Obligation
    passed: bool
    witness: Optional[Witness] = None
    checked: int = 0

    def record(self, seed=None, witness_path=None) -> str:
        return (
            f"obligation={self.obligation.value} passed={'t' if self.passed else 'f'} "
            f"seed={'-' if seed is None else seed} witness={witness_path or '-'}"
        )


Evaluator = Callable[[XmasNetwork, NetworkState], dict]


def _signals(values: dict, flags):
    for key, v in values.items():
        if key.flag in flags and v is not ERROR:
            yield key, v


def _run(obl, ntk, st, values, flags, ok) -> ObligationReport:
    n = 0
    for key, v in _signals(values, flags):
        n += 1
        if not ok(v):
            return ObligationReport(obl, False, Witness(ntk, st, key, v), n)
    return ObligationReport(obl, True, None, n)


def check_routing_nonempty(ntk, st, *, evaluate: Evaluator = eval_all) -> ObligationReport:
    return _run(
        Obligation.ROUTING_NONEMPTY, ntk, st, evaluate(ntk, st), {Flag.TRDY}, lambda v: len(v.routing) > 0
    )


def check_targets_are_resources(ntk, st, *, evaluate: Evaluator = eval_all) -> ObligationReport:
    def ok(v: Signal):
        return all(ntk.has_component(e.resource) and ntk.component(e.resource).ctype in RESOURCE_TYPES for e in v.routing)

    return _run(Obligation.TARGETS_ARE_RESOURCES, ntk, st, evaluate(ntk, st), {Flag.IRDY, Flag.TRDY}, ok)


def _values_tolerant(ntk, st, evaluate) -> dict:
    # No well-formedness precondition here: on a network whose references
    # do not all resolve, evaluate key by key and skip what cannot be.
    try:
        return evaluate(ntk, st)
    except (StructuralError, KeyError, IndexError, ValueError):
        out = {}
        for key in sorted(all_keys(ntk), key=str):
            try:
                out[key] = eval_signal(key.flag, key.channel, ntk, None, st)
            except (StructuralError, KeyError, IndexError, ValueError):
                pass
        return out


def check_transfer_subset(ntk, st, *, evaluate: Evaluator = eval_all) -> ObligationReport:
    return _run(
        Obligation.TRANSFER_SUBSET_ROUTING,
        ntk,
        st,
        _values_tolerant(ntk, st, evaluate),
        {Flag.IRDY, Flag.TRDY},
        lambda v: as_set(v.transfer) <= as_set(v.routing),
    )


def check_transfer_available(ntk, st, *, evaluate: Evaluator = eval_all) -> ObligationReport:
    def ok(v: Signal):
        return all(can_receive(ntk.component(e.resource), st) for e in v.transfer)

    return _run(Obligation.TRANSFER_AVAILABLE, ntk, st, evaluate(ntk, st), {Flag.TRDY}, ok)


CHECKS = (
    check_routing_nonempty,
    check_targets_are_resources,
    check_transfer_subset,
    check_transfer_available,
)


def check_all(ntk, st, *, evaluate: Evaluator = eval_all) -> list[ObligationReport]:
    return [chk(ntk, st, evaluate=evaluate) for chk in CHECKS]


def leaky_eval_all(ntk: XmasNetwork, st: NetworkState) -> dict:
    """Deliberately wrong evaluator: non-empty trdy transfers gain an entry
    absent from routing. Exists to show the harness catches it."""
    values = eval_all(ntk, st)
    for key, v in values.items():
        if key.flag is Flag.TRDY and isinstance(v, Signal) and v.transfer:
            leak = Entry(v.transfer[0].resource, "<leak>")
            values[key] = Signal(v.b, v.routing, v.transfer + (leak,))
    return values


MUTANTS = {"transfer-leak": leaky_eval_all}


# -- generators ---------------------------------------------------------------

TAGS = ("red", "blue", "green", "yellow", "cyan", "magenta", "white", "black")


def _tags(k: int) -> tuple[str, ...]:
    return tuple(TAGS[i] if i < len(TAGS) else f"tag{i}" for i in range(k))


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    components: tuple[int, int] = (3, 25)
    alphabet: tuple[int, int] = (1, 4)
    capacity: tuple[int, int] = (1, 3)
    acyclic: bool = True

    def __post_init__(self):
        for name in ("components", "alphabet", "capacity"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} range {lo}..{hi} is empty")
        if self.components[0] < 3:
            raise ValueError("networks need at least 3 components")
        if self.alphabet[0] < 1 or self.capacity[0] < 1:
            raise ValueError("alphabet size and capacity must be >= 1")


class _Builder:
    def __init__(self, rng: random.Random, p: GenParams, alphabet):
        self.rng, self.p, self.alphabet = rng, p, alphabet
        self.comps: dict[str, dict] = {}
        self.channels: list[Channel] = []
        self.open: list[tuple[str, int]] = []
        self.counter = 0

    @property
    def size(self) -> int:
        # every open output port will get its own sink
        return len(self.comps) + len(self.open)

    def add(self, ctype: ComponentType) -> str:
        prefix = {Q: "q", SW: "sw", SRC: "src", SNK: "snk", FN: "fn"}[ctype]
        cid = f"{prefix}{self.counter}"
        self.counter += 1
        n_in, n_out = {Q: (1, 1), SW: (1, 2), SRC: (0, 1), SNK: (1, 0), FN: (1, 1)}[ctype]
        rng = self.rng
        table = None
        if ctype is SW:
            table = {a: rng.randint(0, 1) for a in self.alphabet}
        elif ctype is FN:
            table = {a: rng.choice(self.alphabet) for a in self.alphabet}
        self.comps[cid] = {
            "ctype": ctype,
            "ins": [None] * n_in,
            "outs": [None] * n_out,
            "table": table,
            "capacity": rng.randint(*self.p.capacity) if ctype is Q else None,
        }
        return cid

    def connect(self, init: str, port: int, target: str, tport: int = 0) -> None:
        chid = f"c{len(self.channels)}"
        self.channels.append(Channel(chid, init, target))
        self.comps[init]["outs"][port] = chid
        self.comps[target]["ins"][tport] = chid

    def outputs(self, cid) -> list[tuple[str, int]]:
        return [(cid, i) for i in range(len(self.comps[cid]["outs"]))]

    def attach(self, ctype: ComponentType) -> str:
        """New component fed by a random open output port."""
        src = self.open.pop(self.rng.randrange(len(self.open)))
        cid = self.add(ctype)
        self.connect(*src, cid)
        self.open.extend(self.outputs(cid))
        return cid

    def ring_plan(self):
        rng = self.rng
        if self.p.acyclic:
            head = Q
            body = [rng.choice((Q, FN, SW)) for _ in range(rng.randint(0, 2))]
        else:
            head = rng.choice((Q, FN, SW))
            body = [rng.choice((FN, SW, FN)) for _ in range(rng.randint(0, 2))]
        kinds = [head, *body]
        cost = len(kinds) + sum(k is SW for k in kinds)
        return kinds, cost

    def ring(self, kinds) -> None:
        """Components in a loop; each switch's second output leaves the loop."""
        ids = [self.add(k) for k in kinds]
        for a, b in zip(ids, ids[1:] + ids[:1]):
            self.connect(a, 0, b)
            if self.comps[a]["ctype"] is SW:
                self.open.append((a, 1))

    def finish(self) -> XmasNetwork:
        for port in self.open:
            self.connect(*port, self.add(SNK))
        self.open.clear()
        components = [
            Component(
                cid,
                c["ctype"],
                tuple(c["ins"]),
                tuple(c["outs"]),
                field=() if c["table"] is None else (c["table"],),
                capacity=c["capacity"],
            )
            for cid, c in self.comps.items()
        ]
        return XmasNetwork(components, self.channels, self.alphabet)


def gen_random_network(p: GenParams) -> XmasNetwork:
    """Random well-formed network with a component count drawn from
    ``p.components``.

    Trees grow from sources (each source feeds a queue first) and every
    dangling output is closed by a sink. Loops are closed rings whose
    switches branch out of them; with ``p.acyclic`` every ring holds a
    queue, so no combinatorial cycle exists.
    """
    rng = random.Random(p.seed)
    target = rng.randint(*p.components)
    b = _Builder(rng, p, _tags(rng.randint(*p.alphabet)))
    b.open.append((b.add(SRC), 0))
    b.attach(Q)
    while b.size < target:
        room = target - b.size
        action = rng.choices(("extend", "switch", "source", "ring"), weights=(5, 3, 1, 2))[0]
        if action == "extend":
            b.attach(rng.choice((Q, FN)))
        elif action == "switch" and room >= 2:
            b.attach(SW)
        elif action == "source" and room >= 3:
            b.open.append((b.add(SRC), 0))
            b.attach(Q)
        elif action == "ring":
            kinds, cost = b.ring_plan()
            if cost <= room:
                b.ring(kinds)
    return b.finish()


def gen_random_state(ntk: XmasNetwork, seed: int, fill: str = "random") -> NetworkState:
    """Random state; `fill` is ``"random"``, ``"empty"`` or ``"full"`` and
    only affects queue occupancy. Oracles always get deterministic scripts."""
    if fill not in ("random", "empty", "full"):
        raise ValueError(f"unknown fill mode {fill!r}")
    rng = random.Random(seed)
    alphabet = ntk.alphabet
    queues = {}
    for c in ntk.of_type(Q):
        n = {"random": rng.randint(0, c.capacity), "empty": 0, "full": c.capacity}[fill]
        queues[c.id] = [rng.choice(alphabet) for _ in range(n)]
    sources = {
        c.id: Oracle(OracleMode.SCRIPTED, tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 3))))
        for c in ntk.of_type(SRC)
    }
    sinks = {}
    for c in ntk.of_type(SNK):
        if rng.random() < 0.3:
            sinks[c.id] = ALWAYS_READY
        else:
            sinks[c.id] = Oracle(OracleMode.SCRIPTED, tuple(rng.random() < 0.6 for _ in range(rng.randint(0, 3))))
    return initial_state(ntk, queues, sources, sinks)


def generated_pair(p: GenParams) -> tuple[XmasNetwork, NetworkState]:
    ntk = gen_random_network(p)
    return ntk, gen_random_state(ntk, p.seed)


def shrink(p: GenParams, fails: Callable[[XmasNetwork, NetworkState], bool], tries: int = 20):
    """Smallest generated (network, state) for which `fails` holds, trying
    component counts and alphabet sizes upward from the minimum. Returns
    None if nothing at or below `p`'s sizes fails."""
    for n in range(p.components[0], p.components[1] + 1):
        for k in range(p.alphabet[0], p.alphabet[1] + 1):
            for t in range(tries):
                q = replace(p, seed=p.seed * 1000 + t, components=(n, n), alphabet=(k, k))
                ntk, st = generated_pair(q)
                if fails(ntk, st):
                    return ntk, st
    return None


def write_witness(report: ObligationReport, path) -> Path:
    path = Path(path)
    doc = {"obligation": report.obligation.value, **report.witness.to_dict()}
    write_atomic(path, json.dumps(doc, indent=2) + "\n")
    return path
