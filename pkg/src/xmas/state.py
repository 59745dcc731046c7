"""Sequential state of a network: queue contents and source/sink oracles.

Oracles change only when their channel fires (seeded oracles additionally
redraw once per cycle), so a cycle that fires nothing leaves a
deterministic state unchanged apart from the cycle counter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np

from .network import ComponentType, XmasNetwork


class OracleMode(enum.Enum):
    SCRIPTED = "scripted"
    SEEDED = "seeded"
    ALWAYS_READY = "always_ready"  # sinks only
    SILENT = "silent"  # sources only


SOURCE_MODES = frozenset({OracleMode.SCRIPTED, OracleMode.SEEDED, OracleMode.SILENT})
SINK_MODES = frozenset({OracleMode.SCRIPTED, OracleMode.SEEDED, OracleMode.ALWAYS_READY})


@dataclass(frozen=True)
class Oracle:
    """Non-determinism of one source or sink.

    Scripted sources inject ``script`` in order; the head is retried until
    it is accepted. Scripted sinks consume one boolean per accepted packet
    and refuse once the script is exhausted, so a ``False`` entry blocks
    the sink for good. Seeded oracles draw from a per-oracle stream keyed by
    ``(seed, cycle)``; ``current`` holds the draw for the current cycle
    (pending tag of a source, readiness of a sink).
    """

    mode: OracleMode
    script: tuple = ()
    position: int = 0
    seed: int = 0
    probability: float = 1.0
    current: object = None

    def __post_init__(self):
        object.__setattr__(self, "script", tuple(self.script))
        if self.mode is OracleMode.SEEDED and not 0.0 < self.probability <= 1.0:
            raise ValueError(f"seeded oracle probability must be in (0, 1], got {self.probability}")

    @property
    def exhausted(self) -> bool:
        return self.position >= len(self.script)

    @property
    def deterministic(self) -> bool:
        return self.mode is not OracleMode.SEEDED

    def pending(self) -> Optional[str]:
        """Packet a source offers this cycle, or None."""
        if self.mode is OracleMode.SCRIPTED:
            return None if self.exhausted else self.script[self.position]
        if self.mode is OracleMode.SEEDED:
            return self.current
        return None

    def ready(self) -> bool:
        """Whether a sink accepts a packet this cycle."""
        if self.mode is OracleMode.SCRIPTED:
            return False if self.exhausted else bool(self.script[self.position])
        if self.mode is OracleMode.ALWAYS_READY:
            return True
        if self.mode is OracleMode.SEEDED:
            return bool(self.current)
        return False

    def fired(self) -> "Oracle":
        if self.mode is OracleMode.SCRIPTED:
            return replace(self, position=self.position + 1)
        if self.mode is OracleMode.SEEDED:
            return replace(self, current=None) if isinstance(self.current, str) else self
        return self


SILENT = Oracle(OracleMode.SILENT)
ALWAYS_READY = Oracle(OracleMode.ALWAYS_READY)


def scripted(*script) -> Oracle:
    return Oracle(OracleMode.SCRIPTED, tuple(script))


def seeded(seed: int, probability: float = 0.5) -> Oracle:
    return Oracle(OracleMode.SEEDED, seed=int(seed), probability=probability)


def oracle_draw(seed: int, cycle: int, alphabet) -> tuple[float, Optional[str]]:
    """Draw ``(u, tag)`` for one seeded oracle at one cycle, u in [0, 1).

    PCG64 seeded through ``SeedSequence([seed, cycle])``: every cycle gets
    an independent, platform-stable stream, so the generator advances
    exactly once per cycle whether or not the oracle fires.
    """
    rng = np.random.default_rng([seed, cycle])
    u = rng.random()
    k = int(rng.integers(len(alphabet))) if alphabet else 0
    return u, (alphabet[k] if alphabet else None)


def derive_seed(seed: int, index: int) -> int:
    """Per-oracle substream seed."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint32)[0])


@dataclass(frozen=True)
class NetworkState:
    queues: Mapping[str, tuple[str, ...]]
    sources: Mapping[str, Oracle] = field(default_factory=dict)
    sinks: Mapping[str, Oracle] = field(default_factory=dict)
    cycle: int = 0
    consumed: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "queues", {k: tuple(v) for k, v in self.queues.items()})
        object.__setattr__(self, "sources", dict(self.sources))
        object.__setattr__(self, "sinks", dict(self.sinks))
        object.__setattr__(self, "consumed", {k: tuple(v) for k, v in self.consumed.items()})

    @property
    def deterministic(self) -> bool:
        return all(o.deterministic for o in (*self.sources.values(), *self.sinks.values()))

    def occupancy(self) -> dict[str, int]:
        return {q: len(v) for q, v in self.queues.items()}

    def __str__(self):
        qs = " ".join(f"{q}:[{','.join(v)}]" for q, v in self.queues.items())
        return f"cycle={self.cycle} queues={{{qs}}}"


def initial_state(
    ntk: XmasNetwork,
    queues: Optional[Mapping[str, list]] = None,
    sources: Optional[Mapping[str, Oracle]] = None,
    sinks: Optional[Mapping[str, Oracle]] = None,
) -> NetworkState:
    """State with the given overrides; queues default to empty, sources to
    silent and sinks to always-ready."""
    queues = dict(queues or {})
    sources = dict(sources or {})
    sinks = dict(sinks or {})
    st = NetworkState(
        queues={c.id: tuple(queues.pop(c.id, ())) for c in ntk.of_type(ComponentType.QUEUE)},
        sources={c.id: sources.pop(c.id, SILENT) for c in ntk.of_type(ComponentType.SOURCE)},
        sinks={c.id: sinks.pop(c.id, ALWAYS_READY) for c in ntk.of_type(ComponentType.SINK)},
        consumed={c.id: () for c in ntk.of_type(ComponentType.SINK)},
    )
    unknown = sorted({*queues, *sources, *sinks})
    if unknown:
        raise ValueError(f"state names unknown or mistyped components: {unknown}")
    check_state(ntk, st)
    return st


def check_state(ntk: XmasNetwork, st: NetworkState) -> None:
    """Raise ValueError unless `st` is consistent with `ntk`."""
    expect = {
        "queues": (st.queues, ComponentType.QUEUE),
        "sources": (st.sources, ComponentType.SOURCE),
        "sinks": (st.sinks, ComponentType.SINK),
    }
    alphabet = set(ntk.alphabet)
    for name, (table, ctype) in expect.items():
        ids = {c.id for c in ntk.of_type(ctype)}
        if set(table) != ids:
            raise ValueError(f"{name} must cover exactly {sorted(ids)}, got {sorted(table)}")
    for q, contents in st.queues.items():
        cap = ntk.component(q).capacity
        if len(contents) > cap:
            raise ValueError(f"queue {q} holds {len(contents)} > capacity {cap}")
        if not set(contents) <= alphabet:
            raise ValueError(f"queue {q} holds tags outside the alphabet")
    for sid, o in st.sources.items():
        if o.mode not in SOURCE_MODES:
            raise ValueError(f"source {sid}: mode {o.mode.value} not allowed")
        if o.mode is OracleMode.SCRIPTED and not set(o.script) <= alphabet:
            raise ValueError(f"source {sid}: script tags outside the alphabet")
    for sid, o in st.sinks.items():
        if o.mode not in SINK_MODES:
            raise ValueError(f"sink {sid}: mode {o.mode.value} not allowed")
