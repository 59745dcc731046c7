"""Network representation: components, channels, accessors and the
well-formedness validator.

A network is immutable once built. Components refer to channels by id in
port order (``ins``/``outs``) and channels refer back to their initiator and
target components by id, so the two sides can disagree; `validate_network`
reports every such disagreement.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional, Union

from .signals import ERROR, NODATA


class ComponentType(enum.Enum):
    QUEUE = "queue"
    SWITCH = "switch"
    SOURCE = "source"
    SINK = "sink"
    FUNCTION = "function"

    @property
    def is_resource(self) -> bool:
        return self in RESOURCE_TYPES


RESOURCE_TYPES = frozenset({ComponentType.QUEUE, ComponentType.SOURCE, ComponentType.SINK})

# (inputs, outputs) per type
ARITY = {
    ComponentType.QUEUE: (1, 1),
    ComponentType.SWITCH: (1, 2),
    ComponentType.SOURCE: (0, 1),
    ComponentType.SINK: (1, 0),
    ComponentType.FUNCTION: (1, 1),
}

# Switch tables map a tag to the output port index it is routed to.
OUT0, OUT1 = 0, 1

DEFAULT_CAPACITY = 2


class StructuralError(LookupError):
    """Raised by the accessors on references that do not resolve."""


@dataclass(frozen=True)
class Component:
    id: str
    ctype: ComponentType
    ins: tuple[str, ...] = ()
    outs: tuple[str, ...] = ()
    # One lookup table per function parameter. Switch and Function
    # components carry exactly one.
    field: tuple[Mapping[str, Union[str, int]], ...] = ()
    capacity: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "ins", tuple(self.ins))
        object.__setattr__(self, "outs", tuple(self.outs))
        object.__setattr__(self, "field", tuple(dict(t) for t in self.field))
        if self.ctype is ComponentType.QUEUE and self.capacity is None:
            object.__setattr__(self, "capacity", DEFAULT_CAPACITY)

    def __hash__(self):
        return hash((self.id, self.ctype, self.ins, self.outs))


@dataclass(frozen=True)
class Channel:
    id: str
    init: str
    target: str


@dataclass(frozen=True)
class XmasNetwork:
    components: tuple[Component, ...]
    channels: tuple[Channel, ...]
    alphabet: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))

    # First occurrence wins on duplicate ids; duplicates are a validation
    # finding, not a lookup error.
    @cached_property
    def _components_by_id(self) -> dict[str, Component]:
        out: dict[str, Component] = {}
        for c in self.components:
            out.setdefault(c.id, c)
        return out

    @cached_property
    def _channels_by_id(self) -> dict[str, Channel]:
        out: dict[str, Channel] = {}
        for ch in self.channels:
            out.setdefault(ch.id, ch)
        return out

    def component(self, cid: str) -> Component:
        try:
            return self._components_by_id[cid]
        except KeyError:
            raise StructuralError(f"no component {cid!r}") from None

    def channel(self, chid: str) -> Channel:
        try:
            return self._channels_by_id[chid]
        except KeyError:
            raise StructuralError(f"no channel {chid!r}") from None

    def has_component(self, cid: str) -> bool:
        return cid in self._components_by_id

    def has_channel(self, chid: str) -> bool:
        return chid in self._channels_by_id

    def of_type(self, ctype: ComponentType) -> list[Component]:
        return [c for c in self.components if c.ctype is ctype]


def get_in_channel(c: Component, i: int, ntk: XmasNetwork) -> Channel:
    if not 0 <= i < len(c.ins):
        raise StructuralError(f"{c.id} has no input port {i}")
    return ntk.channel(c.ins[i])


def get_out_channel(c: Component, i: int, ntk: XmasNetwork) -> Channel:
    if not 0 <= i < len(c.outs):
        raise StructuralError(f"{c.id} has no output port {i}")
    return ntk.channel(c.outs[i])


def get_init_component(ch: Channel, ntk: XmasNetwork) -> Component:
    return ntk.component(ch.init)


def get_target_component(ch: Channel, ntk: XmasNetwork) -> Component:
    return ntk.component(ch.target)


def apply_field(n: int, c: Component, x: str):
    """Look up `x` in the `n`-th table of `c`."""
    try:
        return c.field[n][x]
    except (IndexError, KeyError):
        raise StructuralError(f"{c.id}: table {n} has no entry for {x!r}") from None


def switch_route(c: Component, d):
    """Routing guard of a switch: True when `d` leaves on output 0.

    The error marker passes through unchanged. Absent data (an empty
    upstream queue) is routed to output 0 so the guard stays total; the
    corresponding irdy is false anyway.
    """
    if d is ERROR:
        return ERROR
    if d is NODATA:
        return True
    return apply_field(0, c, d) == OUT0


# -- validation --------------------------------------------------------------


class Clause(enum.Enum):
    REFERENCES = "a"
    ARITY = "b"
    INS_INVERTIBLE = "c"
    OUTS_INVERTIBLE = "d"
    TARGET_INVERTIBLE = "e"
    INIT_INVERTIBLE = "f"
    NO_DUPLICATES = "g"
    TABLE_TOTAL = "h"
    SWITCH_BINARY = "i"

    @property
    def label(self) -> str:
        return f"({self.value}) {self.name.lower().replace('_', '-')}"


@dataclass(frozen=True)
class Finding:
    clause: Clause
    where: tuple
    message: str

    def __str__(self):
        return f"{self.clause.label} at {self.where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.findings

    def clauses(self) -> set[Clause]:
        return {f.clause for f in self.findings}

    def __iter__(self):
        return iter(self.findings)

    def __len__(self):
        return len(self.findings)


def validate_network(ntk: XmasNetwork) -> ValidationReport:
    """Check every well-formedness clause and return all violations.

    Invertibility clauses are only evaluated where the references involved
    resolve; dangling references are reported once, under REFERENCES.
    """
    found: list[Finding] = []

    def report(clause, where, msg):
        found.append(Finding(clause, where, msg))

    # (g)
    for kind, ids in (
        ("component", [c.id for c in ntk.components]),
        ("channel", [ch.id for ch in ntk.channels]),
    ):
        for ident, n in Counter(ids).items():
            if n > 1:
                report(Clause.NO_DUPLICATES, (kind, ident), f"{kind} id appears {n} times")

    # (a)
    for c in ntk.components:
        for side, refs in (("ins", c.ins), ("outs", c.outs)):
            for i, chid in enumerate(refs):
                if not ntk.has_channel(chid):
                    report(Clause.REFERENCES, (c.id, side, i), f"unknown channel {chid!r}")
    for ch in ntk.channels:
        for end in ("init", "target"):
            cid = getattr(ch, end)
            if not ntk.has_component(cid):
                report(Clause.REFERENCES, (ch.id, end), f"unknown component {cid!r}")

    # (b)
    for c in ntk.components:
        n_in, n_out = ARITY[c.ctype]
        if (len(c.ins), len(c.outs)) != (n_in, n_out):
            report(
                Clause.ARITY,
                (c.id,),
                f"{c.ctype.value} needs {n_in} in/{n_out} out, has {len(c.ins)}/{len(c.outs)}",
            )
        if c.ctype is ComponentType.QUEUE and not (isinstance(c.capacity, int) and c.capacity >= 1):
            report(Clause.ARITY, (c.id,), f"queue capacity {c.capacity!r} < 1")

    # (c), (d)
    for c in ntk.components:
        for i, chid in enumerate(c.ins):
            if ntk.has_channel(chid):
                tgt = ntk.channel(chid).target
                if ntk.has_component(tgt) and tgt != c.id:
                    report(Clause.INS_INVERTIBLE, (c.id, i), f"input {chid} targets {tgt}")
        for i, chid in enumerate(c.outs):
            if ntk.has_channel(chid):
                ini = ntk.channel(chid).init
                if ntk.has_component(ini) and ini != c.id:
                    report(Clause.OUTS_INVERTIBLE, (c.id, i), f"output {chid} is initiated by {ini}")

    # (e), (f)
    for ch in ntk.channels:
        if ntk.has_component(ch.target) and ch.id not in ntk.component(ch.target).ins:
            report(Clause.TARGET_INVERTIBLE, (ch.id,), f"not an input of its target {ch.target}")
        if ntk.has_component(ch.init) and ch.id not in ntk.component(ch.init).outs:
            report(Clause.INIT_INVERTIBLE, (ch.id,), f"not an output of its initiator {ch.init}")

    # (h), (i)
    alphabet = set(ntk.alphabet)
    for c in ntk.components:
        if c.ctype not in (ComponentType.SWITCH, ComponentType.FUNCTION):
            continue
        if len(c.field) != 1:
            report(Clause.TABLE_TOTAL, (c.id,), f"expected 1 table, found {len(c.field)}")
            continue
        table = c.field[0]
        missing = sorted(alphabet - set(table))
        if missing:
            report(Clause.TABLE_TOTAL, (c.id,), f"no entry for {missing}")
        extra = sorted(set(table) - alphabet)
        if extra:
            report(Clause.TABLE_TOTAL, (c.id,), f"keys outside alphabet: {extra}")
        if c.ctype is ComponentType.FUNCTION:
            bad = sorted({v for v in table.values() if v not in alphabet}, key=str)
            if bad:
                report(Clause.TABLE_TOTAL, (c.id,), f"results outside alphabet: {bad}")
        else:
            bad = sorted({v for v in table.values() if v not in (OUT0, OUT1) or isinstance(v, bool)}, key=str)
            if bad:
                report(Clause.SWITCH_BINARY, (c.id,), f"branch values {bad} not in {{0, 1}}")

    return ValidationReport(tuple(found))
