"""Value domain of the combinatorial evaluator.

irdy/trdy signals evaluate to a `Signal` triple: the boolean on the wire,
the routing targets a packet could reach, and the subset of those it can
actually reach under the current state. Combinatorial cycles evaluate to
the `ERROR` marker, which every operator propagates.

Routing and transfer are kept as duplicate-preserving tuples in
concatenation order, so results match a literal list-append reading
entry for entry. Use `as_set` when order and multiplicity do not matter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Union


class Special(enum.Enum):
    ERROR = "error"
    NODATA = "nodata"

    def __repr__(self):
        return self.name

    __str__ = __repr__


ERROR = Special.ERROR
# Data of a channel whose producer has nothing to offer. Also used as the
# packet of routing entries built from such data.
NODATA = Special.NODATA


class Entry(NamedTuple):
    resource: str
    packet: Union[str, Special]

    def __str__(self):
        pkt = "NODATA" if self.packet is NODATA else self.packet
        return f"({self.resource},{pkt})"


@dataclass(frozen=True)
class Signal:
    b: bool
    routing: tuple[Entry, ...] = ()
    transfer: tuple[Entry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "routing", tuple(Entry(*e) for e in self.routing))
        object.__setattr__(self, "transfer", tuple(Entry(*e) for e in self.transfer))

    def __str__(self):
        return (
            f"bool={'t' if self.b else 'f'} "
            f"routing=[{','.join(map(str, self.routing))}] "
            f"transfer=[{','.join(map(str, self.transfer))}]"
        )


SignalValue = Union[Signal, Special]


def mk_result(b, routing=(), transfer=()) -> SignalValue:
    if b is ERROR:
        return ERROR
    return Signal(bool(b), tuple(routing), tuple(transfer))


def s_and(x: SignalValue, y: SignalValue) -> SignalValue:
    if x is ERROR or y is ERROR:
        return ERROR
    routing = x.routing + y.routing
    if x.b and y.b:
        return Signal(True, routing, x.transfer + y.transfer)
    return Signal(False, routing, ())


def s_or(x: SignalValue, y: SignalValue) -> SignalValue:
    if x is ERROR or y is ERROR:
        return ERROR
    routing = x.routing + y.routing
    transfer = (x.transfer if x.b else ()) + (y.transfer if y.b else ())
    return Signal(x.b or y.b, routing, transfer)


def s_not(b):
    if b is ERROR:
        return ERROR
    return not b


def as_set(entries) -> frozenset[Entry]:
    return frozenset(Entry(*e) for e in entries)


def same_value(x, y) -> bool:
    """Equality up to order and multiplicity of routing/transfer entries."""
    if isinstance(x, Signal) and isinstance(y, Signal):
        return (
            x.b == y.b
            and as_set(x.routing) == as_set(y.routing)
            and as_set(x.transfer) == as_set(y.transfer)
        )
    return x == y
