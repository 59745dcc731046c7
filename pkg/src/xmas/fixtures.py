"""Small reference networks.

``red_blue`` is the routing example: a source feeds queue q0, a switch
sends red packets to q1 and blue packets to q2, and each of those drains
into its own sink::

    src -c0-> q0 -c1-> sw -c2-> q1 -c4-> snk1
                          \\-c3-> q2 -c5-> snk2

``loop_net`` is two function components wired into a ring, the smallest
combinatorial cycle.
"""

from __future__ import annotations

from .network import Channel, Component, ComponentType, XmasNetwork

Q, SW, SRC, SNK, FN = (
    ComponentType.QUEUE,
    ComponentType.SWITCH,
    ComponentType.SOURCE,
    ComponentType.SINK,
    ComponentType.FUNCTION,
)


def red_blue(q0: int = 2, q1: int = 2, q2: int = 2) -> XmasNetwork:
    components = [
        Component("src", SRC, (), ("c0",)),
        Component("q0", Q, ("c0",), ("c1",), capacity=q0),
        Component("sw", SW, ("c1",), ("c2", "c3"), field=({"red": 0, "blue": 1},)),
        Component("q1", Q, ("c2",), ("c4",), capacity=q1),
        Component("q2", Q, ("c3",), ("c5",), capacity=q2),
        Component("snk1", SNK, ("c4",), ()),
        Component("snk2", SNK, ("c5",), ()),
    ]
    channels = [
        Channel("c0", "src", "q0"),
        Channel("c1", "q0", "sw"),
        Channel("c2", "sw", "q1"),
        Channel("c3", "sw", "q2"),
        Channel("c4", "q1", "snk1"),
        Channel("c5", "q2", "snk2"),
    ]
    return XmasNetwork(components, channels, ("red", "blue"))


def loop_net() -> XmasNetwork:
    ident = {"red": "red", "blue": "blue"}
    components = [
        Component("f1", FN, ("cB",), ("cA",), field=(ident,)),
        Component("f2", FN, ("cA",), ("cB",), field=(ident,)),
    ]
    channels = [Channel("cA", "f1", "f2"), Channel("cB", "f2", "f1")]
    return XmasNetwork(components, channels, ("red", "blue"))


def chain(*types: ComponentType, alphabet=("red", "blue")) -> XmasNetwork:
    """A straight line of one-in/one-out components between a source and a
    sink; functions get the identity table."""
    names = ["src"] + [f"{t.value[0]}{i}" for i, t in enumerate(types, 1)] + ["snk"]
    kinds = [SRC, *types, SNK]
    chans = [f"c{i}" for i in range(len(names) - 1)]
    components = []
    for i, (name, kind) in enumerate(zip(names, kinds)):
        ins = (chans[i - 1],) if i > 0 else ()
        outs = (chans[i],) if i < len(names) - 1 else ()
        field = ({a: a for a in alphabet},) if kind is FN else ()
        components.append(Component(name, kind, ins, outs, field=field))
    channels = [Channel(c, names[i], names[i + 1]) for i, c in enumerate(chans)]
    return XmasNetwork(components, channels, alphabet)
