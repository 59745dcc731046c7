"""JSON network documents.

A document looks like::

    {
      "alphabet": ["red", "blue"],
      "components": [
        {"id": "q0", "type": "queue", "capacity": 2},
        {"id": "sw", "type": "switch", "table": {"red": 0, "blue": 1}},
        ...
      ],
      "channels": [
        {"id": "c1", "init": ["q0", 0], "target": ["sw", 0]},
        ...
      ],
      "state": {
        "queues": {"q0": ["red"]},
        "sources": {"src": {"mode": "scripted", "script": ["red", "blue"]}},
        "sinks": {"snk1": {"mode": "always_ready"}}
      }
    }

Port lists of a component are built from the channels' ``[component, port]``
endpoints unless the component carries explicit ``"ins"``/``"outs"``, in
which case those are used verbatim and the channel port numbers are only
informational. `dumps_document` always writes both sides.
"""

from __future__ import annotations

import contextlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Optional

from .network import Channel, Component, ComponentType, XmasNetwork
from .state import NetworkState, Oracle, OracleMode, initial_state


class ParseError(ValueError):
    """Malformed document; the message carries the position."""


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in obj:
        raise ParseError(f"{where}: missing key {key!r}")
    return obj[key]


def _endpoint(raw, where):
    if isinstance(raw, str):
        return raw, None
    if isinstance(raw, list) and len(raw) == 2 and isinstance(raw[0], str) and isinstance(raw[1], int):
        return raw[0], raw[1]
    raise ParseError(f"{where}: endpoint must be [component-id, port], got {raw!r}")


def _port_list(slots: dict[int, str]) -> tuple[str, ...]:
    # Holes become "" so the validator reports them as dangling.
    if not slots:
        return ()
    return tuple(slots.get(i, "") for i in range(max(slots) + 1))


def network_from_dict(doc: dict) -> XmasNetwork:
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    alphabet = _need(doc, "alphabet", "document")
    if not isinstance(alphabet, list) or not all(isinstance(a, str) for a in alphabet):
        raise ParseError("alphabet must be an array of strings")

    ins: dict[str, dict[int, str]] = {}
    outs: dict[str, dict[int, str]] = {}
    channels = []
    for n, raw in enumerate(_need(doc, "channels", "document")):
        where = f"channels[{n}]"
        chid = _need(raw, "id", where)
        init, iport = _endpoint(_need(raw, "init", where), where + ".init")
        target, tport = _endpoint(_need(raw, "target", where), where + ".target")
        channels.append(Channel(chid, init, target))
        if iport is not None:
            outs.setdefault(init, {}).setdefault(iport, chid)
        if tport is not None:
            ins.setdefault(target, {}).setdefault(tport, chid)

    components = []
    for n, raw in enumerate(_need(doc, "components", "document")):
        where = f"components[{n}]"
        cid = _need(raw, "id", where)
        tname = _need(raw, "type", where)
        try:
            ctype = ComponentType(tname)
        except ValueError:
            raise ParseError(f"{where}: unknown type {tname!r}") from None
        table = raw.get("table")
        fields = () if table is None else (table,)
        components.append(
            Component(
                cid,
                ctype,
                ins=tuple(raw["ins"]) if "ins" in raw else _port_list(ins.get(cid, {})),
                outs=tuple(raw["outs"]) if "outs" in raw else _port_list(outs.get(cid, {})),
                field=fields,
                capacity=raw.get("capacity"),
            )
        )
    return XmasNetwork(components, channels, alphabet)


def network_to_dict(ntk: XmasNetwork) -> dict:
    comps = []
    for c in ntk.components:
        d: dict[str, Any] = {"id": c.id, "type": c.ctype.value}
        if c.ctype is ComponentType.QUEUE:
            d["capacity"] = c.capacity
        if c.field:
            d["table"] = dict(c.field[0])
        d["ins"] = list(c.ins)
        d["outs"] = list(c.outs)
        comps.append(d)

    def port(cid, side, chid):
        if not ntk.has_component(cid):
            return [cid, -1]
        refs = getattr(ntk.component(cid), side)
        return [cid, refs.index(chid) if chid in refs else -1]

    chans = [
        {"id": ch.id, "init": port(ch.init, "outs", ch.id), "target": port(ch.target, "ins", ch.id)}
        for ch in ntk.channels
    ]
    return {"alphabet": list(ntk.alphabet), "components": comps, "channels": chans}


def _oracle_from_dict(raw: dict, where: str) -> Oracle:
    mname = _need(raw, "mode", where)
    try:
        mode = OracleMode(mname)
    except ValueError:
        raise ParseError(f"{where}: unknown oracle mode {mname!r}") from None
    try:
        return Oracle(
            mode,
            script=tuple(raw.get("script", ())),
            position=int(raw.get("position", 0)),
            seed=int(raw.get("seed", 0)),
            probability=float(raw.get("probability", 1.0)),
        )
    except ValueError as e:
        raise ParseError(f"{where}: {e}") from None


def _oracle_to_dict(o: Oracle) -> dict:
    d: dict[str, Any] = {"mode": o.mode.value}
    if o.mode is OracleMode.SCRIPTED:
        d["script"] = list(o.script)
        if o.position:
            d["position"] = o.position
    elif o.mode is OracleMode.SEEDED:
        d["seed"] = o.seed
        d["probability"] = o.probability
    return d


def state_from_dict(ntk: XmasNetwork, raw: Optional[dict]) -> NetworkState:
    raw = {} if raw is None else raw
    if not isinstance(raw, dict) or not all(isinstance(raw.get(k, {}), dict) for k in ("queues", "sources", "sinks")):
        raise ParseError("state: expected an object of queues/sources/sinks objects")
    sources = {k: _oracle_from_dict(v, f"state.sources.{k}") for k, v in raw.get("sources", {}).items()}
    sinks = {k: _oracle_from_dict(v, f"state.sinks.{k}") for k, v in raw.get("sinks", {}).items()}
    try:
        return initial_state(ntk, raw.get("queues", {}), sources, sinks)
    except ValueError as e:
        raise ParseError(f"state: {e}") from None


def state_to_dict(st: NetworkState) -> dict:
    return {
        "queues": {q: list(v) for q, v in st.queues.items()},
        "sources": {k: _oracle_to_dict(o) for k, o in st.sources.items()},
        "sinks": {k: _oracle_to_dict(o) for k, o in st.sinks.items()},
    }


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from None


def load_document(path) -> tuple[XmasNetwork, Optional[dict]]:
    """Parse a network file; returns the network and the raw ``"state"``
    object (None if absent) for `state_from_dict`."""
    doc = loads(Path(path).read_text())
    ntk = network_from_dict(doc)
    return ntk, doc.get("state")


def load_state_file(ntk: XmasNetwork, path) -> NetworkState:
    doc = loads(Path(path).read_text())
    if isinstance(doc, dict) and "state" in doc:
        doc = doc["state"]
    return state_from_dict(ntk, doc)


def dumps_document(ntk: XmasNetwork, st: Optional[NetworkState] = None) -> str:
    doc = network_to_dict(ntk)
    if st is not None:
        doc["state"] = state_to_dict(st)
    return json.dumps(doc, indent=2) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise
