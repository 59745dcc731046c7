"""Executable semantics for xMAS communication-fabric models.

Networks of queues, switches, functions, sources and sinks are validated,
their channel signals evaluated (with combinatorial-cycle detection),
simulated cycle by cycle, and checked against the routing/transfer
correctness obligations.
"""

from .engine import EvalError, Run, Status, TraceEvent, conservation_check, detect_quiescence, run, step
from .evaluate import Flag, SignalKey, all_keys, can_receive, can_send, eval_all, eval_signal, next_data
from .fixtures import chain, loop_net, red_blue
from .network import (
    Channel,
    Clause,
    Component,
    ComponentType,
    XmasNetwork,
    apply_field,
    get_in_channel,
    get_init_component,
    get_out_channel,
    get_target_component,
    switch_route,
    validate_network,
)
from .obligations import GenParams, Obligation, ObligationReport, check_all, gen_random_network, gen_random_state, generated_pair
from .signals import ERROR, NODATA, Entry, Signal, mk_result, s_and, s_not, s_or
from .state import ALWAYS_READY, SILENT, NetworkState, Oracle, OracleMode, initial_state, scripted, seeded

__version__ = "0.1.0"

__all__ = [
    "all_keys",
    "ALWAYS_READY",
    "apply_field",
    "can_receive",
    "can_send",
    "chain",
    "Channel",
    "check_all",
    "Clause",
    "Component",
    "ComponentType",
    "conservation_check",
    "detect_quiescence",
    "Entry",
    "ERROR",
    "eval_all",
    "eval_signal",
    "EvalError",
    "Flag",
    "gen_random_network",
    "gen_random_state",
    "generated_pair",
    "GenParams",
    "get_in_channel",
    "get_init_component",
    "get_out_channel",
    "get_target_component",
    "initial_state",
    "loop_net",
    "mk_result",
    "NetworkState",
    "next_data",
    "NODATA",
    "Obligation",
    "ObligationReport",
    "Oracle",
    "OracleMode",
    "red_blue",
    "Run",
    "run",
    "s_and",
    "s_not",
    "s_or",
    "scripted",
    "seeded",
    "Signal",
    "SignalKey",
    "SILENT",
    "Status",
    "step",
    "switch_route",
    "TraceEvent",
    "validate_network",
    "XmasNetwork",
]
