import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from xmas.evaluate import Flag, SignalKey, all_keys, eval_all, eval_signal
from xmas.fixtures import chain, red_blue
from xmas.io import network_from_dict, state_from_dict
from xmas.network import RESOURCE_TYPES, ComponentType, validate_network
from xmas.obligations import (
    CHECKS,
    GenParams,
    Obligation,
    check_all,
    check_routing_nonempty,
    check_targets_are_resources,
    check_transfer_available,
    check_transfer_subset,
    gen_random_network,
    gen_random_state,
    generated_pair,
    leaky_eval_all,
    shrink,
    write_witness,
)
from xmas.signals import ERROR, Signal, as_set
from xmas.state import ALWAYS_READY, check_state, initial_state, scripted

from .mutations import single_clause_mutants


def _all_pass(ntk, st):
    reports = check_all(ntk, st)
    assert [r.obligation for r in reports] == list(Obligation)
    return all(r.passed for r in reports)


def test_rb_one_red(rb, rb_red):
    assert _all_pass(rb, rb_red)
    for key, v in eval_all(rb, rb_red).items():
        if key.flag is Flag.TRDY:
            assert {e.resource for e in v.routing} <= {"q0", "q1", "q2", "snk1", "snk2"}


def test_rb_all_full(rb):
    st = initial_state(rb, {"q0": ["red", "blue"], "q1": ["red", "red"], "q2": ["blue", "blue"]})
    assert _all_pass(rb, st)
    v = eval_all(rb, st)[SignalKey("c2", Flag.TRDY)]
    assert v.routing and not v.transfer


def test_rb_q1_full_blocks_red(rb):
    st = initial_state(rb, {"q0": ["red"], "q1": ["red", "red"]})
    assert check_transfer_subset(rb, st).passed
    assert check_transfer_available(rb, st).passed
    v = eval_signal(Flag.TRDY, "c1", rb, None, st)
    assert v == Signal(False, [("q1", "red"), ("q2", "red")], [])


def test_loop_vacuous(loop):
    reports = check_all(loop, initial_state(loop))
    assert all(r.passed for r in reports)
    assert all(r.checked == 0 for r in reports)


def test_function_never_in_routing():
    ntk = chain(ComponentType.FUNCTION, ComponentType.QUEUE)
    st = initial_state(ntk, sources={"src": scripted("red")})
    assert check_targets_are_resources(ntk, st).passed
    resources = {e.resource for v in eval_all(ntk, st).values() if v is not ERROR and isinstance(v, Signal) for e in v.routing}
    assert resources == {"q2", "snk"}


def test_empty_irdy_vacuous(rb):
    st = initial_state(rb)
    for key, v in eval_all(rb, st).items():
        if key.flag is Flag.IRDY:
            assert v.routing == ()
    assert check_targets_are_resources(rb, st).passed


def test_subset_needs_no_wellformedness():
    # broken networks still satisfy the subset check
    for ntk in single_clause_mutants().values():
        st = _loose_state(ntk)
        assert check_transfer_subset(ntk, st).passed


def _loose_state(ntk):
    queues = {c.id: [] for c in ntk.components if c.ctype is ComponentType.QUEUE}
    srcs = {c.id: scripted("red") for c in ntk.components if c.ctype is ComponentType.SOURCE}
    snks = {c.id: ALWAYS_READY for c in ntk.components if c.ctype is ComponentType.SINK}
    return initial_state(ntk, queues, srcs, snks)


# -- generators ---------------------------------------------------------------


def test_smallest_network_is_a_chain():
    ntk = gen_random_network(GenParams(seed=1, components=(3, 3)))
    assert [c.ctype for c in ntk.components] == [ComponentType.SOURCE, ComponentType.QUEUE, ComponentType.SINK]
    assert len(ntk.channels) == 2
    assert validate_network(ntk).ok


def test_genparams_validated():
    with pytest.raises(ValueError):
        GenParams(seed=0, components=(2, 5))
    with pytest.raises(ValueError):
        GenParams(seed=0, components=(9, 5))
    with pytest.raises(ValueError):
        GenParams(seed=0, alphabet=(0, 2))


@settings(max_examples=200, deadline=None)
@given(hst.integers(0, 2**31), hst.integers(3, 30), hst.booleans())
def test_generator_sound(seed, size, acyclic):
    p = GenParams(seed=seed, components=(3, size), acyclic=acyclic)
    ntk, st = generated_pair(p)
    assert validate_network(ntk).ok
    assert 3 <= len(ntk.components) <= size
    check_state(ntk, st)
    if acyclic:
        assert ERROR not in eval_all(ntk, st).values()


def test_cyclic_mode_produces_cycles():
    hits = 0
    for seed in range(200):
        ntk, st = generated_pair(GenParams(seed=seed, acyclic=False))
        hits += ERROR in eval_all(ntk, st).values()
    assert hits > 0


def test_state_fill_modes():
    rb = red_blue()
    st = gen_random_state(rb, 7)
    assert all(len(v) <= rb.component(q).capacity for q, v in st.queues.items())
    full = gen_random_state(rb, 7, "full")
    assert all(len(v) == rb.component(q).capacity for q, v in full.queues.items())
    empty = gen_random_state(rb, 7, "empty")
    assert all(v == () for v in empty.queues.values())
    with pytest.raises(ValueError):
        gen_random_state(rb, 7, "half")


def test_generation_deterministic():
    p = GenParams(seed=99)
    assert generated_pair(p) == generated_pair(p)


@settings(max_examples=300, deadline=None)
@given(hst.integers(0, 2**31))
def test_obligations_hold_on_generated(seed):
    ntk, st = generated_pair(GenParams(seed=seed))
    assert _all_pass(ntk, st)


@settings(max_examples=200, deadline=None)
@given(hst.integers(0, 2**31), hst.booleans(), hst.randoms(use_true_random=False))
def test_subset_under_random_unvisited(seed, acyclic, rnd):
    ntk, st = generated_pair(GenParams(seed=seed, acyclic=acyclic))
    keys = sorted(all_keys(ntk), key=str)
    subset = frozenset(k for k in keys if rnd.random() < 0.7)
    for key in keys:
        v = eval_signal(key.flag, key.channel, ntk, subset, st)
        if v is not ERROR and isinstance(v, Signal):
            assert as_set(v.transfer) <= as_set(v.routing)
            assert all(ntk.component(e.resource).ctype in RESOURCE_TYPES for e in v.routing)


# -- mutant, witnesses, shrinking ---------------------------------------------


def test_leaky_mutant_caught(rb, rb_red):
    reports = check_all(rb, rb_red, evaluate=leaky_eval_all)
    failed = [r for r in reports if not r.passed]
    assert Obligation.TRANSFER_SUBSET_ROUTING in {r.obligation for r in failed}
    rep = next(r for r in failed if r.obligation is Obligation.TRANSFER_SUBSET_ROUTING)
    assert rep.witness.key.flag is Flag.TRDY
    assert any(e.packet == "<leak>" for e in rep.witness.value.transfer)


def test_witness_replays(tmp_path, rb, rb_red):
    rep = check_transfer_subset(rb, rb_red, evaluate=leaky_eval_all)
    path = write_witness(rep, tmp_path / "w.json")
    doc = json.loads(path.read_text())
    assert doc["obligation"] == "TransferSubsetRouting"
    assert doc["key"] == {"channel": rep.witness.key.channel, "signal": "trdy"}
    ntk = network_from_dict(doc["network"])
    st = state_from_dict(ntk, doc["state"])
    again = check_transfer_subset(ntk, st, evaluate=leaky_eval_all)
    assert not again.passed
    assert again.witness.key == rep.witness.key
    assert check_transfer_subset(ntk, st).passed
    line = rep.record(seed=3, witness_path=path)
    assert line == f"obligation=TransferSubsetRouting passed=f seed=3 witness={path}"


def test_shrink_finds_small_witness():
    def fails(ntk, st):
        return not check_transfer_subset(ntk, st, evaluate=leaky_eval_all).passed

    ntk, st = shrink(GenParams(seed=4, components=(3, 25)), fails)
    assert len(ntk.components) == 3
    assert fails(ntk, st)


def test_shrink_none_when_correct():
    assert shrink(GenParams(seed=4, components=(3, 5)), lambda n, s: False, tries=2) is None


def test_checks_registry():
    assert len(CHECKS) == 4
    assert check_routing_nonempty in CHECKS
