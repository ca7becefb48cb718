import pytest
from hypothesis import given, settings, strategies as st

from contractnet import bruteforce, choice
from contractnet.choice import Linear, Union, Weak
from contractnet.core import Instance, validate
from contractnet.errors import InputError, PreconditionError
from contractnet.reduction import (
    SplitMap, lift_stable, lift_through, project_system, reduce_to_weak_orders, split_agent,
)
from contractnet.stability import enumerate_stable, is_stable

F = frozenset


def split_split2(split2):
    return split_agent(split2, "0", [Linear(["c", "d"]), Linear(["d", "c"])])


def test_split2_formula(split2):
    after, smap = split_split2(split2)
    assert after.agents == ("0#1", "0#2", "j")
    assert after.contract_ids == ("c#1", "c#2", "d#1", "d#2")
    assert choice.same_function(after.equipment["j"], Weak([{"c#1", "c#2"}, {"d#1", "d#2"}]))
    assert after.equipment["0#1"] == Linear(["c#1", "d#1"])
    assert after.equipment["0#2"] == Linear(["d#2", "c#2"])
    assert smap.agent_map == {"0#1": "0", "0#2": "0", "j": "j"}
    assert validate(after) == []


def test_split2_project_and_lift(split2):
    after, smap = split_split2(split2)
    assert project_system(smap, {"c#1", "c#2"}) == {"c"}
    assert project_system(smap, set()) == F()
    assert project_system(smap, {"d#1", "d#2"}) == {"d"}
    assert enumerate_stable(split2) == [F({"c"})]
    (step,) = smap.steps
    lifted = lift_stable(step, {"c"})
    assert lifted == {"c#1", "c#2"}
    assert is_stable(after, lifted)


def test_lift_requires_stable(split2):
    _, smap = split_split2(split2)
    with pytest.raises(PreconditionError):
        lift_stable(smap.steps[0], {"d"})


def test_identity_split(cyc3):
    after, smap = split_agent(cyc3, "2", [cyc3.equipment["2"]])
    assert after.agents == ("1", "2#1", "3")
    rename = {v: k for k, v in smap.contract_map.items()}
    assert after.equipment["1"] == Linear([rename[c] for c in cyc3.equipment["1"].ranking])
    assert after.equipment["2#1"] == Linear(["c23#1", "c12#1", "a2#1"])
    assert enumerate_stable(after) == []


def test_lift_verbatim_when_agent_untouched():
    inst = Instance.build(
        ["0", "1"], [("a0", ["0"]), ("a1", ["1"])], {"0": Union([["a0"]]), "1": Linear(["a1"])}
    )
    _, smap = split_agent(inst, "0", [Linear(["a0"]), Linear(["a0"])])
    assert lift_stable(smap.steps[0], {"a0", "a1"}) == {"a0#1", "a0#2", "a1"}


def test_union_mismatch(split2):
    with pytest.raises(InputError):
        split_agent(split2, "0", [Linear(["c", "d"])])
    with pytest.raises(InputError):
        split_agent(split2, "0", [Linear(["c"])])


def test_reduce_all_linear_is_identity(cyc3):
    reduced, smap = reduce_to_weak_orders(cyc3)
    assert reduced == cyc3
    assert smap == SplitMap.identity(cyc3)


def test_reduce_split2_is_weak_already(split2):
    reduced, smap = reduce_to_weak_orders(split2)
    assert smap.steps == ()
    assert reduced.equipment["0"] == Weak([{"c", "d"}])


def test_reduce_two_union_agents():
    inst = Instance.build(
        ["1", "2", "3"],
        [("a1", ["1"]), ("a2", ["2"]), ("x", ["1", "3"]), ("y", ["1", "3"]), ("z", ["2", "3"]), ("w", ["2", "3"])],
        {
            "1": Union([["x", "y", "a1"], ["a1", "y", "x"]]),
            "2": Union([["z", "w", "a2"], ["a2", "w", "z"]]),
            "3": Linear(["x", "z", "y", "w"]),
        },
    )
    reduced, smap = reduce_to_weak_orders(inst)
    assert [s.agent for s in smap.steps] == ["1", "2"]
    assert all(isinstance(s, (Linear, Weak)) for s in reduced.equipment.values())
    assert set(smap.agent_map.values()) == {"1", "2", "3"}
    assert set(smap.contract_map.values()) == set(inst.contract_ids)
    got = {project_system(smap, s) for s in enumerate_stable(reduced)}
    assert got == set(enumerate_stable(inst))


def union_instance(seed):
    cfg = bruteforce.GeneratorConfig(
        seed=seed, agents=(2, 3), contracts=(2, 5), union_agents=1, mix={"linear": 1, "weak": 1}
    )
    return bruteforce.generate(cfg)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_reduction_preserves_stable_family(seed):
    inst = union_instance(seed)
    reduced, smap = reduce_to_weak_orders(inst)
    assert all(isinstance(s, (Linear, Weak)) for s in reduced.equipment.values())
    original = enumerate_stable(inst)
    assert {project_system(smap, s) for s in enumerate_stable(reduced)} == set(original)
    for s in original:
        lifted = lift_through(smap, s)
        assert is_stable(reduced, lifted)
        assert project_system(smap, lifted) == s


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_lifted_systems_match_parts(seed):
    inst = union_instance(seed)
    parts = choice.am_decompose(inst.equipment["1"])
    after, smap = split_agent(inst, "1", parts)
    (step,) = smap.steps
    for s in enumerate_stable(inst):
        lifted = lift_stable(step, s)
        s0 = s & inst.contracts_of("1")
        for j in inst.agents:
            if j == "1":
                continue
            mine = lifted & after.contracts_of(j)
            assert choice.choose(after.equipment[j], mine) == mine
            assert project_system(smap, mine) == s & inst.contracts_of(j)
        for k, sub in enumerate(step.new_agents):
            mine = lifted & after.contracts_of(sub)
            assert project_system(smap, choice.choose(after.equipment[sub], mine)) == parts[k]._pick(s0)
            for c in inst.contracts_of("1"):
                got = choice.choose(after.equipment[sub], mine | {step.copies[c][k]})
                assert project_system(smap, got) == parts[k]._pick(s0 | {c})
