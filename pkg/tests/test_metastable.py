import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from contractnet import bruteforce, choice
from contractnet.choice import Linear, Weak
from contractnet.core import Instance, augment_autarkic, individual_utilities
from contractnet.errors import InputError, PreconditionError
from contractnet.metastable import (
    EMPTY, classify_components, compromise_violations, dominates, find_compromise, is_metastable,
    is_minimal_metastable, iter_compromises, linearize_equipment, minimize, perturb_ties,
    perturbation_plan, solve_metastable, solve_metastable_detailed, system_from_compromise,
    threshold_system,
)
from contractnet.stability import enumerate_stable, subsets_by_size

F = frozenset


def test_dominates_examples(cyc3):
    w = dominates(cyc3, "c23", {"c12"})
    assert w.dominator == "c23" and w.per_agent == (("2", "c12"), ("3", EMPTY))
    assert w.as_dict() == {"2": "c12", "3": "empty"}
    assert dominates(cyc3, "c31", {"c12"}) is None
    assert dominates(cyc3, "c23", {"c23"}) is None


def test_domination_by_members(cyc3):
    # agent 2 would drop c12 for c23, agent 3 holds only c31 and prefers it
    assert dominates(cyc3, "c23", {"c12", "c23", "c31"}) is None
    s = {"c12", "a3"}
    assert dominates(cyc3, "c23", s) is not None
    assert dominates(cyc3, "c23", s | {"c23"}) is not None
    assert dominates(cyc3, "c23", s | {"c23"}, exclude_members=True) is None


def test_metastable_examples(cyc3):
    assert is_metastable(cyc3, {"c12", "c23"})
    v = is_metastable(cyc3, set())
    assert not v and v.witness.dominator == "a1"
    assert is_metastable(cyc3, {"c12", "c23", "c31"})


def test_linearize():
    w = Weak([{"b", "a"}, {"c"}])
    inst = Instance.build(["1"], [("a", ["1"]), ("b", ["1"]), ("c", ["1"])], {"1": w})
    assert linearize_equipment(inst).equipment["1"] == Linear(["a", "b", "c"])


def two_agents():
    return Instance.build(
        ["1", "2"], [("a1", ["1"]), ("a2", ["2"]), ("c", ["1", "2"])],
        {"1": Linear(["c", "a1"]), "2": Linear(["c", "a2"])},
    )


def test_compromise_examples(cyc3):
    assert find_compromise(cyc3).as_tuple(cyc3.agents) == (2, 1, 1)
    solo = Instance.build(["1"], [("a", ["1"])], {"1": Linear(["a"])})
    assert find_compromise(solo).values == {"1": 0}
    assert find_compromise(two_agents()).values == {"1": 1, "2": 1}


def test_compromise_needs_autarkic(marr):
    with pytest.raises(PreconditionError):
        find_compromise(marr)


def test_system_from_compromise(cyc3):
    assert system_from_compromise(cyc3, {"1": 2, "2": 1, "3": 1}) == {"c12", "c23"}
    assert system_from_compromise(two_agents(), {"1": 1, "2": 1}) == {"c"}
    with pytest.raises(InputError):
        system_from_compromise(cyc3, {"1": 0, "2": 0, "3": 0})
    assert threshold_system(cyc3, {"1": 0, "2": 0, "3": 0}) >= {"a1", "a2", "a3"}


def test_solve_examples(cyc3, marr):
    assert solve_metastable(cyc3) == {"c12", "c23"}
    solo = Instance.build(["1"], [("a", ["1"])], {"1": Linear(["a"])})
    assert solve_metastable(solo) == {"a"}
    got = solve_metastable(marr)
    assert is_metastable(marr, got) and got >= {"m1w1", "m2w2"}


def test_solve_with_refusal():
    inst = two_agents().with_equipment({"1": Linear(["c", "a1"]), "2": Linear(["a2", "c"])})
    sol = solve_metastable_detailed(inst)
    assert sol.system == {"a1", "a2"} and sol.compromise.values == {"1": 0, "2": 1}


def test_solve_prunes_nulls_and_drops_dummies():
    indifferent_to_z = choice.Table.from_function({"c", "z"}, lambda m: m - {"z"})
    inst = Instance.build(
        ["1", "2"], [("c", ["1", "2"]), ("z", ["1", "2"])], {"1": indifferent_to_z, "2": Weak([{"c", "z"}])}
    )
    sol = solve_metastable_detailed(inst)
    assert sol.pruned == {"z"}
    assert sol.system == {"c"}
    assert {c.id for c in sol.working.contracts if c.autarkic_dummy} == {"dummy:1", "dummy:2"}


def test_minimality_examples(cyc3):
    assert is_minimal_metastable(cyc3, {"c12", "c23"})
    v = is_minimal_metastable(cyc3, {"c12", "c23", "c31"})
    assert not v and v.witness.dominator == "c12"
    solo = Instance.build(["1"], [("a", ["1"])], {"1": Linear(["a"])})
    assert is_minimal_metastable(solo, {"a"})
    with pytest.raises(PreconditionError):
        is_minimal_metastable(cyc3, set())


def test_minimize_examples(cyc3):
    out = minimize(cyc3, {"c12", "c23", "c31"})
    assert out == {"c23", "c31"} and is_minimal_metastable(cyc3, out)
    assert minimize(cyc3, {"c12", "c23"}) == {"c12", "c23"}
    with pytest.raises(PreconditionError):
        minimize(cyc3, {"c12"})


def test_minimize_keeps_all_autarkics():
    inst = Instance.build(["1", "2"], [("a1", ["1"]), ("a2", ["2"])], {"1": Linear(["a1"]), "2": Linear(["a2"])})
    assert minimize(inst, {"a1", "a2"}) == {"a1", "a2"}


def test_perturb_linear_is_trivial(cyc3):
    plans = perturbation_plan(cyc3, {"c12", "c23"})
    assert all(not p.raised and not p.lowered for p in plans.values())
    assert perturb_ties(cyc3, {"c12", "c23"}).equipment == cyc3.equipment


def test_perturb_lowers_outside_tie():
    inst = Instance.build(
        ["1", "2"], [("a1", ["1"]), ("a2", ["2"]), ("c", ["1", "2"]), ("d", ["1", "2"])],
        {"1": Weak([{"c", "d"}, {"a1"}]), "2": Linear(["c", "a2", "d"])},
    )
    plan = perturbation_plan(inst, {"c"})["1"]
    assert plan.anchor == "c" and plan.raised == F() and plan.lowered == {"d"}
    out = perturb_ties(inst, {"c"})
    assert out.equipment["1"] == Linear(["c", "d", "a1"])
    assert is_metastable(out, {"c"})


def test_perturb_raises_second_member():
    inst = Instance.build(
        ["1", "2", "3"],
        [("a1", ["1"]), ("a2", ["2"]), ("a3", ["3"]), ("c", ["1", "2"]), ("d", ["1", "3"])],
        {"1": Weak([{"c", "d"}, {"a1"}]), "2": Linear(["c", "a2"]), "3": Linear(["d", "a3"])},
    )
    plan = perturbation_plan(inst, {"c", "d"})["1"]
    assert plan.anchor == "c" and plan.raised == {"d"} and plan.lowered == F()
    out = perturb_ties(inst, {"c", "d"})
    assert out.equipment["1"] == Linear(["d", "c", "a1"])
    assert is_metastable(out, {"c", "d"})


def test_perturb_requires_minimal(cyc3):
    with pytest.raises(PreconditionError):
        perturb_ties(cyc3, {"c12", "c23", "c31"})


def test_classify_examples(cyc3, marr):
    (comp,) = classify_components(cyc3, {"c12", "c23"})
    assert comp.shape == "star" and comp.center == "2" and comp.leaves == ("1", "3")
    comps = classify_components(marr, {"m1w1", "m2w2"})
    assert [(c.shape, c.agents) for c in comps] == [("star", ("m1", "w1")), ("star", ("m2", "w2"))]
    assert all(c.shape == "isolated" for c in classify_components(cyc3, set()))
    assert len(classify_components(cyc3, {"a1"})) == 3


def test_classify_rejects_hyperedges():
    inst = Instance.build(["1", "2", "3"], [("t", ["1", "2", "3"])], {a: Linear(["t"]) for a in "123"})
    with pytest.raises(InputError):
        classify_components(inst, set())


# -- properties ---------------------------------------------------------------


def gen(seed, **kw):
    return bruteforce.generate(bruteforce.GeneratorConfig(seed=seed, **kw))


def weak_gen(seed):
    return gen(seed, mix={"linear": 1, "weak": 1})


def binary_linear(seed):
    return gen(seed, max_participants=2, mix={"linear": 1})


seeds = st.integers(0, 100_000)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_linearization_keeps_domination(seed):
    inst = gen(seed)
    lin = linearize_equipment(inst)
    for s in subsets_by_size(inst.contract_ids):
        for d in inst.contract_ids:
            if dominates(inst, d, s) is not None:
                assert dominates(lin, d, s) is not None


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_every_grid_compromise_gives_metastable_system(seed):
    working = augment_autarkic(linearize_equipment(gen(seed)))
    xs = list(iter_compromises(working))
    assert xs
    for x in xs:
        s = system_from_compromise(working, x)
        assert all(s & working.contracts_of(a) for a in working.agents)
        assert is_metastable(working, s)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_real_compromises_snap_to_grid(seed):
    working = augment_autarkic(linearize_equipment(gen(seed, agents=(2, 3), contracts=(2, 5))))
    util = individual_utilities(working)
    agents = working.agents
    grid = {a: set(util[a].values()) for a in agents}
    halves = {a: [Fraction(k, 2) for k in range(-1, 2 * max(grid[a]) + 2)] for a in agents}
    for point in itertools.product(*(halves[a] for a in agents)):
        x = dict(zip(agents, point))
        if compromise_violations(working, x):
            continue
        s = threshold_system(working, x)
        snapped = {a: min(util[a][c] for c in s & working.contracts_of(a)) for a in agents}
        assert all(snapped[a] in grid[a] for a in agents)
        assert compromise_violations(working, snapped) == []
        assert threshold_system(working, snapped) == s


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_metastable_systems_touch_autarkic_agents(seed):
    inst = gen(seed)
    for s in bruteforce.enumerate_metastable(inst):
        assert all(s & inst.contracts_of(a) for a in inst.agents)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_shrinking_keeps_metastability(seed):
    inst = gen(seed)
    for s in bruteforce.enumerate_metastable(inst):
        for c in s:
            t = s - {c}
            if all(t & inst.contracts_of(a) for a in inst.agents):
                assert is_metastable(inst, t)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_minimality_matches_subset_scan(seed):
    inst = gen(seed)
    meta = bruteforce.enumerate_metastable(inst)
    for s in meta:
        direct = not any(t < s for t in meta)
        assert bool(is_minimal_metastable(inst, s)) == direct
        m = minimize(inst, s)
        assert m <= s and is_minimal_metastable(inst, m)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_stable_is_minimal_under_linear_equipment(seed):
    inst = linearize_equipment(gen(seed))
    for s in enumerate_stable(inst):
        assert is_minimal_metastable(inst, s)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_linear_extensions_and_perturbation(seed):
    inst = weak_gen(seed)
    rng = random.Random(seed)
    u = individual_utilities(inst)
    ext = inst.with_equipment(
        {a: Linear(sorted(u[a], key=lambda c: (-u[a][c], rng.random()))) for a in inst.agents}
    )
    for s in bruteforce.enumerate_metastable(ext):
        assert is_metastable(inst, s)
    for s in bruteforce.enumerate_metastable(inst):
        if is_minimal_metastable(inst, s):
            out = perturb_ties(inst, s)
            assert all(isinstance(f, Linear) for f in out.equipment.values())
            assert is_metastable(out, s)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_minimal_systems_on_graphs_are_dandelions(seed):
    inst = binary_linear(seed)
    for s in bruteforce.enumerate_metastable(inst):
        if is_minimal_metastable(inst, s):
            for comp in classify_components(inst, s):
                assert comp.shape in ("isolated", "star")
