"""Reducing path-independent equipment to weak orders by splitting agents.

An agent whose choice function is a union of simpler ones is replaced by
one sub-agent per part; each of its contracts is copied once per sub-agent.
Everybody else sees the copies as interchangeable, so their choice
functions are pulled back along the copy map.  Stable systems of the split
instance project onto stable systems of the original, and every original
stable system lifts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import choice
from .choice import Linear, Weak
from .core import Contract, Instance
from .errors import InputError, PreconditionError
from .stability import is_stable


@dataclass(frozen=True)
class SplitStep:
    agent: str
    parts: tuple
    new_agents: tuple
    copies: Mapping  # original contract -> tuple of copies, one per part
    before: Instance = field(repr=False, compare=False)
    after: Instance = field(repr=False, compare=False)


@dataclass(frozen=True)
class SplitMap:
    agent_map: Mapping
    contract_map: Mapping
    steps: tuple = ()

    @classmethod
    def identity(cls, instance: Instance) -> "SplitMap":
        return cls({a: a for a in instance.agents}, {c: c for c in instance.contract_ids}, ())

    def then(self, later: "SplitMap") -> "SplitMap":
        """Compose with a map from a further-split instance onto this one's domain."""
        return SplitMap(
            {a: self.agent_map[b] for a, b in later.agent_map.items()},
            {c: self.contract_map[d] for c, d in later.contract_map.items()},
            self.steps + later.steps,
        )


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def split_agent(instance: Instance, agent0: str, parts, cap: int = choice.DEFAULT_CAP):
    """Split ``agent0`` into one sub-agent per entry of ``parts``.

    ``parts`` are choice functions on C(agent0) whose union must equal the
    agent's own choice function.  Returns ``(new_instance, split_map)``.
    """
    parts = tuple(parts)
    own = instance.contracts_of(agent0)
    f0 = instance.equipment[agent0]
    if not parts:
        raise InputError("need at least one part")
    for p in parts:
        if p.ground != own:
            raise InputError(f"part does not cover exactly the contracts of {agent0!r}")
    choice.check_cap(own, cap)
    for menu in choice.powerset(own):
        picked = [p._pick(menu) for p in parts]
        if menu and not all(picked):
            raise InputError(f"part is empty on menu {sorted(menu)}")
        if frozenset().union(*picked) != f0._pick(menu):
            raise InputError(f"union of parts differs from the choice of {agent0!r} on menu {sorted(menu)}")

    taken_agents = set(instance.agents)
    new_agents = []
    for k in range(1, len(parts) + 1):
        name = _fresh(f"{agent0}#{k}", taken_agents)
        taken_agents.add(name)
        new_agents.append(name)
    taken_ids = set(instance.contract_ids)
    copies = {}
    contract_map = {}
    contracts = []
    for c in instance.contracts:
        if c.id not in own:
            contracts.append(c)
            contract_map[c.id] = c.id
            continue
        row = []
        for k, sub in enumerate(new_agents, start=1):
            cid = _fresh(f"{c.id}#{k}", taken_ids)
            taken_ids.add(cid)
            row.append(cid)
            contract_map[cid] = c.id
            contracts.append(Contract(cid, (c.participants - {agent0}) | {sub}, c.autarkic_dummy))
        copies[c.id] = tuple(row)

    equipment = {}
    for k, sub in enumerate(new_agents):
        equipment[sub] = choice.relabel(parts[k], {c: copies[c][k] for c in own})
    for j in instance.agents:
        if j == agent0:
            continue
        f_j = instance.equipment[j]
        mine = instance.contracts_of(j)
        if not mine & own:
            equipment[j] = f_j
            continue
        projection = {}
        for c in mine:
            for cc in copies.get(c, (c,)):
                projection[cc] = c
        equipment[j] = choice.pullback(projection, f_j, cap=cap)

    agents = [a for a in instance.agents if a != agent0] + new_agents
    after = Instance.build(agents, contracts, equipment)
    agent_map = {a: a for a in instance.agents if a != agent0}
    agent_map.update({sub: agent0 for sub in new_agents})
    step = SplitStep(agent0, parts, tuple(new_agents), copies, instance, after)
    return after, SplitMap(agent_map, contract_map, (step,))


def reduce_to_weak_orders(instance: Instance, cap: int = choice.DEFAULT_CAP):
    """Split agents until every agent is equipped with a linear or weak order.

    Agents are handled in id order; each non-weak choice function is
    decomposed into linear orders and split along that decomposition.
    Returns ``(reduced_instance, split_map)`` with ``split_map`` going from
    the reduced instance back to ``instance``.
    """
    current = instance
    smap = SplitMap.identity(instance)
    while True:
        equipment = dict(current.equipment)
        target = None
        for a in current.agents:
            spec = equipment[a]
            if isinstance(spec, (Linear, Weak)):
                continue
            w = choice.weak_equivalent(spec, cap)
            if w is not None:
                equipment[a] = w
            elif target is None:
                target = a
        current = current.with_equipment(equipment)
        if target is None:
            return current, smap
        parts = choice.am_decompose(current.equipment[target], cap)
        current, step_map = split_agent(current, target, parts, cap)
        smap = smap.then(step_map)


def project_system(smap: SplitMap, system) -> frozenset:
    """Image of a system of the split instance under the contract map."""
    return frozenset(smap.contract_map[c] for c in system)


def lift_stable(step: SplitStep, system) -> frozenset:
    """Canonical stable preimage of a stable system across one split.

    Contracts avoiding the split agent are kept; sub-agent k receives the
    copies of what part k picks from the agent's share of the system.
    """
    system = step.before.system(system)
    if not is_stable(step.before, system):
        raise PreconditionError("only stable systems can be lifted")
    own = step.before.contracts_of(step.agent)
    share = system & own
    out = set(system - own)
    for k, part in enumerate(step.parts):
        out.update(step.copies[c][k] for c in part._pick(share))
    return frozenset(out)


def lift_through(smap: SplitMap, system) -> frozenset:
    for step in smap.steps:
        system = lift_stable(step, system)
    return frozenset(system)
