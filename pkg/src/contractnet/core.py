"""Agents, contracts and equipped hypergraphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from . import choice
from .choice import ChoiceSpec, Linear, Weak
from .errors import InputError, PreconditionError


@dataclass(frozen=True)
class Contract:
    id: str
    participants: frozenset
    autarkic_dummy: bool = False

    def __post_init__(self):
        object.__setattr__(self, "participants", frozenset(self.participants))

    @property
    def autarkic(self) -> bool:
        return len(self.participants) == 1


@dataclass(frozen=True, eq=True)
class Instance:
    """An equipped hypergraph: agents, contracts and one choice function per agent.

    Build with :meth:`build`, which sorts ids so that every scan over the
    instance is reproducible.  Instances are never mutated; the helpers in
    this package return new ones.
    """

    agents: tuple
    contracts: tuple
    equipment: Mapping = field(default_factory=dict)

    @classmethod
    def build(cls, agents: Iterable[str], contracts: Iterable, equipment: Mapping[str, ChoiceSpec]):
        cs = []
        for c in contracts:
            if not isinstance(c, Contract):
                cid, parts = c
                c = Contract(cid, frozenset(parts))
            cs.append(c)
        return cls(
            tuple(sorted(agents)),
            tuple(sorted(cs, key=lambda c: c.id)),
            {a: equipment[a] for a in sorted(equipment)},
        )

    @cached_property
    def contract(self) -> dict:
        return {c.id: c for c in self.contracts}

    @cached_property
    def contract_ids(self) -> tuple:
        return tuple(c.id for c in self.contracts)

    @cached_property
    def _incidence(self) -> dict:
        inc = {a: [] for a in self.agents}
        for c in self.contracts:
            for a in c.participants:
                inc.setdefault(a, []).append(c.id)
        return {a: frozenset(v) for a, v in inc.items()}

    def contracts_of(self, agent: str) -> frozenset:
        """C(i): every contract the agent takes part in."""
        if agent not in self._incidence:
            raise InputError(f"unknown agent {agent!r}")
        return self._incidence[agent]

    def participants(self, cid: str) -> frozenset:
        try:
            return self.contract[cid].participants
        except KeyError:
            raise InputError(f"unknown contract {cid!r}") from None

    def pick(self, agent: str, menu) -> frozenset:
        """Agent's choice from ``menu`` (no membership check)."""
        return self.equipment[agent]._pick(frozenset(menu))

    def system(self, members: Iterable[str]) -> frozenset:
        """Validate ids and return a contract system."""
        members = frozenset(members)
        unknown = members - set(self.contract)
        if unknown:
            raise InputError(f"unknown contracts in system: {sorted(unknown)}")
        return members

    def with_equipment(self, equipment: Mapping[str, ChoiceSpec]) -> "Instance":
        return Instance(self.agents, self.contracts, {a: equipment[a] for a in sorted(equipment)})


def restrict(instance: Instance, system: Iterable[str], agent: str) -> frozenset:
    """S(i): the members of ``system`` in which ``agent`` participates."""
    return frozenset(system) & instance.contracts_of(agent)


def validate(instance: Instance) -> list:
    """Return a list of human-readable violations; empty when the instance is well formed."""
    out = []
    seen = set()
    for a in instance.agents:
        if not a:
            out.append("agent '': empty agent id")
        if a in seen:
            out.append(f"agent {a!r}: duplicate agent id")
        seen.add(a)
    seen_c = set()
    for c in instance.contracts:
        if not c.id:
            out.append("contract '': empty contract id")
        if c.id in seen_c:
            out.append(f"contract {c.id!r}: duplicate contract id")
        seen_c.add(c.id)
        if not c.participants:
            out.append(f"contract {c.id!r}: empty participant set")
        for p in sorted(c.participants - seen):
            out.append(f"contract {c.id!r}: unknown participant {p!r}")
    for a in sorted(set(instance.equipment) - seen):
        out.append(f"agent {a!r}: equipment given for unknown agent")
    for a in instance.agents:
        spec = instance.equipment.get(a)
        if spec is None:
            out.append(f"agent {a!r}: no equipment")
            continue
        expected = frozenset(c.id for c in instance.contracts if a in c.participants)
        if spec.ground != expected:
            missing = sorted(expected - spec.ground)
            extra = sorted(spec.ground - expected)
            out.append(f"agent {a!r}: equipment/contract mismatch (missing {missing}, extra {extra})")
    return out


def _dummy_id(instance: Instance, agent: str) -> str:
    cid = f"dummy:{agent}"
    while cid in instance.contract:
        cid += "'"
    return cid


def _append_worst(spec: ChoiceSpec, cid: str) -> ChoiceSpec:
    if isinstance(spec, Linear):
        return Linear(spec.ranking + (cid,))
    if isinstance(spec, Weak):
        return Weak(spec.tiers + (frozenset((cid,)),))
    raise InputError(f"autarkic augmentation needs linear or weak equipment, got {type(spec).__name__}")


def augment_autarkic(instance: Instance, add_always: bool = False) -> Instance:
    """Give agents a dummy autarkic contract ranked below everything they have.

    With ``add_always=False`` only agents that own no autarkic contract get
    one, so the operation is idempotent.  With ``add_always=True`` every
    agent gets a fresh dummy.
    """
    contracts = list(instance.contracts)
    equipment = dict(instance.equipment)
    for a in instance.agents:
        spec = equipment[a]
        if not isinstance(spec, (Linear, Weak)):
            raise InputError(
                f"agent {a!r}: autarkic augmentation needs linear or weak equipment, got {type(spec).__name__}"
            )
        owns = any(instance.contract[c].autarkic for c in instance.contracts_of(a))
        if owns and not add_always:
            continue
        cid = _dummy_id(instance, a)
        contracts.append(Contract(cid, frozenset((a,)), autarkic_dummy=True))
        equipment[a] = _append_worst(spec, cid)
    return Instance.build(instance.agents, contracts, equipment)


def drop_contracts(instance: Instance, doomed: Iterable[str]) -> Instance:
    """Delete contracts and restrict every agent's choice function accordingly."""
    doomed = frozenset(doomed)
    if not doomed:
        return instance
    keep = [c for c in instance.contracts if c.id not in doomed]
    equipment = {}
    for a, spec in instance.equipment.items():
        ground = spec.ground - doomed
        if isinstance(spec, Linear):
            equipment[a] = Linear([c for c in spec.ranking if c in ground])
        elif isinstance(spec, Weak):
            equipment[a] = Weak([t - doomed for t in spec.tiers if t - doomed])
        elif isinstance(spec, choice.Quota):
            equipment[a] = choice.Quota([c for c in spec.ranking if c in ground], spec.b)
        elif isinstance(spec, choice.Union):
            equipment[a] = choice.Union([[c for c in p.ranking if c in ground] for p in spec.parts])
        else:
            equipment[a] = choice.Table(ground, {m: v for m, v in spec.entries.items() if m <= ground})
    return Instance.build(instance.agents, keep, equipment)


def prune_null_contracts(instance: Instance, cap: int = choice.DEFAULT_CAP) -> tuple:
    """Remove every contract lying in some participant's largest null set.

    Null elements never influence a Plott choice, so removing them leaves all
    choices on the remaining contracts unchanged.  Returns ``(instance, removed)``.
    """
    removed = set()
    for a in instance.agents:
        removed |= choice.largest_null_set(instance.equipment[a], cap)
    removed = frozenset(removed)
    return drop_contracts(instance, removed), removed


def individual_utilities(instance: Instance) -> dict:
    """Per-agent utility dicts; equipment must be Linear or Weak."""
    try:
        return {a: choice.utilities(instance.equipment[a]) for a in instance.agents}
    except InputError as exc:
        raise PreconditionError(str(exc)) from None
