"""Domination, meta-stable systems and how to construct them.

A contract ``d`` dominates a system ``S`` when every participant either has
nothing in ``S`` or holds some contract it would give up for ``d`` in a
head-to-head choice.  A system nobody can dominate is meta-stable.  Such a
system always exists for non-empty-valued path-independent equipment; it is
built here through a compromise vector found by finite search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from . import choice
from .choice import Linear, Weak
from .core import Instance, augment_autarkic, individual_utilities, prune_null_contracts
from .errors import InputError, PreconditionError, TheoremViolation

EMPTY = None  # per-agent marker in a DominationWitness: the agent holds nothing


@dataclass(frozen=True)
class DominationWitness:
    dominator: str
    per_agent: tuple  # ((agent, beaten contract or EMPTY), ...)

    def as_dict(self) -> dict:
        return {a: ("empty" if w is EMPTY else w) for a, w in self.per_agent}


@dataclass(frozen=True)
class MetaVerdict:
    holds: bool
    witness: Optional[DominationWitness] = None

    def __bool__(self):
        return self.holds


def dominates(instance: Instance, d: str, system, exclude_members: bool = False) -> Optional[DominationWitness]:
    """Witness that ``d`` dominates ``system``, or None.

    ``exclude_members=True`` ignores contracts already in the system.
    """
    return _dominates(instance, d, instance.system(system), exclude_members)


def _dominates(instance, d, system, exclude_members):
    if exclude_members and d in system:
        return None
    per_agent = []
    for a in sorted(instance.participants(d)):
        held = system & instance.contracts_of(a)
        if not held:
            per_agent.append((a, EMPTY))
            continue
        beaten = sorted(s for s in held if s not in instance.pick(a, (s, d)))
        if not beaten:
            return None
        per_agent.append((a, beaten[0]))
    return DominationWitness(d, tuple(per_agent))


def is_metastable(instance: Instance, system, exclude_members: bool = False) -> MetaVerdict:
    system = instance.system(system)
    for d in instance.contract_ids:
        w = _dominates(instance, d, system, exclude_members)
        if w is not None:
            return MetaVerdict(False, w)
    return MetaVerdict(True)


def linearize_equipment(instance: Instance, cap: int = choice.DEFAULT_CAP) -> Instance:
    """Replace each choice function by a linear order respecting it."""
    equipment = {}
    for a in instance.agents:
        spec = instance.equipment[a]
        equipment[a] = spec if isinstance(spec, Linear) else choice.respecting_order(spec, cap=cap)
    return instance.with_equipment(equipment)


# -- compromise vectors -------------------------------------------------------


@dataclass(frozen=True)
class CompromiseVector:
    values: Mapping

    def as_tuple(self, agents) -> tuple:
        return tuple(self.values[a] for a in agents)


def _utility_table(instance: Instance):
    u = individual_utilities(instance)
    return {c.id: tuple((a, u[a][c.id]) for a in sorted(c.participants)) for c in instance.contracts}


def _require_autarkic(instance: Instance):
    for a in instance.agents:
        if not any(instance.contract[c].autarkic for c in instance.contracts_of(a)):
            raise PreconditionError(f"agent {a!r} has no autarkic contract; run augment_autarkic first")


def compromise_violations(instance: Instance, x: Mapping) -> list:
    """Why ``x`` fails to be a compromise (empty list when it is one).

    Property 1: no contract gives every participant strictly more than x.
    Property 2: every agent is in some contract giving all its participants at least x.
    """
    table = _utility_table(instance)
    out = []
    for cid, row in table.items():
        if all(u > x[a] for a, u in row):
            out.append(f"property 1: contract {cid!r} beats x strictly for all participants")
    for a in instance.agents:
        if not any(all(x[j] <= u for j, u in table[c]) for c in sorted(instance.contracts_of(a))):
            out.append(f"property 2: no contract of agent {a!r} meets x")
    return out


def iter_compromises(instance: Instance) -> Iterator[CompromiseVector]:
    """Compromise vectors on the utility grid, in descending lexicographic order.

    Restricting to ``x(i) ∈ {u_i(c) : c ∈ C(i)}`` loses nothing: from any real
    compromise x, taking x'(i) = min of u_i over the contracts of i in its
    threshold system gives a grid point that is again a compromise with the
    same threshold system.
    """
    _require_autarkic(instance)
    util = individual_utilities(instance)
    table = _utility_table(instance)
    agents = instance.agents
    idx = {a: k for k, a in enumerate(agents)}
    rows = [tuple((idx[a], u) for a, u in table[c.id]) for c in instance.contracts]
    own = [[tuple((idx[j], u) for j, u in table[c]) for c in sorted(instance.contracts_of(a))] for a in agents]
    grids = [sorted({util[a][c] for c in instance.contracts_of(a)}, reverse=True) for a in agents]
    for x in itertools.product(*grids):
        if any(all(u > x[k] for k, u in row) for row in rows):
            continue
        if all(any(all(x[k] <= u for k, u in row) for row in mine) for mine in own):
            yield CompromiseVector(dict(zip(agents, x)))


def find_compromise(instance: Instance) -> CompromiseVector:
    """First compromise vector in descending lexicographic grid order."""
    for x in iter_compromises(instance):
        return x
    raise TheoremViolation("no compromise vector on the utility grid")


def threshold_system(instance: Instance, x: Mapping) -> frozenset:
    table = _utility_table(instance)
    return frozenset(cid for cid, row in table.items() if all(x[a] <= u for a, u in row))


def system_from_compromise(instance: Instance, x) -> frozenset:
    """Contracts giving every participant at least its compromise level."""
    values = x.values if isinstance(x, CompromiseVector) else x
    problems = compromise_violations(instance, values)
    if problems:
        raise InputError("not a compromise vector: " + "; ".join(problems))
    return threshold_system(instance, values)


@dataclass(frozen=True)
class MetastableSolution:
    system: frozenset
    compromise: CompromiseVector
    working: Instance  # linearized, augmented instance the compromise lives on
    pruned: frozenset = field(default=frozenset())


def solve_metastable_detailed(instance: Instance, cap: int = choice.DEFAULT_CAP) -> MetastableSolution:
    """Run the full construction and keep the intermediate objects."""
    base, pruned = prune_null_contracts(instance, cap)
    working = augment_autarkic(linearize_equipment(base, cap))
    x = find_compromise(working)
    full = system_from_compromise(working, x)
    system = frozenset(c for c in full if not working.contract[c].autarkic_dummy)
    if not is_metastable(base, system):
        raise TheoremViolation(f"constructed system {sorted(system)} is dominated")
    return MetastableSolution(system, x, working, pruned)


def solve_metastable(instance: Instance, cap: int = choice.DEFAULT_CAP) -> frozenset:
    return solve_metastable_detailed(instance, cap).system


# -- minimality ---------------------------------------------------------------


def _removable(instance: Instance, system: frozenset) -> list:
    """Contracts of ``system`` none of whose participants is monogamous, by id."""
    counts = {a: len(system & instance.contracts_of(a)) for a in instance.agents}
    return sorted(s for s in system if all(counts[a] > 1 for a in instance.participants(s)))


def is_minimal_metastable(instance: Instance, system) -> MetaVerdict:
    """Minimal iff every contract has a participant holding nothing else.

    The witness (when not minimal) names a removable contract as ``dominator``.
    """
    system = instance.system(system)
    _require_autarkic(instance)
    if not is_metastable(instance, system):
        raise PreconditionError("system is not meta-stable")
    spare = _removable(instance, system)
    if spare:
        return MetaVerdict(False, DominationWitness(spare[0], ()))
    return MetaVerdict(True)


def minimize(instance: Instance, system) -> frozenset:
    """Drop contracts without a monogamous participant, least id first, until none is left."""
    system = instance.system(system)
    if not is_metastable(instance, system):
        raise PreconditionError("system is not meta-stable")
    while True:
        spare = _removable(instance, system)
        if not spare:
            return system
        system = system - {spare[0]}
        if not is_metastable(instance, system):
            raise TheoremViolation(f"removing {spare[0]!r} broke meta-stability")


@dataclass(frozen=True)
class PerturbationPlan:
    anchor: Optional[str]
    raised: frozenset
    lowered: frozenset


def perturbation_plan(instance: Instance, system) -> dict:
    """Per agent: the marginal contract kept fixed, and the marginal ties pushed up or down."""
    system = instance.system(system)
    u = individual_utilities(instance)
    plans = {}
    for a in instance.agents:
        held = system & instance.contracts_of(a)
        if not held:
            plans[a] = PerturbationPlan(None, frozenset(), frozenset())
            continue
        level = min(u[a][c] for c in held)
        marginal = {c for c in instance.contracts_of(a) if u[a][c] == level}
        plus = marginal & system
        anchor = min(plus)
        plans[a] = PerturbationPlan(anchor, frozenset(plus - {anchor}), frozenset(marginal - plus))
    return plans


def perturb_ties(instance: Instance, system) -> Instance:
    """Linear extension of weak-order equipment under which a minimal
    meta-stable system stays meta-stable.

    Utilities are doubled; raised contracts get +1, lowered ones -1; any tie
    left over is broken by least id.
    """
    system = instance.system(system)
    for a in instance.agents:
        if not isinstance(instance.equipment[a], (Linear, Weak)):
            raise PreconditionError(f"agent {a!r} is not equipped with a weak order")
    if not is_minimal_metastable(instance, system):
        raise PreconditionError("system is not minimal meta-stable")
    u = individual_utilities(instance)
    plans = perturbation_plan(instance, system)
    equipment = {}
    for a in instance.agents:
        plan = plans[a]
        score = {}
        for c, v in u[a].items():
            score[c] = 2 * v + (1 if c in plan.raised else -1 if c in plan.lowered else 0)
        equipment[a] = Linear(sorted(score, key=lambda c: (-score[c], c)))
    out = instance.with_equipment(equipment)
    if not is_metastable(out, system):
        raise TheoremViolation("perturbed equipment dominates the minimal system")
    return out


# -- shape of minimal systems on graphs ---------------------------------------


@dataclass(frozen=True)
class Component:
    shape: str  # "isolated", "star" or "other"
    agents: tuple
    contracts: tuple
    center: Optional[str] = None
    leaves: tuple = ()


def classify_components(instance: Instance, system) -> list:
    """Split the binary part of ``system`` into connected components and name their shapes."""
    system = instance.system(system)
    for c in instance.contracts:
        if len(c.participants) > 2:
            raise InputError(f"contract {c.id!r} has {len(c.participants)} participants; graphs only")
    degree = {a: len(system & instance.contracts_of(a)) for a in instance.agents}
    edges = [instance.contract[c] for c in sorted(system) if len(instance.contract[c].participants) == 2]
    adj = {a: set() for a in instance.agents}
    for e in edges:
        x, y = sorted(e.participants)
        adj[x].add(y)
        adj[y].add(x)
    seen = set()
    out = []
    for start in instance.agents:
        if start in seen:
            continue
        comp, stack = set(), [start]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(adj[v] - comp)
        seen |= comp
        members = tuple(sorted(comp))
        cedges = tuple(e.id for e in edges if e.participants <= comp)
        if len(comp) == 1:
            out.append(Component("isolated", members, cedges))
            continue
        # a center touches every edge; everyone else holds exactly one contract
        best = None
        for v in sorted(comp, key=lambda v: (-degree[v], v)):
            if all(v in instance.participants(e) for e in cedges) and all(
                degree[w] == 1 for w in comp if w != v
            ):
                best = v
                break
        if best is None:
            out.append(Component("other", members, cedges))
        else:
            leaves = tuple(w for w in members if w != best)
            out.append(Component("star", members, cedges, best, leaves))
    return out
