"""Exhaustive oracles and a seeded instance generator.

The oracles here are written from the definitions, independently of the
stability and meta-stability modules, and are only meant for small
instances.  The single shared primitive is ``choice.choose``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .choice import Linear, Quota, Union, Weak, choose
from .core import Instance
from .errors import InputError, ResourceError

ORACLE_CAP = 16
GRID_CAP = 2_000_000


def _members(ids, mask):
    return frozenset(c for k, c in enumerate(ids) if mask >> k & 1)


def _canonical(systems):
    return sorted(systems, key=lambda s: (len(s), sorted(s)))


def _holdings(instance, system):
    held = {a: set() for a in instance.agents}
    for c in system:
        for a in instance.contract[c].participants:
            held[a].add(c)
    return held


def enumerate_metastable(instance: Instance, cap: int = ORACLE_CAP) -> list:
    """Every undominated system, by a full 2^|C| scan."""
    ids = list(instance.contract_ids)
    if len(ids) > cap:
        raise ResourceError(f"{len(ids)} contracts exceeds oracle cap {cap}")
    found = []
    for mask in range(1 << len(ids)):
        system = _members(ids, mask)
        held = _holdings(instance, system)
        dominated = False
        for d in ids:
            tempted = True
            for i in instance.contract[d].participants:
                f = instance.equipment[i]
                if held[i] and not any(a != d and choose(f, {a, d}) == {d} for a in held[i]):
                    tempted = False
                    break
            if tempted:
                dominated = True
                break
        if not dominated:
            found.append(system)
    return _canonical(found)


def enumerate_stable_oracle(instance: Instance, cap: int = ORACLE_CAP) -> list:
    """Every stable system, straight from the two defining conditions."""
    ids = list(instance.contract_ids)
    if len(ids) > cap:
        raise ResourceError(f"{len(ids)} contracts exceeds oracle cap {cap}")
    found = []
    for mask in range(1 << len(ids)):
        system = _members(ids, mask)
        held = _holdings(instance, system)
        if any(choose(instance.equipment[a], held[a]) != held[a] for a in instance.agents):
            continue
        blocked = any(
            all(b in choose(instance.equipment[i], held[i] | {b}) for i in instance.contract[b].participants)
            for b in ids
            if b not in system
        )
        if not blocked:
            found.append(system)
    return _canonical(found)


def _rank_utilities(spec):
    if isinstance(spec, Linear):
        return {c: len(spec.ranking) - 1 - k for k, c in enumerate(spec.ranking)}
    if isinstance(spec, Weak):
        return {c: len(spec.tiers) - 1 - k for k, t in enumerate(spec.tiers) for c in t}
    raise InputError("compromise oracle needs linear or weak equipment")


def enumerate_compromises(instance: Instance, cap: int = GRID_CAP) -> list:
    """All compromise vectors on the utility grid, descending lexicographic.

    Returned as tuples over ``instance.agents``.
    """
    agents = list(instance.agents)
    util = {a: _rank_utilities(instance.equipment[a]) for a in agents}
    grids = [sorted(set(util[a].values()), reverse=True) for a in agents]
    size = int(np.prod([len(g) for g in grids])) if grids else 1
    if size > cap:
        raise ResourceError(f"grid of {size} points exceeds cap {cap}")
    if any(not g for g in grids):
        return []
    X = np.array(list(itertools.product(*grids)), dtype=np.int64).reshape(size, len(agents))
    col = {a: k for k, a in enumerate(agents)}
    ok = np.ones(size, dtype=bool)
    for c in instance.contracts:
        some_le = np.zeros(size, dtype=bool)
        for a in c.participants:
            some_le |= util[a][c.id] <= X[:, col[a]]
        ok &= some_le
    for a in agents:
        covered = np.zeros(size, dtype=bool)
        for cid in instance.contracts_of(a):
            meets = np.ones(size, dtype=bool)
            for j in instance.contract[cid].participants:
                meets &= X[:, col[j]] <= util[j][cid]
            covered |= meets
        ok &= covered
    return [tuple(int(v) for v in row) for row in X[ok]]


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 1
    agents: tuple = (2, 4)
    contracts: tuple = (2, 7)
    max_participants: int = 3
    mix: dict = field(default_factory=lambda: {"linear": 0.4, "weak": 0.2, "quota": 0.2, "union": 0.2})
    autarkic: bool = True
    union_agents: int = 0  # this many lowest-id agents get a union of exactly two linear orders
    agent_cap: int = 5
    contract_cap: int = 8


def _random_spec(rng: random.Random, ground, kind):
    order = sorted(ground)
    rng.shuffle(order)
    if kind == "linear":
        return Linear(order)
    if kind == "weak":
        tiers, cur = [], []
        for c in order:
            if cur and rng.random() < 0.5:
                tiers.append(cur)
                cur = []
            cur.append(c)
        if cur:
            tiers.append(cur)
        return Weak(tiers)
    if kind == "quota":
        return Quota(order, rng.randint(1, max(1, len(order))))
    if kind == "union":
        parts = [order]
        for _ in range(rng.randint(1, 2)):
            other = sorted(ground)
            rng.shuffle(other)
            parts.append(other)
        return Union(parts)
    raise InputError(f"unknown equipment kind {kind!r}")


def generate(config: GeneratorConfig = GeneratorConfig()) -> Instance:
    """Deterministic random instance; the same config always yields the same instance."""
    lo_a, hi_a = config.agents
    lo_c, hi_c = config.contracts
    if not 1 <= lo_a <= hi_a <= config.agent_cap:
        raise InputError(f"agent range {config.agents} outside 1..{config.agent_cap}")
    if not 0 <= lo_c <= hi_c <= config.contract_cap:
        raise InputError(f"contract range {config.contracts} outside 0..{config.contract_cap}")
    if config.max_participants < 1:
        raise InputError("max_participants must be positive")
    if config.autarkic and hi_c < lo_a:
        raise InputError("cannot give every agent an autarkic contract within the contract range")
    kinds = [k for k, w in config.mix.items() if w > 0]
    if not kinds:
        raise InputError("equipment mix is empty")

    rng = random.Random(config.seed)
    n_agents = rng.randint(lo_a, min(hi_a, hi_c) if config.autarkic else hi_a)
    agents = [str(k) for k in range(1, n_agents + 1)]
    n_contracts = rng.randint(max(lo_c, n_agents if config.autarkic else 0), hi_c)
    contracts = []
    if config.autarkic:
        contracts += [(f"a{a}", (a,)) for a in agents]
    top = min(config.max_participants, n_agents)
    for k in range(1, n_contracts - len(contracts) + 1):
        size = rng.randint(2, top) if top >= 2 else 1
        contracts.append((f"c{k}", tuple(rng.sample(agents, size))))

    weights = [config.mix[k] for k in kinds]
    equipment = {}
    for n, a in enumerate(agents):
        ground = [cid for cid, parts in contracts if a in parts]
        if n < config.union_agents:
            order = sorted(ground)
            rng.shuffle(order)
            other = sorted(ground)
            rng.shuffle(other)
            equipment[a] = Union([order, other])
        else:
            equipment[a] = _random_spec(rng, ground, rng.choices(kinds, weights)[0])
    return Instance.build(agents, contracts, equipment)
