"""Stable contract systems: individual rationality, blocking, exhaustive enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .choice import blair_leq
from .core import Instance
from .errors import PreconditionError, ResourceError

DEFAULT_CAP = 20


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    s0_violations: tuple = ()
    blocking: Optional[str] = None

    def __bool__(self):
        return self.stable


@dataclass(frozen=True)
class IRVerdict:
    holds: bool
    witnesses: tuple = field(default=())

    def __bool__(self):
        return self.holds


def subsets_by_size(items) -> Iterable[frozenset]:
    """Subsets in increasing size, lexicographic within a size."""
    items = sorted(items)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


def sort_systems(systems) -> list:
    return sorted(systems, key=lambda s: (len(s), sorted(s)))


def is_individually_rational(instance: Instance, system) -> IRVerdict:
    """Every agent keeps all of its contracts: ``f_i(S(i)) = S(i)``.

    Witnesses are ``(agent, f_i(S(i)))`` for each agent that would drop something.
    """
    system = instance.system(system)
    bad = []
    for a in instance.agents:
        own = system & instance.contracts_of(a)
        kept = instance.pick(a, own)
        if kept != own:
            bad.append((a, kept))
    return IRVerdict(not bad, tuple(bad))


def blocks(instance: Instance, system: frozenset, b: str) -> bool:
    if b in system:
        return False
    for a in instance.participants(b):
        own = system & instance.contracts_of(a)
        if b not in instance.pick(a, own | {b}):
            return False
    return True


def find_blocking(instance: Instance, system) -> Optional[str]:
    """Least-id contract outside ``system`` chosen by all of its participants, if any."""
    system = instance.system(system)
    for b in instance.contract_ids:
        if blocks(instance, system, b):
            return b
    return None


def is_stable(instance: Instance, system) -> StabilityVerdict:
    ir = is_individually_rational(instance, system)
    b = find_blocking(instance, system)
    return StabilityVerdict(ir.holds and b is None, ir.witnesses, b)


def _ir_systems(instance: Instance):
    # Depth-first over contracts in id order; an agent is checked as soon as
    # all of its contracts are decided.
    ids = instance.contract_ids
    last_seen = {}
    for k, cid in enumerate(ids):
        for a in instance.participants(cid):
            last_seen[a] = k
    closing = [[] for _ in ids]
    for a, k in last_seen.items():
        closing[k].append(a)

    def rec(k, chosen):
        if k == len(ids):
            yield frozenset(chosen)
            return
        for take in (False, True):
            if take:
                chosen.append(ids[k])
            sys_ = frozenset(chosen)
            ok = True
            for a in closing[k]:
                own = sys_ & instance.contracts_of(a)
                if instance.pick(a, own) != own:
                    ok = False
                    break
            if ok:
                yield from rec(k + 1, chosen)
            if take:
                chosen.pop()

    yield from rec(0, [])


def enumerate_individually_rational(instance: Instance, cap: int = DEFAULT_CAP) -> list:
    if len(instance.contracts) > cap:
        raise ResourceError(f"{len(instance.contracts)} contracts exceeds enumeration cap {cap}")
    return sort_systems(_ir_systems(instance))


def enumerate_stable(instance: Instance, cap: int = DEFAULT_CAP) -> list:
    """All stable systems, smallest first."""
    return [s for s in enumerate_individually_rational(instance, cap) if find_blocking(instance, s) is None]


def check_blair_rigidity(instance: Instance, stable, other) -> bool:
    """Truth value of: if every agent weakly prefers ``other`` to ``stable``, they coincide."""
    stable = instance.system(stable)
    other = instance.system(other)
    if not is_stable(instance, stable):
        raise PreconditionError("first system must be stable")
    if not is_individually_rational(instance, other):
        raise PreconditionError("second system must be individually rational")
    premise = all(
        blair_leq(instance.equipment[a], stable & instance.contracts_of(a), other & instance.contracts_of(a))
        for a in instance.agents
    )
    return (not premise) or stable == other


def find_blocking_set(instance: Instance, system, cap: int = DEFAULT_CAP) -> Optional[frozenset]:
    """Smallest (then lexicographically least) nonempty set of outside contracts
    that every participant would pick in full when offered it along with ``S(i)``.
    """
    system = instance.system(system)
    if len(instance.contracts) > cap:
        raise ResourceError(f"{len(instance.contracts)} contracts exceeds enumeration cap {cap}")
    outside = [c for c in instance.contract_ids if c not in system]
    for cand in subsets_by_size(outside):
        if not cand:
            continue
        ok = True
        touched = set()
        for b in cand:
            touched |= instance.participants(b)
        for a in sorted(touched):
            mine = instance.contracts_of(a)
            offer = cand & mine
            if not offer <= instance.pick(a, (system & mine) | offer):
                ok = False
                break
        if ok:
            return cand
    return None
