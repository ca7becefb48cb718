"""Choice functions over finite sets of contract ids.

Five representations are supported: ``Linear``, ``Weak``, ``Quota``,
``Union`` (of linear orders) and an explicit ``Table``.  Menus are
frozensets of string ids.  Everything that needs to look at every menu
(path independence, decomposition, ...) refuses to run when the ground set
is larger than ``cap``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional, Union as TUnion

from .errors import InputError, PreconditionError, ResourceError

DEFAULT_CAP = 16

Menu = frozenset


def powerset(ground: Iterable[str]) -> Iterator[frozenset]:
    """All subsets of ``ground``, by size and then lexicographically."""
    items = sorted(ground)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


def check_cap(ground, cap: int) -> None:
    if len(ground) > cap:
        raise ResourceError(
            f"ground set has {len(ground)} elements, exhaustive scan capped at {cap}"
        )


@dataclass(frozen=True)
class Linear:
    """Linear order; ``ranking`` lists elements best first."""

    ranking: tuple
    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranking = tuple(self.ranking)
        if len(set(ranking)) != len(ranking):
            raise InputError(f"ranking lists an element twice: {list(ranking)}")
        object.__setattr__(self, "ranking", ranking)
        object.__setattr__(self, "_pos", {c: k for k, c in enumerate(ranking)})

    @property
    def ground(self) -> frozenset:
        return frozenset(self.ranking)

    def top(self, menu) -> Optional[str]:
        if not menu:
            return None
        return min(menu, key=self._pos.__getitem__)

    def _pick(self, menu) -> frozenset:
        if not menu:
            return frozenset()
        return frozenset((self.top(menu),))


@dataclass(frozen=True)
class Weak:
    """Weak order given as indifference tiers, best tier first."""

    tiers: tuple
    _level: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tiers = tuple(frozenset(t) for t in self.tiers)
        level = {}
        for k, tier in enumerate(tiers):
            if not tier:
                raise InputError("weak order has an empty tier")
            for c in tier:
                if c in level:
                    raise InputError(f"element {c!r} appears in two tiers")
                level[c] = k
        object.__setattr__(self, "tiers", tiers)
        object.__setattr__(self, "_level", level)

    @property
    def ground(self) -> frozenset:
        return frozenset(self._level)

    def _pick(self, menu) -> frozenset:
        if not menu:
            return frozenset()
        best = min(self._level[c] for c in menu)
        return frozenset(c for c in menu if self._level[c] == best)


@dataclass(frozen=True)
class Quota:
    """The ``b`` best elements of the menu under ``ranking`` (best first)."""

    ranking: tuple
    b: int
    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranking = tuple(self.ranking)
        if len(set(ranking)) != len(ranking):
            raise InputError(f"ranking lists an element twice: {list(ranking)}")
        if not isinstance(self.b, int) or self.b < 1:
            raise InputError(f"quota must be a positive integer, got {self.b!r}")
        object.__setattr__(self, "ranking", ranking)
        object.__setattr__(self, "_pos", {c: k for k, c in enumerate(ranking)})

    @property
    def ground(self) -> frozenset:
        return frozenset(self.ranking)

    def _pick(self, menu) -> frozenset:
        return frozenset(sorted(menu, key=self._pos.__getitem__)[: self.b])


@dataclass(frozen=True)
class Union:
    """Union of linear choice functions over a common ground set."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(p if isinstance(p, Linear) else Linear(p) for p in self.parts)
        if not parts:
            raise InputError("union needs at least one part")
        ground = parts[0].ground
        if any(p.ground != ground for p in parts[1:]):
            raise InputError("union parts must rank the same ground set")
        object.__setattr__(self, "parts", parts)

    @property
    def ground(self) -> frozenset:
        return self.parts[0].ground

    def _pick(self, menu) -> frozenset:
        if not menu:
            return frozenset()
        return frozenset(p.top(menu) for p in self.parts)


@dataclass(frozen=True)
class Table:
    """Explicit choice function: every menu of ``ground`` mapped to its choice."""

    ground: frozenset
    entries: Mapping

    def __post_init__(self):
        ground = frozenset(self.ground)
        entries = {frozenset(k): frozenset(v) for k, v in dict(self.entries).items()}
        for menu, chosen in entries.items():
            if not menu <= ground:
                raise InputError(f"menu {sorted(menu)} is not a subset of the ground set")
            if not chosen <= menu:
                raise InputError(f"choice {sorted(chosen)} is not inside menu {sorted(menu)}")
        missing = (1 << len(ground)) - len(entries)
        if missing:
            raise InputError(f"table is missing {missing} menus")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_function(cls, ground, fn: Callable[[frozenset], Iterable[str]], cap: int = DEFAULT_CAP):
        ground = frozenset(ground)
        check_cap(ground, cap)
        return cls(ground, {m: frozenset(fn(m)) for m in powerset(ground)})

    def _pick(self, menu) -> frozenset:
        return self.entries[frozenset(menu)]


ChoiceSpec = TUnion[Linear, Weak, Quota, Union, Table]


def choose(f: ChoiceSpec, menu: Iterable[str]) -> frozenset:
    menu = frozenset(menu)
    if not menu <= f.ground:
        raise InputError(f"menu elements {sorted(menu - f.ground)} are outside the ground set")
    return f._pick(menu)


def tabulate(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> dict:
    """Map every menu of the ground set to its choice."""
    check_cap(f.ground, cap)
    if isinstance(f, Table):
        return dict(f.entries)
    return {m: f._pick(m) for m in powerset(f.ground)}


def as_table(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> Table:
    if isinstance(f, Table):
        return f
    return Table(f.ground, tabulate(f, cap))


def same_function(f: ChoiceSpec, g: ChoiceSpec, cap: int = DEFAULT_CAP) -> bool:
    if f.ground != g.ground:
        return False
    check_cap(f.ground, cap)
    return all(f._pick(m) == g._pick(m) for m in powerset(f.ground))


def is_nonempty_valued(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> bool:
    if isinstance(f, (Linear, Weak, Quota, Union)):
        return True
    return all(chosen or not menu for menu, chosen in tabulate(f, cap).items())


# -- path independence -------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.holds


def _heredity_scan(table):
    # Checking only B versus B - {b} suffices: heredity chains along one-element removals.
    for big, chosen in table.items():
        for b in sorted(big):
            small = big - {b}
            lost = (chosen - {b}) - table[small]
            if lost:
                return small, big, min(lost)
    return None


def _outcast_scan(table):
    # Likewise, removing rejected elements one at a time is enough.
    for big, chosen in table.items():
        for x in sorted(big - chosen):
            if table[big - {x}] != chosen:
                return big, big - {x}
    return None


def check_heredity(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> Verdict:
    """Heredity: ``a`` chosen from ``B`` stays chosen from any ``A`` with a ∈ A ⊆ B.

    The witness is ``(A, B, a)`` with ``a ∈ f(B) ∩ A`` and ``a ∉ f(A)``.
    """
    hit = _heredity_scan(tabulate(f, cap))
    return Verdict(hit is None, hit)


def check_outcast(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> Verdict:
    """Outcast: ``f(A) ⊆ B ⊆ A`` implies ``f(B) = f(A)``; witness ``(A, B)``."""
    hit = _outcast_scan(tabulate(f, cap))
    return Verdict(hit is None, hit)


def is_path_independent(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> Verdict:
    """Decide ``f(A ∪ B) = f(f(A) ∪ B)`` for all menus.

    Runs in O(n 2^n) through the heredity/outcast characterisation.  On
    failure the witness is a pair ``(A, B)`` for which the identity breaks.
    """
    table = tabulate(f, cap)
    hit = _heredity_scan(table)
    if hit is not None:
        small, big, _ = hit
        (b,) = big - small
        return Verdict(False, (small, frozenset((b,))))
    hit = _outcast_scan(table)
    if hit is not None:
        return Verdict(False, hit)
    return Verdict(True)


def largest_null_set(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> frozenset:
    """Union of all menus with empty choice."""
    if isinstance(f, (Linear, Weak, Quota, Union)):
        return frozenset()
    if not is_path_independent(f, cap):
        raise PreconditionError("largest null set is only defined for path-independent functions")
    out = frozenset()
    for menu, chosen in tabulate(f, cap).items():
        if not chosen:
            out |= menu
    return out


def blair_leq(f: ChoiceSpec, a_menu, b_menu) -> bool:
    """Blair's hyper-relation: ``A ⪯ B`` iff ``f(A ∪ B) ⊆ B``."""
    b_menu = frozenset(b_menu)
    return choose(f, frozenset(a_menu) | b_menu) <= b_menu


# -- linear orders respecting a choice function -------------------------------


def respects(order: Linear, f: ChoiceSpec, cap: int = DEFAULT_CAP) -> bool:
    check_cap(f.ground, cap)
    return all(order.top(m) in f._pick(m) for m in powerset(f.ground) if m)


def respecting_order(f: ChoiceSpec, pin: Optional[tuple] = None, cap: int = DEFAULT_CAP) -> Linear:
    """A linear order whose maximum on every menu is chosen by ``f``.

    Built greedily from the top, always taking the least id among
    ``f(remaining)``.  With ``pin=(A, a)`` the order also puts ``a`` above
    the rest of ``A``.
    """
    ground = f.ground
    if pin is not None:
        pin_menu, pin_elem = frozenset(pin[0]), pin[1]
        if pin_elem not in choose(f, pin_menu):
            raise InputError(f"{pin_elem!r} is not chosen from {sorted(pin_menu)}")
    remaining = set(ground)
    ranking = []
    while remaining:
        chosen = f._pick(frozenset(remaining))
        if not chosen:
            raise PreconditionError("choice function is empty on a nonempty menu")
        if pin is not None and pin_elem in remaining:
            outside = chosen - pin_menu
            nxt = min(outside) if outside else pin_elem
            if nxt == pin_elem and pin_elem not in chosen:
                raise PreconditionError("no order puts the pinned element on top; not path-independent?")
        else:
            nxt = min(chosen)
        ranking.append(nxt)
        remaining.discard(nxt)
    order = Linear(ranking)
    if len(ground) <= cap and not respects(order, f, cap):
        raise PreconditionError("greedy order does not respect f; f is not path-independent")
    return order


def am_decompose(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> list:
    """Write ``f`` as a union of linear orders.

    Starts from one respecting order and adds pinned ones until every
    ``(A, a)`` with ``a ∈ f(A)`` is the top of ``A`` in some order.
    """
    check_cap(f.ground, cap)
    if not is_path_independent(f, cap):
        raise PreconditionError("only path-independent functions decompose into linear orders")
    if not is_nonempty_valued(f, cap):
        raise PreconditionError("choice function has null menus; prune them first")
    if isinstance(f, Linear):
        return [f]
    if isinstance(f, Weak):
        return weak_rotations(f)
    if isinstance(f, Union):
        return list(dict.fromkeys(f.parts))
    orders = [respecting_order(f, cap=cap)]
    for menu in powerset(f.ground):
        if not menu:
            continue
        tops = {o.top(menu) for o in orders}
        for a in sorted(f._pick(menu) - tops):
            orders.append(respecting_order(f, pin=(menu, a), cap=cap))
            tops.add(a)
    return orders


# -- weak orders, utilities, relabelling, pullbacks ---------------------------


def weak_rotations(w: Weak) -> list:
    """Linear orders whose union is ``w``: the k-th one lists each tier rotated by k.

    As many orders as the largest tier has elements.
    """
    tiers = [sorted(t) for t in w.tiers]
    width = max((len(t) for t in tiers), default=1)
    return [Linear([c for t in tiers for c in t[k % len(t):] + t[: k % len(t)]]) for k in range(width)]



def weak_equivalent(f: ChoiceSpec, cap: int = DEFAULT_CAP) -> Optional[Weak]:
    """The weak order generating ``f``, or None when no weak order does."""
    if isinstance(f, Weak):
        return f
    if isinstance(f, Linear):
        return Weak([{c} for c in f.ranking])
    check_cap(f.ground, cap)
    items = sorted(f.ground)
    score = {c: 0 for c in items}
    for x, y in itertools.combinations(items, 2):
        pair = f._pick(frozenset((x, y)))
        if not pair:
            return None
        for c in pair:
            score[c] += 1
    levels = sorted(set(score.values()), reverse=True)
    candidate = Weak([{c for c in items if score[c] == s} for s in levels])
    return candidate if same_function(candidate, f, cap) else None


def utilities(f: ChoiceSpec) -> dict:
    """Integer utilities for a Linear or Weak spec; larger is better, worst is 0."""
    if isinstance(f, Linear):
        n = len(f.ranking)
        return {c: n - 1 - k for k, c in enumerate(f.ranking)}
    if isinstance(f, Weak):
        n = len(f.tiers)
        return {c: n - 1 - k for k, tier in enumerate(f.tiers) for c in tier}
    raise InputError(f"{type(f).__name__} spec carries no utility function")


def from_utilities(u: Mapping[str, int]) -> Weak:
    levels = sorted(set(u.values()), reverse=True)
    return Weak([{c for c in u if u[c] == lv} for lv in levels])


def relabel(f: ChoiceSpec, mapping: Mapping[str, str]) -> ChoiceSpec:
    """Rename the ground set through an injective ``mapping``."""
    if len(set(mapping[c] for c in f.ground)) != len(f.ground):
        raise InputError("relabelling must be injective")
    if isinstance(f, Linear):
        return Linear([mapping[c] for c in f.ranking])
    if isinstance(f, Weak):
        return Weak([{mapping[c] for c in t} for t in f.tiers])
    if isinstance(f, Quota):
        return Quota([mapping[c] for c in f.ranking], f.b)
    if isinstance(f, Union):
        return Union([relabel(p, mapping) for p in f.parts])
    return Table(
        frozenset(mapping[c] for c in f.ground),
        {frozenset(mapping[c] for c in m): frozenset(mapping[c] for c in v) for m, v in f.entries.items()},
    )


def pullback(projection: Mapping[str, str], g: ChoiceSpec, domain=None, cap: int = DEFAULT_CAP) -> ChoiceSpec:
    """The choice function ``A ↦ A ∩ π⁻¹(g(π(A)))`` on the keys of ``projection``.

    Linear and Weak ``g`` pull back to a Weak spec (Linear when no two
    elements share an image), a Union to a Union; anything else becomes a
    Table.
    """
    if domain is not None:
        unmapped = set(domain) - set(projection)
        if unmapped:
            raise InputError(f"projection is undefined on {sorted(unmapped)}")
        projection = {x: projection[x] for x in domain}
    outside = {y for y in projection.values() if y not in g.ground}
    if outside:
        raise InputError(f"projection hits {sorted(outside)} outside the target ground set")
    xs = frozenset(projection)
    if xs == g.ground and all(projection[x] == x for x in xs):
        return g
    if isinstance(g, (Linear, Weak)):
        tiers = [{c} for c in g.ranking] if isinstance(g, Linear) else g.tiers
        pulled = [{x for x in xs if projection[x] in t} for t in tiers]
        pulled = [t for t in pulled if t]
        if all(len(t) == 1 for t in pulled):
            return Linear([next(iter(t)) for t in pulled])
        return Weak(pulled)
    if isinstance(g, Union) and xs:
        # the pullback of a union is the union of the pullbacks
        parts = []
        for p in g.parts:
            pulled = pullback(projection, p, cap=cap)
            parts += [pulled] if isinstance(pulled, Linear) else weak_rotations(pulled)
        return Union(list(dict.fromkeys(parts)))

    def pick(menu):
        chosen = g._pick(frozenset(projection[x] for x in menu))
        return {x for x in menu if projection[x] in chosen}

    return Table.from_function(xs, pick, cap)
