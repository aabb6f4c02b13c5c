"""Player profiles, the group accessibility relation and common information."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from doxa.errors import UnknownPlayer, ValidationError
from doxa.frames import (
    Event,
    InfoStructure,
    Relation,
    StateSpace,
    bits,
    blindspot_mask,
    image_mask,
    is_divisible,
)
from doxa.report import Check, Report, check, skipped


@dataclass(frozen=True)
class Profile:
    """One information structure per player, all over the same space."""

    space: StateSpace
    players: tuple[str, ...]
    structures: tuple[InfoStructure, ...]

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "structures", tuple(self.structures))
        if not self.players:
            raise ValidationError("players", "a profile needs at least one player")
        if len(set(self.players)) != len(self.players):
            raise ValidationError("players", "duplicate player identifier")
        if len(self.structures) != len(self.players):
            raise ValidationError("structures", "exactly one structure per player is required")
        for p, s in zip(self.players, self.structures):
            if s.space != self.space:
                raise ValidationError(f"structures[{p}]", "structure is over a different state space")

    @classmethod
    def of(cls, structures: Mapping[str, InfoStructure]) -> "Profile":
        players = tuple(structures)
        if not players:
            raise ValidationError("players", "a profile needs at least one player")
        space = structures[players[0]].space
        return cls(space, players, tuple(structures[p] for p in players))

    def __getitem__(self, player: str) -> InfoStructure:
        try:
            return self.structures[self.players.index(player)]
        except ValueError:
            raise UnknownPlayer(player) from None

    def items(self):
        return zip(self.players, self.structures)


@dataclass(frozen=True)
class Chain:
    """A path ``w0 ~>^{i1} w1 ~>^{i2} ... ~>^{ik} wk`` through player relations."""

    players: tuple[str, ...]
    states: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.players)

    def validate(self, profile: Profile) -> bool:
        if len(self.states) != len(self.players) + 1:
            return False
        sp = profile.space
        for m, player in enumerate(self.players):
            a, b = sp.index(self.states[m]), sp.index(self.states[m + 1])
            if not profile[player].sets[a] >> b & 1:
                return False
        return True

    def __str__(self) -> str:
        out = self.states[0]
        for p, s in zip(self.players, self.states[1:]):
            out += f" ~{p}~> {s}"
        return out


def transitive_closure(rows: Sequence[int]) -> tuple[int, ...]:
    """Closure by repeated squaring: ``R <- R | R.R`` until nothing changes."""
    rows = list(rows)
    while True:
        squared = [r | image_mask(rows, r) for r in rows]
        if squared == rows:
            return tuple(rows)
        rows = squared


def group_rows(structures: Sequence[InfoStructure]) -> tuple[int, ...]:
    n = structures[0].space.n
    union = [0] * n
    for s in structures:
        for k, m in enumerate(s.sets):
            union[k] |= m
    return transitive_closure(union)


def group_relation(p: Profile) -> Relation:
    return Relation(p.space, group_rows(p.structures))


def group_info(p: Profile, state) -> Event:
    k = p.space.index(state)
    return Event(p.space, group_rows(p.structures)[k])


def group_structure(p: Profile) -> InfoStructure:
    return InfoStructure(p.space, group_rows(p.structures))


def is_common_information(p: Profile, e: Event, state) -> bool:
    if e.space != p.space:
        raise ValidationError("event", "event is over a different state space")
    return group_info(p, state) <= e


def find_chain(p: Profile, start, end) -> Chain | None:
    """Shortest chain of player links from ``start`` to ``end``.

    At least one link is always used, so ``(w, w)`` has a chain only when
    ``w`` lies on a cycle.  Ties are broken by player order, then state order.
    """
    sp = p.space
    a, b = sp.index(start), sp.index(end)
    parent: dict[int, tuple[int, int]] = {}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        for pi, s in enumerate(p.structures):
            for nxt in bits(s.sets[cur]):
                if nxt in parent:
                    continue
                parent[nxt] = (cur, pi)
                if nxt == b:
                    return _unwind(p, parent, a, b)
                queue.append(nxt)
    return None


def _unwind(p: Profile, parent, a: int, b: int) -> Chain:
    states = [b]
    players = []
    cur = b
    while True:
        prev, pi = parent[cur]
        players.append(p.players[pi])
        states.append(prev)
        cur = prev
        if cur == a:
            break
    lab = p.space.labels
    return Chain(tuple(reversed(players)), tuple(lab[k] for k in reversed(states)))


def verify_group_proposition(p: Profile) -> Report:
    """Items 2-4 of the group-information proposition on one profile.

    Item 4 (``I^N(w) = I^i(I^N(w))``) is only asserted when every structure
    is divisible and all players have the same image ``I^i(O)``.
    """
    sp = p.space
    lab = sp.labels
    full = sp.full_mask
    grp = group_rows(p.structures)
    checks: list[Check] = []

    bad = None
    for player, s in p.items():
        for k in range(sp.n):
            if s.sets[k] & ~grp[k]:
                bad = (player, lab[k])
                break
        if bad:
            break
    checks.append(check("I^i(w) subset of I^N(w)", bad is None, bad))

    bad = None
    for player, s in p.items():
        for k in range(sp.n):
            if image_mask(s.sets, grp[k]) & ~grp[k]:
                bad = (player, lab[k])
                break
        if bad:
            break
    checks.append(check("I^i(I^N(w)) subset of I^N(w)", bad is None, bad))

    name = "I^N(w) = I^i(I^N(w))"
    not_div = next((pl for pl, s in p.items() if not is_divisible(s)), None)
    images = {image_mask(s.sets, full) for s in p.structures}
    if not_div is not None:
        checks.append(skipped(name, f"structure of player {not_div} is not divisible"))
    elif len(images) > 1:
        checks.append(skipped(name, "players have different images I^i(O)"))
    else:
        bad = None
        for player, s in p.items():
            for k in range(sp.n):
                if image_mask(s.sets, grp[k]) != grp[k]:
                    bad = (player, lab[k])
                    break
            if bad:
                break
        checks.append(check(name, bad is None, bad))
    return Report("group proposition", tuple(checks))


def equal_blindspots(p: Profile) -> bool:
    full = p.space.full_mask
    return len({blindspot_mask(s.sets, full) for s in p.structures}) == 1
