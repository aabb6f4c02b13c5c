"""Strategic games, types, and the belief structures they induce.

An epistemic extension attaches to each player a finite list of types, each
a probability over the opponents' action profiles.  Its state space is the
full product of action profiles and type profiles; a state is labelled
``"a1,...,an|k1,...,kn"`` where ``k`` are 0-based type indices.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from doxa.beliefs import CredalSet, audit_axioms, check_b1
from doxa.errors import SizeLimit, UnknownPlayer, UnknownProfile, ValidationError
from doxa.frames import (
    Event,
    Relation,
    StateSpace,
    check_relation_properties,
    info_from_relation,
    is_divisible,
)
from doxa.report import Check, Report, check, skipped

DEFAULT_MAX_STATES = 4096
MAX_STATES_ENV = "DOXA_MAX_STATES"

Profile = tuple[str, ...]


def max_states() -> int:
    raw = os.environ.get(MAX_STATES_ENV)
    return int(raw) if raw else DEFAULT_MAX_STATES


@dataclass(frozen=True)
class StrategicGame:
    players: tuple[str, ...]
    actions: Mapping[str, tuple[str, ...]]
    payoffs: Mapping[str, Mapping[Profile, Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        players = tuple(self.players)
        object.__setattr__(self, "players", players)
        if not players or len(set(players)) != len(players):
            raise ValidationError("players", "players must be a nonempty list of distinct identifiers")
        actions = {}
        for p in players:
            acts = tuple(self.actions.get(p, ()))
            if not acts:
                raise ValidationError(f"actions.{p}", "every player needs a nonempty action list")
            if len(set(acts)) != len(acts):
                raise ValidationError(f"actions.{p}", "duplicate action label")
            for a in acts:
                if not a or "," in a or "|" in a:
                    raise ValidationError(f"actions.{p}", f"invalid action label {a!r}")
            actions[p] = acts
        object.__setattr__(self, "actions", actions)
        payoffs = {}
        for p, table in dict(self.payoffs).items():
            if p not in actions:
                raise ValidationError(f"payoffs.{p}", "unknown player")
            table = {tuple(k): Fraction(v) for k, v in table.items()}
            for prof in self.profiles():
                if prof not in table:
                    raise ValidationError(f"payoffs.{p}", f"no payoff for profile {','.join(prof)}")
            if len(table) != len(self.profiles()):
                raise ValidationError(f"payoffs.{p}", "payoff table has entries for unknown profiles")
            payoffs[p] = table
        object.__setattr__(self, "payoffs", payoffs)

    def profiles(self) -> list[Profile]:
        return list(itertools.product(*(self.actions[p] for p in self.players)))

    def opponents(self, player: str) -> tuple[str, ...]:
        if player not in self.actions:
            raise UnknownPlayer(player)
        return tuple(p for p in self.players if p != player)

    def opponent_profiles(self, player: str) -> list[Profile]:
        return list(itertools.product(*(self.actions[q] for q in self.opponents(player))))

    def payoff(self, player: str, profile: Sequence[str]) -> Fraction:
        try:
            return self.payoffs[player][tuple(profile)]
        except KeyError:
            if player not in self.payoffs:
                raise UnknownPlayer(player) from None
            raise UnknownProfile(tuple(profile)) from None


@dataclass(frozen=True)
class EpistemicExtension:
    """A game plus, per player, a list of types over opponent profiles.

    ``types[i][k]`` maps opponent profiles (tuples in player order, owner
    omitted) to probabilities; profiles left out get probability 0.
    """

    game: StrategicGame
    types: Mapping[str, tuple[Mapping[Profile, Fraction], ...]]
    _dense: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        g = self.game
        dense = {}
        for p in g.players:
            listed = tuple(self.types.get(p, ()))
            if not listed:
                raise ValidationError(f"types.{p}", "every player needs at least one type")
            opp = g.opponent_profiles(p)
            known = set(opp)
            rows = []
            for k, t in enumerate(listed):
                for prof in t:
                    if tuple(prof) not in known:
                        raise ValidationError(f"types.{p}[{k}]", f"unknown opponent profile {','.join(prof)}")
                row = tuple(Fraction(t.get(prof, 0)) for prof in opp)
                if any(x < 0 for x in row):
                    raise ValidationError(f"types.{p}[{k}]", "probabilities must be nonnegative")
                if sum(row) != 1:
                    raise ValidationError(f"types.{p}[{k}]", f"type sums to {sum(row)}, not 1")
                if row in rows:
                    raise ValidationError(f"types.{p}[{k}]", "duplicate type")
                rows.append(row)
            dense[p] = tuple(rows)
        extra = set(self.types) - set(g.players)
        if extra:
            raise ValidationError("types", f"types for unknown player {sorted(extra)[0]!r}")
        object.__setattr__(self, "types", {p: tuple(dict(t) for t in self.types[p]) for p in g.players})
        object.__setattr__(self, "_dense", dense)

    @property
    def players(self) -> tuple[str, ...]:
        return self.game.players

    def type_vector(self, player: str, k: int) -> tuple[Fraction, ...]:
        """Type ``k`` of ``player`` as probabilities in opponent-profile order."""
        return self._dense[player][k]

    def type_count(self, player: str) -> int:
        return len(self._dense[player])

    def size(self) -> int:
        n = 1
        for p in self.players:
            n *= len(self.game.actions[p]) * len(self._dense[p])
        return n

    @cached_property
    def states(self) -> tuple[tuple[Profile, tuple[int, ...]], ...]:
        g = self.game
        if self.size() > max_states():
            raise SizeLimit(f"extension has {self.size()} states, more than the cap of {max_states()}")
        types = [range(len(self._dense[p])) for p in g.players]
        return tuple(
            (a, t) for a in g.profiles() for t in itertools.product(*types)
        )

    @cached_property
    def space(self) -> StateSpace:
        return build_state_space(self)

    def _pos(self, player: str) -> int:
        try:
            return self.players.index(player)
        except ValueError:
            raise UnknownPlayer(player) from None

    def opponent_part(self, player: str, actions: Profile) -> Profile:
        i = self._pos(player)
        return actions[:i] + actions[i + 1:]

    @cached_property
    def _opp_index(self) -> dict[str, dict[Profile, int]]:
        return {p: {prof: j for j, prof in enumerate(self.game.opponent_profiles(p))} for p in self.players}


def build_state_space(ext: EpistemicExtension, cap: int | None = None) -> StateSpace:
    """Enumerate action profiles, then type profiles, in lexicographic order."""
    cap = max_states() if cap is None else cap
    size = ext.size()
    if size > cap:
        raise SizeLimit(f"extension has {size} states, more than the cap of {cap} (set {MAX_STATES_ENV})")
    return StateSpace(tuple(",".join(a) + "|" + ",".join(map(str, t)) for a, t in ext.states))


def event_of_opponent_profile(ext: EpistemicExtension, player: str, profile: Sequence[str]) -> Event:
    """States whose opponent-action coordinates equal ``profile``."""
    profile = tuple(profile)
    if player not in ext.players:
        raise UnknownPlayer(player)
    if profile not in ext._opp_index[player]:
        raise UnknownProfile(profile)
    return Event(ext.space, event_mask_of_profiles(ext, player, [profile]))


def event_of_type(ext: EpistemicExtension, player: str, k: int) -> Event:
    i = ext._pos(player)
    if not 0 <= k < ext.type_count(player):
        raise ValidationError(f"types.{player}", f"no type with index {k}")
    return Event(ext.space, sum(1 << s for s, (_, t) in enumerate(ext.states) if t[i] == k))


def _opp_masks(ext: EpistemicExtension, player: str) -> list[int]:
    idx = ext._opp_index[player]
    masks = [0] * len(idx)
    for s, (a, _) in enumerate(ext.states):
        masks[idx[ext.opponent_part(player, a)]] |= 1 << s
    return masks


def relation_from_types(ext: EpistemicExtension, player: str) -> Relation:
    """``w ~> w'`` iff the player's type at ``w`` gives ``w'``'s opponent actions positive weight."""
    i = ext._pos(player)
    opp = _opp_masks(ext, player)
    by_type = []
    for k in range(ext.type_count(player)):
        vec = ext.type_vector(player, k)
        by_type.append(sum(opp[j] for j, x in enumerate(vec) if x > 0))
    return Relation(ext.space, tuple(by_type[t[i]] for _, t in ext.states))


def accessibility_degree(ext: EpistemicExtension, player: str, source, target) -> Fraction:
    sp = ext.space
    i = ext._pos(player)
    _, t = ext.states[sp.index(source)]
    b, _ = ext.states[sp.index(target)]
    j = ext._opp_index[player][ext.opponent_part(player, b)]
    return ext.type_vector(player, t[i])[j]


# -- consistency between types and global measures -------------------------------


@dataclass(frozen=True)
class C1Result:
    holds: bool
    player: str | None = None
    type_index: int | None = None
    profile: Profile | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_c1(ext: EpistemicExtension, credal: Mapping[str, CredalSet], per_type: bool = False) -> C1Result:
    """Every type's weight on each opponent profile must be matched by some measure.

    By default a different measure may serve each (type, profile) pair.  With
    ``per_type=True`` one measure has to match a type on all profiles at once.
    """
    for p in ext.players:
        if p not in credal:
            raise ValidationError(f"credal.{p}", "no credal set for player")
        cs = credal[p]
        if cs.space != ext.space:
            raise ValidationError(f"credal.{p}", "credal set is not over the extension space")
        opp = _opp_masks(ext, p)
        profiles = ext.game.opponent_profiles(p)
        table = [[cs.mass(m, mask) for mask in opp] for m in range(len(cs))]
        for k in range(ext.type_count(p)):
            vec = ext.type_vector(p, k)
            if per_type:
                if not any(list(row) == list(vec) for row in table):
                    return C1Result(False, p, k, None)
                continue
            for j, x in enumerate(vec):
                if not any(row[j] == x for row in table):
                    return C1Result(False, p, k, profiles[j])
    return C1Result(True)


def verify_extension_theorem(
    ext: EpistemicExtension,
    credal: Mapping[str, CredalSet],
    *,
    b1_mode: str = "per_measure",
    per_type: bool = False,
    samples: int | None = None,
) -> Report:
    """Check the type-induced relations are serial, transitive and Euclidean.

    The hypotheses are the blindspot/credal condition (``b1_mode`` selects its
    reading, see :func:`doxa.beliefs.check_b1`) and type/measure consistency.
    Seriality only needs types to be probabilities, so it is always asserted;
    the other conclusions are reported as unmet-hypothesis when a hypothesis
    fails.
    """
    checks: list[Check] = []
    c1 = check_c1(ext, credal, per_type=per_type)
    for p in ext.players:
        rel = relation_from_types(ext, p)
        info = info_from_relation(rel)
        b1 = check_b1(credal[p], info, mode=b1_mode)
        c1_ok = c1.holds or c1.player != p
        checks.append(check(f"[{p}] hypothesis B1 ({b1_mode})", b1.holds, (b1.state, b1.direction)))
        checks.append(check(f"[{p}] hypothesis C1", c1_ok, (c1.type_index, c1.profile)))
        rr = check_relation_properties(rel)
        checks.append(check(f"[{p}] serial", rr.serial.holds, rr.serial.witness))
        if not (b1.holds and c1_ok):
            for name in ("transitive", "euclidean", "divisible", "KD45"):
                checks.append(skipped(f"[{p}] {name}", "hypotheses not met"))
            continue
        checks.append(check(f"[{p}] transitive", rr.transitive.holds, rr.transitive.witness))
        checks.append(check(f"[{p}] euclidean", rr.euclidean.holds, rr.euclidean.witness))
        checks.append(check(f"[{p}] divisible", is_divisible(info)))
        ax = audit_axioms(info) if samples is None else audit_axioms(info, samples=samples)
        failed = [name for name, v in ax.flags().items() if not v]
        checks.append(check(f"[{p}] KD45", not failed, tuple(failed), detail=ax.mode))
    return Report("extension theorem", tuple(checks))


def blindspot_profiles(ext: EpistemicExtension, player: str) -> list[Profile]:
    """Opponent profiles to which every type of ``player`` assigns zero."""
    profiles = ext.game.opponent_profiles(player)
    return [
        prof
        for j, prof in enumerate(profiles)
        if all(ext.type_vector(player, k)[j] == 0 for k in range(ext.type_count(player)))
    ]


def event_mask_of_profiles(ext: EpistemicExtension, player: str, profiles) -> int:
    idx = ext._opp_index[player]
    opp = _opp_masks(ext, player)
    out = 0
    for prof in profiles:
        out |= opp[idx[tuple(prof)]]
    return out


__all__ = [
    "StrategicGame",
    "EpistemicExtension",
    "build_state_space",
    "event_of_opponent_profile",
    "event_of_type",
    "relation_from_types",
    "accessibility_degree",
    "check_c1",
    "verify_extension_theorem",
    "blindspot_profiles",
]
