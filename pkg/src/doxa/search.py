"""Exhaustive enumeration, seeded instance generators and counterexample search.

Every generator is a pure function of its :class:`GeneratorConfig`: the
random stream comes from numpy's PCG64 bit generator seeded with
``config.seed``, so a config replays to the same output on any machine with
the same numpy release.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from doxa.beliefs import CredalSet, check_b1
from doxa.decisions import Posterior, agreement_check, uniform_prior
from doxa.errors import CapExceeded, GenerationExhausted, InvalidBlindspotSet, ValidationError
from doxa.frames import InfoStructure, Relation, StateSpace, bits, blindspot_mask, info_from_relation, is_divisible
from doxa.games import (
    EpistemicExtension,
    StrategicGame,
    check_c1,
    event_mask_of_profiles,
    relation_from_types,
)
from doxa.group import Profile

PRNG_NAME = "numpy.random.PCG64"
ENUMERATION_CAP = 5


def prng_header() -> str:
    return f"{PRNG_NAME} (numpy {np.__version__})"


@dataclass(frozen=True)
class GeneratorConfig:
    n: int = 4
    seed: int = 0
    blindspots: tuple[int, ...] | None = None
    players: int = 2
    samples: int = 1
    max_retries: int = 10_000
    min_n: int = 2
    equal_blindspots: bool = False
    include_known: bool = True
    budget: int = 1_000_000
    max_states: int = 64

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


# -- enumeration ----------------------------------------------------------------


def enumerate_relations(n: int) -> Iterator[Relation]:
    """All ``2**(n*n)`` relations on ``w1..wn``, in binary counting order.

    Bit ``i*n + j`` of the counter is the pair ``(wi+1, wj+1)``.
    """
    if n > ENUMERATION_CAP:
        raise CapExceeded(f"enumeration is capped at n={ENUMERATION_CAP}, got n={n}")
    if n < 1:
        raise ValidationError("n", "need at least one state")
    space = StateSpace.of_size(n)
    full = space.full_mask
    for r in range(1 << (n * n)):
        yield Relation(space, tuple((r >> (i * n)) & full for i in range(n)))


@lru_cache(maxsize=None)
def divisible_structures(n: int) -> tuple[InfoStructure, ...]:
    """Every divisible structure on ``n`` states, in enumeration order."""
    return tuple(s for s in map(info_from_relation, enumerate_relations(n)) if is_divisible(s))


# -- random structures ----------------------------------------------------------


def _random_blindspots(rng: np.random.Generator, n: int) -> int:
    while True:
        mask = sum(1 << k for k in range(n) if rng.random() < 1 / 3)
        if mask != (1 << n) - 1:
            return mask


def _random_partition(rng: np.random.Generator, members: list[int]) -> list[int]:
    cells: list[int] = []
    for k in members:
        j = int(rng.integers(len(cells) + 1))
        if j == len(cells):
            cells.append(0)
        cells[j] |= 1 << k
    return cells


def _divisible(rng: np.random.Generator, space: StateSpace, blind: int) -> InfoStructure:
    full = space.full_mask
    if blind & ~full:
        raise InvalidBlindspotSet("blindspot set refers to unknown states")
    if blind == full:
        raise InvalidBlindspotSet("the blindspot set must be a proper subset of the space")
    cells = _random_partition(rng, [k for k in range(space.n) if not blind >> k & 1])
    sets = [0] * space.n
    for c in cells:
        for k in bits(c):
            sets[k] = c
    for k in bits(blind):
        sets[k] = cells[int(rng.integers(len(cells)))]
    info = InfoStructure(space, tuple(sets))
    assert is_divisible(info) and blindspot_mask(info.sets, full) == blind
    return info


def _blind_mask(config: GeneratorConfig, rng: np.random.Generator) -> int:
    if config.blindspots is None:
        return _random_blindspots(rng, config.n)
    mask = 0
    for k in config.blindspots:
        if not 0 <= k < config.n:
            raise InvalidBlindspotSet(f"state index {k} out of range")
        mask |= 1 << k
    return mask


def random_divisible_structure(config: GeneratorConfig) -> InfoStructure:
    """A divisible structure whose blindspots are ``config.blindspots``.

    Non-blindspot states are split into random cells, each mapping to its own
    cell; every blindspot state maps to one of those cells.  The resulting
    distribution is not uniform over divisible structures.
    """
    rng = config.rng()
    return _divisible(rng, StateSpace.of_size(config.n), _blind_mask(config, rng))


def random_profile(config: GeneratorConfig) -> Profile:
    """Divisible structures sharing one blindspot set (hence one image)."""
    rng = config.rng()
    space = StateSpace.of_size(config.n)
    blind = _blind_mask(config, rng)
    players = tuple(str(i + 1) for i in range(config.players))
    return Profile(space, players, tuple(_divisible(rng, space, blind) for _ in players))


# -- agreement instances ----------------------------------------------------------


@dataclass(frozen=True)
class AgreementInstance:
    profile: Profile
    decision: Posterior
    state: str


def random_agreement_instance(config: GeneratorConfig) -> AgreementInstance:
    """An instance meeting every hypothesis of the agreement theorem.

    Structures share a blindspot set; the prior is positive off the
    blindspots.  Draws are rejected until the decisions are common
    information at the chosen state.
    """
    rng = config.rng()
    space = StateSpace.of_size(config.n)
    players = tuple(str(i + 1) for i in range(config.players))
    for _ in range(config.max_retries):
        if config.n >= 2 and config.blindspots is None and rng.random() < 0.5:
            structures, prior, target = _lifted_draw(rng, space, len(players))
        else:
            blind = _blind_mask(config, rng)
            structures = tuple(_divisible(rng, space, blind) for _ in players)
            weights = [int(rng.integers(1, 4)) for _ in range(space.n)]
            for k in bits(blind):
                if rng.random() < 0.5:
                    weights[k] = 0
            total = sum(weights)
            prior = tuple(Fraction(w, total) for w in weights)
            target = int(rng.integers(1 << space.n))
        state = int(rng.integers(space.n))
        profile = Profile(space, players, structures)
        f = Posterior(space, prior, target)
        result = agreement_check(profile, f, state)
        if result.hypotheses_hold:
            return AgreementInstance(profile, f, space.labels[state])
    raise GenerationExhausted(f"no valid agreement instance in {config.max_retries} draws (seed {config.seed})")


def _lifted_draw(rng: np.random.Generator, space: StateSpace, players: int):
    """Structures on ``X x {0, 1}`` that only see the ``X`` coordinate.

    State ``2x`` is ``(x, 0)`` and ``2x + 1`` is ``(x, 1)``; an odd state
    count leaves one extra state that every player treats as a blindspot.
    The target is ``X x {1}`` with conditional weight ``q`` on every ``x``,
    so every information set has posterior ``q`` and the decisions are common
    information wherever the draw is accepted.
    """
    m = space.n // 2
    base = StateSpace.of_size(m)
    blind = _random_blindspots(rng, m)
    base_structures = [_divisible(rng, base, blind) for _ in range(players)]
    q = Fraction(int(rng.integers(1, 5)), 5)

    def lift(mask: int) -> int:
        return sum(3 << (2 * x) for x in bits(mask))

    structures = []
    for s in base_structures:
        sets = [lift(s.sets[x // 2]) for x in range(2 * m)]
        if space.n > 2 * m:
            sets.append(sets[0])
        structures.append(InfoStructure(space, tuple(sets)))
    weights = [int(rng.integers(1, 4)) for _ in range(m)]
    for x in bits(blind):
        if rng.random() < 0.5:
            weights[x] = 0
    total = sum(weights)
    prior = []
    for x in range(m):
        px = Fraction(weights[x], total)
        prior += [px * (1 - q), px * q]
    if space.n > 2 * m:
        prior.append(Fraction(0))
    target = sum(1 << (2 * x + 1) for x in range(m))
    return tuple(structures), tuple(prior), target


def mirrored_model() -> AgreementInstance:
    """Two states; each player's only information set is the other player's blindspot's complement."""
    space = StateSpace(("w1", "w2"))
    p1 = InfoStructure.from_map(space, {"w1": ["w2"], "w2": ["w2"]})
    p2 = InfoStructure.from_map(space, {"w1": ["w1"], "w2": ["w1"]})
    f = Posterior(space, uniform_prior(space), space.mask_of(["w2"]))
    return AgreementInstance(Profile(space, ("1", "2"), (p1, p2)), f, "w1")


@dataclass(frozen=True)
class AgreementCounterexample:
    instance: AgreementInstance
    decisions: dict
    index: int


def search_agreement_counterexample(config: GeneratorConfig = GeneratorConfig(n=3)) -> AgreementCounterexample | None:
    """Look for divisible, sure-thing, common-information instances that disagree.

    The known two-state model is reported first when ``include_known`` is
    set.  Otherwise instances are enumerated by increasing state count up to
    ``config.n`` (at most 4): ordered pairs of divisible structures, then
    targets, then actual states, all under the uniform prior.  Only pairs with
    unequal blindspots are tried, or only equal ones when
    ``config.equal_blindspots`` is set.
    """
    if config.include_known and not config.equal_blindspots:
        inst = mirrored_model()
        result = agreement_check(inst.profile, inst.decision, inst.state)
        return AgreementCounterexample(inst, result.decisions, 0)
    if config.n > 4:
        raise CapExceeded("counterexample enumeration is capped at n=4")
    index = 0
    for n in range(max(config.min_n, 1), config.n + 1):
        structures = divisible_structures(n)
        space = structures[0].space
        full = space.full_mask
        prior = uniform_prior(space)
        for s1, s2 in itertools.product(structures, repeat=2):
            same = blindspot_mask(s1.sets, full) == blindspot_mask(s2.sets, full)
            if same != config.equal_blindspots:
                continue
            profile = Profile(space, ("1", "2"), (s1, s2))
            for target in range(1 << n):
                f = Posterior(space, prior, target)
                for w in range(n):
                    index += 1
                    if index > config.budget:
                        return None
                    result = agreement_check(profile, f, w)
                    h = result.hypotheses
                    if h["divisible"] and h["gstp"] and h["common-information"] and not result.conclusion:
                        inst = AgreementInstance(profile, f, space.labels[w])
                        return AgreementCounterexample(inst, result.decisions, index)
    return None


# -- epistemic extensions ---------------------------------------------------------


@dataclass(frozen=True)
class ExtensionInstance:
    extension: EpistemicExtension
    credal: dict


def _random_type(rng: np.random.Generator, support: list[int], size: int) -> tuple[Fraction, ...]:
    weights = [int(rng.integers(1, 6)) for _ in support]
    total = sum(weights)
    vec = [Fraction(0)] * size
    for j, w in zip(support, weights):
        vec[j] = Fraction(w, total)
    return tuple(vec)


def _draw_game(rng: np.random.Generator, config: GeneratorConfig) -> tuple[StrategicGame, dict]:
    """Game dimensions and, per player, a common support for all its types."""
    for _ in range(config.max_retries):
        players = tuple(str(i + 1) for i in range(config.players))
        n_actions = {p: int(rng.integers(1, 4)) for p in players}
        n_types = {p: int(rng.integers(1, 4)) for p in players}
        size = 1
        for p in players:
            size *= n_actions[p] * n_types[p]
        if size <= config.max_states:
            break
    else:
        raise GenerationExhausted("could not draw game dimensions under the state cap")
    names = "ABCDEFGH"
    actions = {p: tuple(f"{names[i]}{j + 1}" for j in range(n_actions[p])) for i, p in enumerate(players)}
    game = StrategicGame(players, actions)
    types = {}
    for p in players:
        opp = game.opponent_profiles(p)
        support = [j for j in range(len(opp)) if rng.random() < 0.6] or [int(rng.integers(len(opp)))]
        vectors: list[tuple[Fraction, ...]] = []
        for _ in range(n_types[p] * 4):
            if len(vectors) == n_types[p]:
                break
            v = _random_type(rng, support, len(opp))
            if v not in vectors:
                vectors.append(v)
        types[p] = tuple({opp[j]: x for j, x in enumerate(v) if x} for v in vectors)
    return game, types


def consistent_credal_sets(ext: EpistemicExtension) -> dict[str, CredalSet]:
    """Measures matching every type on every opponent profile it supports.

    For each (type, profile) pair with weight ``c > 0`` the measure puts ``c``
    uniformly on the profile's states and ``1 - c`` uniformly on the other
    non-blindspot states; one extra measure is uniform on all non-blindspot
    states.
    """
    space = ext.space
    out = {}
    for p in ext.players:
        rel = relation_from_types(ext, p)
        nb = space.full_mask & ~blindspot_mask(rel.rows, space.full_mask)
        profiles = ext.game.opponent_profiles(p)
        measures = []
        for k in range(ext.type_count(p)):
            for j, c in enumerate(ext.type_vector(p, k)):
                if c == 0:
                    continue
                inside = event_mask_of_profiles(ext, p, [profiles[j]])
                rest = nb & ~inside
                m = [Fraction(0)] * space.n
                for s in bits(inside):
                    m[s] = c / inside.bit_count()
                if c != 1:
                    for s in bits(rest):
                        m[s] = (1 - c) / rest.bit_count()
                measures.append(tuple(m))
        share = Fraction(1, nb.bit_count())
        measures.append(tuple(share if nb >> s & 1 else Fraction(0) for s in range(space.n)))
        out[p] = CredalSet(space, tuple(measures))
    return out


def random_extension_instance(config: GeneratorConfig) -> ExtensionInstance:
    """An extension with credal sets satisfying both hypotheses of the type theorem.

    All types of a player share one support, which is what the blindspot
    condition (read per measure) together with type/measure consistency
    forces.  The instance is re-validated before it is returned.
    """
    rng = config.rng()
    game, types = _draw_game(rng, config)
    ext = EpistemicExtension(game, types)
    credal = consistent_credal_sets(ext)
    for p in ext.players:
        info = info_from_relation(relation_from_types(ext, p))
        for mode in ("joint", "per_measure"):
            if not check_b1(credal[p], info, mode=mode):
                raise GenerationExhausted(f"generated credal set for player {p} fails B1 ({mode})")
    if not check_c1(ext, credal):
        raise GenerationExhausted("generated credal sets fail C1")
    return ExtensionInstance(ext, credal)


def random_unrestricted_extension(config: GeneratorConfig) -> ExtensionInstance:
    """Like :func:`random_extension_instance` but each type draws its own support.

    The credal sets come from :func:`consistent_credal_sets` and are not
    re-validated; callers decide which hypotheses the instance meets.
    """
    rng = config.rng()
    game, _ = _draw_game(rng, config)
    types = {}
    for p in game.players:
        opp = game.opponent_profiles(p)
        vectors: list[tuple[Fraction, ...]] = []
        for _ in range(1 + int(rng.integers(3))):
            support = [j for j in range(len(opp)) if rng.random() < 0.6] or [int(rng.integers(len(opp)))]
            v = _random_type(rng, support, len(opp))
            if v not in vectors:
                vectors.append(v)
        types[p] = tuple({opp[j]: x for j, x in enumerate(v) if x} for v in vectors)
    ext = EpistemicExtension(game, types)
    return ExtensionInstance(ext, consistent_credal_sets(ext))


def seeds(config: GeneratorConfig, count: int) -> Iterator[GeneratorConfig]:
    """``count`` configs derived from ``config`` with consecutive seeds."""
    for k in range(count):
        yield replace(config, seed=config.seed + k)
