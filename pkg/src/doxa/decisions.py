"""Informational decision functions, the sure-thing check and agreement.

A decision function maps events to decision values.  Values are compared
exactly: rationals are :class:`fractions.Fraction` (always in lowest terms)
and anything else is an opaque text label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from doxa.errors import EvaluationError, UndefinedAt, ValidationError, ZeroProbabilityConditioning
from doxa.frames import Event, InfoStructure, StateSpace, bits, blindspot_mask, is_divisible
from doxa.group import Profile, group_rows

DecisionValue = Union[Fraction, str]

#: Largest space on which the sure-thing check enumerates every subset.
GSTP_EXHAUSTIVE_MAX = 12
GSTP_SAMPLES = 100_000


def as_value(value) -> DecisionValue:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    raise ValidationError("decision", f"decision values are rationals or text labels, got {value!r}")


@dataclass(frozen=True)
class Table:
    """A decision function given by a finite table of events."""

    space: StateSpace
    entries: Mapping[int, DecisionValue] = field(default_factory=dict)
    default: DecisionValue | None = None

    def __post_init__(self):
        entries = {}
        for mask, value in dict(self.entries).items():
            Event(self.space, mask)
            entries[mask] = as_value(value)
        object.__setattr__(self, "entries", entries)
        if self.default is not None:
            object.__setattr__(self, "default", as_value(self.default))

    @classmethod
    def from_events(cls, space: StateSpace, entries: Iterable[tuple[Iterable[str], object]], default=None) -> "Table":
        return cls(space, {space.mask_of(e): v for e, v in entries}, default)

    @classmethod
    def constant(cls, space: StateSpace, value) -> "Table":
        return cls(space, {}, value)

    def at_mask(self, mask: int) -> DecisionValue:
        value = self.entries.get(mask, self.default)
        if value is None:
            raise UndefinedAt(Event(self.space, mask))
        return value

    def __hash__(self):
        return hash((self.space, tuple(sorted(self.entries.items(), key=lambda kv: kv[0])), self.default))


@dataclass(frozen=True)
class Posterior:
    """``E -> Pr(target | E)`` under an exact prior over the states."""

    space: StateSpace
    prior: tuple[Fraction, ...]
    target: int

    def __post_init__(self):
        prior = tuple(Fraction(p) for p in self.prior)
        object.__setattr__(self, "prior", prior)
        if len(prior) != self.space.n:
            raise ValidationError("decision.prior", f"expected {self.space.n} probabilities")
        if any(p < 0 for p in prior):
            raise ValidationError("decision.prior", "probabilities must be nonnegative")
        if sum(prior) != 1:
            raise ValidationError("decision.prior", f"prior sums to {sum(prior)}, not 1")
        Event(self.space, self.target)

    @classmethod
    def from_labels(cls, space: StateSpace, prior: Mapping[str, object], target: Iterable[str]) -> "Posterior":
        for s in prior:
            space.index(s)
        return cls(space, tuple(Fraction(prior.get(s, 0)) for s in space.labels), space.mask_of(target))

    def mass(self, mask: int) -> Fraction:
        return sum((self.prior[k] for k in bits(mask)), Fraction(0))

    def at_mask(self, mask: int) -> Fraction:
        den = self.mass(mask)
        if den == 0:
            raise ZeroProbabilityConditioning(Event(self.space, mask))
        return self.mass(mask & self.target) / den


DecisionFunction = Union[Table, Posterior]


def evaluate(f: DecisionFunction, e: Event) -> DecisionValue:
    if e.space != f.space:
        raise ValidationError("event", "event is over a different state space")
    return f.at_mask(e.mask)


class _Cached:
    def __init__(self, f: DecisionFunction):
        self.f = f
        self.memo: dict[int, DecisionValue] = {}

    def __call__(self, mask: int) -> DecisionValue:
        try:
            return self.memo[mask]
        except KeyError:
            value = self.memo[mask] = self.f.at_mask(mask)
            return value


# -- generalized sure-thing principle -----------------------------------------


@dataclass(frozen=True)
class GSTPResult:
    holds: bool
    mode: str  # "exhaustive" or "sampled"
    subsets_checked: int
    counterexample: tuple[Event, DecisionValue] | None = None

    def __bool__(self) -> bool:
        return self.holds


_MIXED = object()


def _cell_values(cached: _Cached, info: InfoStructure) -> list[DecisionValue]:
    values = []
    for k, cell in enumerate(info.sets):
        try:
            values.append(cached(cell))
        except EvaluationError as exc:
            raise exc.with_context(subset=Event(info.space, 1 << k))
    return values


def satisfies_gstp(
    f: DecisionFunction, info: InfoStructure, *, samples: int = GSTP_SAMPLES, seed: int = 0
) -> GSTPResult:
    """Check the sure-thing condition for ``f`` against one structure.

    For every nonempty ``S`` on which ``f(I(v))`` is a constant ``d``, the
    union of those information sets must also be mapped to ``d``.  Spaces of
    at most :data:`GSTP_EXHAUSTIVE_MAX` states are scanned subset by subset in
    increasing mask order, so the reported counterexample is the first one.
    Larger spaces are checked on the cell-generated subsets plus ``samples``
    seeded random subsets, and the result says so.
    """
    if f.space != info.space:
        raise ValidationError("structure", "decision function and structure use different spaces")
    cached = _Cached(f)
    values = _cell_values(cached, info)
    if info.space.n <= GSTP_EXHAUSTIVE_MAX:
        return _gstp_exhaustive(cached, info, values)
    return _gstp_sampled(cached, info, values, samples, seed)


def _gstp_exhaustive(cached: _Cached, info: InfoStructure, values) -> GSTPResult:
    sets = info.sets
    size = 1 << info.space.n
    unions = [0] * size
    common: list = [_MIXED] * size
    checked = 0
    for s in range(1, size):
        low = s & -s
        k = low.bit_length() - 1
        rest = s ^ low
        unions[s] = unions[rest] | sets[k]
        if rest == 0:
            common[s] = values[k]
        elif common[rest] is not _MIXED and common[rest] == values[k]:
            common[s] = values[k]
        d = common[s]
        if d is _MIXED:
            continue
        checked += 1
        try:
            got = cached(unions[s])
        except EvaluationError as exc:
            raise exc.with_context(subset=Event(info.space, s))
        if got != d:
            return GSTPResult(False, "exhaustive", checked, (Event(info.space, s), d))
    return GSTPResult(True, "exhaustive", checked)


def _gstp_sampled(cached: _Cached, info: InfoStructure, values, samples: int, seed: int) -> GSTPResult:
    sets = info.sets
    classes: dict = {}
    for k, v in enumerate(values):
        classes.setdefault(v, []).append(k)
    candidates: list[int] = []
    for members in classes.values():
        # one representative state per distinct cell within the class
        reps = list({sets[k]: k for k in reversed(members)}.values())
        reps.sort()
        candidates.append(sum(1 << k for k in members))
        for x in range(len(reps)):
            for y in range(x + 1, len(reps)):
                candidates.append((1 << reps[x]) | (1 << reps[y]))
    rng = np.random.Generator(np.random.PCG64(seed))
    groups = [m for m in classes.values() if len(m) > 1]
    if groups:
        for _ in range(samples):
            members = groups[int(rng.integers(len(groups)))]
            picks = rng.random(len(members)) < 0.5
            s = sum(1 << k for k, keep in zip(members, picks) if keep)
            if s:
                candidates.append(s)
    checked = 0
    for s in candidates:
        d = values[next(bits(s))]
        u = 0
        for k in bits(s):
            u |= sets[k]
        checked += 1
        try:
            got = cached(u)
        except EvaluationError as exc:
            raise exc.with_context(subset=Event(info.space, s))
        if got != d:
            return GSTPResult(False, "sampled", checked, (Event(info.space, s), d))
    return GSTPResult(True, "sampled", checked)


# -- agreement -----------------------------------------------------------------


@dataclass(frozen=True)
class AgreementResult:
    state: str
    decisions: dict[str, DecisionValue]
    decision_events: dict[str, Event]
    divisible: dict[str, bool]
    equal_blindspots: bool
    blindspots: dict[str, Event]
    gstp: dict[str, GSTPResult]
    common_information: bool
    common_information_witness: str | None
    group_info: Event

    @property
    def hypotheses(self) -> dict[str, bool]:
        return {
            "divisible": all(self.divisible.values()),
            "equal-blindspots": self.equal_blindspots,
            "gstp": all(self.gstp.values()),
            "common-information": self.common_information,
        }

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def conclusion(self) -> bool:
        return len(set(self.decisions.values())) <= 1

    @property
    def theorem_violated(self) -> bool:
        return self.hypotheses_hold and not self.conclusion

    @property
    def violated_hypotheses(self) -> tuple[str, ...]:
        return tuple(name for name, ok in self.hypotheses.items() if not ok)


def agreement_check(p: Profile, f: DecisionFunction, state, *, gstp_samples: int = GSTP_SAMPLES) -> AgreementResult:
    """Evaluate each player's decision at ``state`` and every hypothesis."""
    sp = p.space
    if f.space != sp:
        raise ValidationError("decision", "decision function and profile use different spaces")
    w = sp.index(state)
    cached = _Cached(f)
    full = sp.full_mask

    decisions: dict[str, DecisionValue] = {}
    events: dict[str, Event] = {}
    for player, s in p.items():
        per_state = []
        for k, cell in enumerate(s.sets):
            try:
                per_state.append(cached(cell))
            except EvaluationError as exc:
                raise exc.with_context(player=player, state=sp.labels[k])
        d = per_state[w]
        decisions[player] = d
        events[player] = Event(sp, sum(1 << k for k, v in enumerate(per_state) if v == d))

    grp = group_rows(p.structures)[w]
    meet = full
    for e in events.values():
        meet &= e.mask
    outside = grp & ~meet
    witness = sp.labels[next(bits(outside))] if outside else None

    blind = {player: Event(sp, blindspot_mask(s.sets, full)) for player, s in p.items()}
    gstp = {}
    for player, s in p.items():
        try:
            gstp[player] = satisfies_gstp(f, s, samples=gstp_samples)
        except EvaluationError as exc:
            raise exc.with_context(player=player)

    result = AgreementResult(
        state=sp.labels[w],
        decisions=decisions,
        decision_events=events,
        divisible={player: is_divisible(s) for player, s in p.items()},
        equal_blindspots=len({b.mask for b in blind.values()}) == 1,
        blindspots=blind,
        gstp=gstp,
        common_information=not outside,
        common_information_witness=witness,
        group_info=Event(sp, grp),
    )
    return result


def uniform_prior(space: StateSpace, support: Sequence[int] | None = None) -> tuple[Fraction, ...]:
    idx = range(space.n) if support is None else support
    idx = set(idx)
    share = Fraction(1, len(idx))
    return tuple(share if k in idx else Fraction(0) for k in range(space.n))
