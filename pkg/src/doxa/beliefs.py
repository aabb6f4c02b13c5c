"""Belief operators, modal axiom audits and credal sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from doxa.errors import ValidationError
from doxa.frames import Event, InfoStructure, StateSpace, bits, blindspot_mask, check_structure_properties
from doxa.report import TRUE, Report, Verdict, check

#: Largest space on which every event (and every pair of events) is audited.
AXIOM_EXHAUSTIVE_MAX = 8
AXIOM_SAMPLES = 100_000


def believes_mask(sets, mask: int) -> int:
    out = 0
    for k, s in enumerate(sets):
        if s & ~mask == 0:
            out |= 1 << k
    return out


def believes(info: InfoStructure, e: Event) -> Event:
    """States whose information set lies inside ``e``."""
    if e.space != info.space:
        raise ValidationError("event", "event and structure belong to different state spaces")
    return Event(info.space, believes_mask(info.sets, e.mask))


# -- axiom audit ---------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    N: Verdict
    K: Verdict
    D: Verdict
    four: Verdict
    five: Verdict
    mode: str
    events_checked: int

    @property
    def kd45(self) -> bool:
        return all((self.N.holds, self.K.holds, self.D.holds, self.four.holds, self.five.holds))

    def flags(self) -> dict[str, Verdict]:
        return {"N": self.N, "K": self.K, "D": self.D, "4": self.four, "5": self.five}


class _Operator:
    """Vectorized belief operator over arrays of event masks."""

    def __init__(self, info: InfoStructure):
        n = info.space.n
        self.dtype = np.uint64 if n <= 64 else object
        self.full = self.dtype(info.space.full_mask) if n <= 64 else info.space.full_mask
        groups: dict[int, int] = {}
        for k, s in enumerate(info.sets):
            groups[s] = groups.get(s, 0) | 1 << k
        # states sharing an information set are believed-in together
        self.groups = [(self._scalar(c), self._scalar(states)) for c, states in groups.items()]

    def _scalar(self, v: int):
        return np.uint64(v) if self.dtype is np.uint64 else v

    def array(self, masks) -> np.ndarray:
        return np.asarray(list(masks) if not isinstance(masks, np.ndarray) else masks, dtype=self.dtype)

    def neg(self, e: np.ndarray) -> np.ndarray:
        return self.full ^ e

    def B(self, e: np.ndarray) -> np.ndarray:
        out = np.zeros(e.shape, dtype=self.dtype)
        outside = self.full ^ e
        for cell, states in self.groups:
            inside = (outside & cell) == 0
            out |= inside.astype(self.dtype) * states
        return out


def _first(violation: np.ndarray):
    hits = np.flatnonzero(violation)
    return int(hits[0]) if hits.size else None


def _cell_generated(info: InfoStructure, limit: int = 12) -> list[int]:
    cells = list(info.cells())
    full = info.space.full_mask
    events = {0, full, blindspot_mask(info.sets, full)}
    if len(cells) <= limit:
        for pick in range(1 << len(cells)):
            u = 0
            for j in bits(pick):
                u |= cells[j]
            events.add(u)
            events.add(full & ~u)
    else:
        for c in cells:
            events.add(c)
            events.add(full & ~c)
    return sorted(events)


def _sample_masks(rng: np.random.Generator, n: int, size: int):
    words = (n + 63) // 64
    raw = rng.bit_generator.random_raw((size, words))
    full = (1 << n) - 1
    if words == 1:
        return raw[:, 0] & np.uint64(full)
    out = []
    for row in raw:
        v = 0
        for w in row:
            v = (v << 64) | int(w)
        out.append(v & full)
    return out


def audit_axioms(info: InfoStructure, *, samples: int = AXIOM_SAMPLES, seed: int = 0) -> AxiomReport:
    """Audit N, K, D, 4 and 5 for the belief operator of ``info``.

    On spaces of at most :data:`AXIOM_EXHAUSTIVE_MAX` states every event, and
    every ordered pair of events for K, is checked, and witnesses are the
    first failing event in mask order.  Larger spaces are checked on the
    events generated by the information cells plus ``samples`` seeded random
    events (and pairs); the report's ``mode`` is then ``"sampled"``.
    """
    sp = info.space
    op = _Operator(info)
    ev = lambda m: Event(sp, int(m))  # noqa: E731

    if sp.n <= AXIOM_EXHAUSTIVE_MAX:
        mode = "exhaustive"
        E = op.array(range(1 << sp.n))
        grid = np.indices((E.size, E.size)).reshape(2, -1)
        KE, KF = E[grid[0]], E[grid[1]]
    else:
        mode = "sampled"
        rng = np.random.Generator(np.random.PCG64(seed))
        base = _cell_generated(info)
        E = np.concatenate([op.array(base), op.array(_sample_masks(rng, sp.n, samples))])
        if len(base) ** 2 <= samples:
            pairs_e = [a for a in base for _ in base]
            pairs_f = [b for _ in base for b in base]
        else:
            pairs_e = base * 4
            pairs_f = [base[(j + r) % len(base)] for r in range(4) for j in range(len(base))]
        KE = np.concatenate([op.array(pairs_e), op.array(_sample_masks(rng, sp.n, samples))])
        KF = np.concatenate([op.array(pairs_f), op.array(_sample_masks(rng, sp.n, samples))])

    omega = op.array([sp.full_mask])
    n_ok = bool((op.B(omega) == op.full).all())
    N = TRUE if n_ok else Verdict(False, sp.omega)

    # K: B(E u F) n B(not E) subset of BF
    lhs = op.B(KE | KF) & op.B(op.neg(KE))
    i = _first((lhs & op.neg(op.B(KF))) != 0)
    K = TRUE if i is None else Verdict(False, (ev(KE[i]), ev(KF[i])))

    BE = op.B(E)
    # D: BE subset of not B(not E)
    i = _first((BE & op.B(op.neg(E))) != 0)
    D = TRUE if i is None else Verdict(False, ev(E[i]))
    # 4: BE subset of BBE
    i = _first((BE & op.neg(op.B(BE))) != 0)
    four = TRUE if i is None else Verdict(False, ev(E[i]))
    # 5: not BE subset of B(not BE)
    nBE = op.neg(BE)
    i = _first((nBE & op.neg(op.B(nBE))) != 0)
    five = TRUE if i is None else Verdict(False, ev(E[i]))

    return AxiomReport(N, K, D, four, five, mode, int(E.size + KE.size))


def check_axiom_correspondence(info: InfoStructure, **audit_kw) -> Report:
    """Cross-check the axiom audit against the structure properties."""
    ax = audit_axioms(info, **audit_kw)
    sr = check_structure_properties(info)
    return Report(
        f"axiom correspondence ({ax.mode})",
        (
            check("N holds", ax.N.holds, ax.N.witness),
            check("K holds", ax.K.holds, ax.K.witness),
            check("D <=> viable", ax.D.holds == sr.viable.holds, (ax.D.witness, sr.viable.witness)),
            check("4 <=> inclusive", ax.four.holds == sr.inclusive.holds, (ax.four.witness, sr.inclusive.witness)),
            check("5 <=> mutual", ax.five.holds == sr.mutual.holds, (ax.five.witness, sr.mutual.witness)),
        ),
    )


# -- credal sets ---------------------------------------------------------------


def _pmf(space: StateSpace, values, path: str) -> tuple[Fraction, ...]:
    probs = tuple(Fraction(v) for v in values)
    if len(probs) != space.n:
        raise ValidationError(path, f"expected {space.n} probabilities, got {len(probs)}")
    if any(p < 0 for p in probs):
        raise ValidationError(path, "probabilities must be nonnegative")
    total = sum(probs)
    if total != 1:
        raise ValidationError(path, f"probabilities sum to {total}, not 1")
    return probs


@dataclass(frozen=True)
class CredalSet:
    """A finite, nonempty set of exact probability mass functions."""

    space: StateSpace
    measures: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        measures = tuple(_pmf(self.space, m, f"credal[{k}]") for k, m in enumerate(self.measures))
        if not measures:
            raise ValidationError("credal", "a credal set needs at least one measure")
        object.__setattr__(self, "measures", tuple(dict.fromkeys(measures)))

    @classmethod
    def from_dicts(cls, space: StateSpace, measures: Iterable[Mapping[str, object]]) -> "CredalSet":
        out = []
        for m in measures:
            for s in m:
                space.index(s)
            out.append(tuple(Fraction(m.get(s, 0)) for s in space.labels))
        return cls(space, tuple(out))

    @classmethod
    def uniform(cls, space: StateSpace, support: Iterable[int] | None = None) -> "CredalSet":
        idx = set(range(space.n) if support is None else support)
        share = Fraction(1, len(idx))
        return cls(space, (tuple(share if k in idx else Fraction(0) for k in range(space.n)),))

    def __len__(self) -> int:
        return len(self.measures)

    def mass(self, measure: int, mask: int) -> Fraction:
        m = self.measures[measure]
        return sum((m[k] for k in bits(mask)), Fraction(0))

    def support_union(self) -> int:
        out = 0
        for m in self.measures:
            for k, p in enumerate(m):
                if p:
                    out |= 1 << k
        return out


@dataclass(frozen=True)
class B1Result:
    holds: bool
    state: str | None = None
    direction: str | None = None
    measure: int | None = None

    def __bool__(self) -> bool:
        return self.holds


BLINDSPOT_WITH_MASS = "blindspot-with-positive-mass"
ACCESSIBLE_WITHOUT_MASS = "accessible-with-zero-mass"


def check_b1(credal: CredalSet, info: InfoStructure, mode: str = "joint") -> B1Result:
    """Check that blindspots are exactly the states no measure can see.

    ``mode="joint"`` reads the condition as: a state is a blindspot iff every
    measure gives it probability 0.  ``mode="per_measure"`` reads it as the
    biconditional holding for each measure separately, so every measure must
    be positive on every non-blindspot state.
    """
    if credal.space != info.space:
        raise ValidationError("credal", "credal set and structure use different spaces")
    if mode not in ("joint", "per_measure"):
        raise ValueError(f"unknown mode {mode!r}")
    blind = blindspot_mask(info.sets, info.space.full_mask)
    lab = info.space.labels
    for k in range(info.space.n):
        masses = [m[k] for m in credal.measures]
        if blind >> k & 1:
            j = next((j for j, p in enumerate(masses) if p), None)
            if j is not None:
                return B1Result(False, lab[k], BLINDSPOT_WITH_MASS, j)
        elif mode == "joint":
            if not any(masses):
                return B1Result(False, lab[k], ACCESSIBLE_WITHOUT_MASS)
        else:
            j = next((j for j, p in enumerate(masses) if not p), None)
            if j is not None:
                return B1Result(False, lab[k], ACCESSIBLE_WITHOUT_MASS, j)
    return B1Result(True)
