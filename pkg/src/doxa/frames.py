"""State spaces, accessibility relations and information structures.

States are addressed externally by text labels and internally by their
position ``0..n-1`` in the space.  Events, relation rows and information
sets are all stored as integer bitmasks (bit ``k`` set means state ``k`` is a
member), so set algebra is a single integer operation.

A :class:`Relation` and an :class:`InfoStructure` over the same space carry
the same data, one successor mask per state, read two ways: as the pairs
``(w, w')`` with ``w'`` reachable from ``w``, or as the map ``w -> I(w)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from doxa.errors import UnknownState, ValidationError
from doxa.report import TRUE, Check, Report, Verdict, check, skipped


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class StateSpace:
    labels: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValidationError("states", "a state space needs at least one state")
        index = {}
        for k, label in enumerate(labels):
            if not isinstance(label, str) or not label:
                raise ValidationError(f"states[{k}]", "state labels must be nonempty strings")
            if label in index:
                raise ValidationError(f"states[{k}]", f"duplicate state label {label!r}")
            index[label] = k
        object.__setattr__(self, "_index", index)

    @classmethod
    def of_size(cls, n: int, prefix: str = "w") -> "StateSpace":
        """Space with labels ``w1 .. wn``."""
        return cls(tuple(f"{prefix}{k + 1}" for k in range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, state: str | int) -> int:
        if isinstance(state, int) and not isinstance(state, bool):
            if 0 <= state < len(self.labels):
                return state
            raise UnknownState(state)
        try:
            return self._index[state]
        except KeyError:
            raise UnknownState(state) from None

    def label(self, k: int) -> str:
        return self.labels[k]

    def mask_of(self, states: Iterable[str | int]) -> int:
        mask = 0
        for s in states:
            mask |= 1 << self.index(s)
        return mask

    def event(self, states: Iterable[str | int] = ()) -> "Event":
        return Event(self, self.mask_of(states))

    def event_from_mask(self, mask: int) -> "Event":
        return Event(self, mask)

    @property
    def omega(self) -> "Event":
        return Event(self, self.full_mask)

    @property
    def empty(self) -> "Event":
        return Event(self, 0)

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[k] for k in bits(mask))


@dataclass(frozen=True)
class Event:
    """A set of states, stored as a membership mask over the space."""

    space: StateSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.space.n:
            raise ValidationError("event", f"mask {self.mask:#x} out of range for {self.space.n} states")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels_of(self.mask)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, state) -> bool:
        try:
            return bool(self.mask >> self.space.index(state) & 1)
        except UnknownState:
            return False

    def _other(self, other: "Event") -> int:
        if other.space != self.space:
            raise ValidationError("event", "events belong to different state spaces")
        return other.mask

    def __or__(self, other: "Event") -> "Event":
        return Event(self.space, self.mask | self._other(other))

    def __and__(self, other: "Event") -> "Event":
        return Event(self.space, self.mask & self._other(other))

    def __sub__(self, other: "Event") -> "Event":
        return Event(self.space, self.mask & ~self._other(other))

    def __invert__(self) -> "Event":
        return Event(self.space, self.space.full_mask & ~self.mask)

    def __le__(self, other: "Event") -> bool:
        return self.mask & ~self._other(other) == 0

    def __ge__(self, other: "Event") -> bool:
        return other <= self

    def issubset(self, other: "Event") -> bool:
        return self <= other

    def isdisjoint(self, other: "Event") -> bool:
        return self.mask & self._other(other) == 0

    def __str__(self) -> str:
        return "{" + ", ".join(self.labels) + "}"


def _mask_rows(space: StateSpace, rows: Sequence[int]) -> tuple[int, ...]:
    rows = tuple(int(r) for r in rows)
    if len(rows) != space.n:
        raise ValidationError("rows", f"expected {space.n} rows, got {len(rows)}")
    full = space.full_mask
    for k, r in enumerate(rows):
        if r < 0 or r & ~full:
            raise ValidationError(f"rows[{k}]", "successor mask refers to unknown states")
    return rows


@dataclass(frozen=True)
class Relation:
    """A binary accessibility relation over a finite state space.

    ``rows[k]`` is the mask of states reachable from state ``k``.
    """

    space: StateSpace
    rows: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", _mask_rows(self.space, self.rows))

    @classmethod
    def from_pairs(cls, space: StateSpace, pairs: Iterable[tuple[str | int, str | int]]) -> "Relation":
        rows = [0] * space.n
        for a, b in pairs:
            rows[space.index(a)] |= 1 << space.index(b)
        return cls(space, tuple(rows))

    @classmethod
    def empty(cls, space: StateSpace) -> "Relation":
        return cls(space, (0,) * space.n)

    @classmethod
    def identity(cls, space: StateSpace) -> "Relation":
        return cls(space, tuple(1 << k for k in range(space.n)))

    @classmethod
    def full(cls, space: StateSpace) -> "Relation":
        return cls(space, (space.full_mask,) * space.n)

    @property
    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for a, row in enumerate(self.rows) for b in bits(row))

    @property
    def label_pairs(self) -> tuple[tuple[str, str], ...]:
        lab = self.space.labels
        return tuple((lab[a], lab[b]) for a, row in enumerate(self.rows) for b in bits(row))

    def __contains__(self, pair) -> bool:
        a, b = pair
        return bool(self.rows[self.space.index(a)] >> self.space.index(b) & 1)

    def __len__(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def successors(self, state) -> Event:
        return Event(self.space, self.rows[self.space.index(state)])


@dataclass(frozen=True)
class InfoStructure:
    """An information function ``w -> I(w)`` over a finite state space.

    ``sets[k]`` is the mask of the information set at state ``k``.
    """

    space: StateSpace
    sets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sets", _mask_rows(self.space, self.sets))

    @classmethod
    def from_map(cls, space: StateSpace, info: Mapping[str, Iterable[str]]) -> "InfoStructure":
        missing = [s for s in space.labels if s not in info]
        if missing:
            raise ValidationError("info", f"information map is not total, missing {missing[0]!r}")
        for s in info:
            space.index(s)
        return cls(space, tuple(space.mask_of(info[s]) for s in space.labels))

    @classmethod
    def identity(cls, space: StateSpace) -> "InfoStructure":
        return cls(space, tuple(1 << k for k in range(space.n)))

    @classmethod
    def from_partition(cls, space: StateSpace, cells: Iterable[Iterable[str]]) -> "InfoStructure":
        """Partitional structure whose information sets are the given cells."""
        sets = [0] * space.n
        for cell in cells:
            mask = space.mask_of(cell)
            for k in bits(mask):
                if sets[k]:
                    raise ValidationError("partition", f"state {space.labels[k]!r} in two cells")
                sets[k] = mask
        if not all(sets):
            raise ValidationError("partition", "cells do not cover the state space")
        return cls(space, tuple(sets))

    def __getitem__(self, state) -> Event:
        return Event(self.space, self.sets[self.space.index(state)])

    def as_map(self) -> dict[str, tuple[str, ...]]:
        return {lab: self.space.labels_of(m) for lab, m in zip(self.space.labels, self.sets)}

    def cells(self) -> tuple[int, ...]:
        """Distinct information sets in order of first appearance."""
        return tuple(dict.fromkeys(self.sets))


def info_from_relation(rel: Relation) -> InfoStructure:
    return InfoStructure(rel.space, rel.rows)


def relation_from_info(info: InfoStructure) -> Relation:
    return Relation(info.space, info.sets)


def image_mask(sets: Sequence[int], mask: int) -> int:
    out = 0
    for k in bits(mask):
        out |= sets[k]
    return out


def image(info: InfoStructure, e: Event) -> Event:
    """Union of the information sets of the states in ``e``."""
    if e.space != info.space:
        raise ValidationError("event", "event and structure belong to different state spaces")
    return Event(info.space, image_mask(info.sets, e.mask))


def blindspot_mask(sets: Sequence[int], full: int) -> int:
    reached = 0
    for s in sets:
        reached |= s
    return full & ~reached


def blindspots(info: InfoStructure) -> Event:
    """States that belong to no information set."""
    return Event(info.space, blindspot_mask(info.sets, info.space.full_mask))


# -- relation-side properties -------------------------------------------------
#
# These follow the quantifier form of the Kripke definitions over the pair
# matrix, independently of the set-based structure checks below.


@dataclass(frozen=True)
class RelationReport:
    serial: Verdict
    transitive: Verdict
    euclidean: Verdict


def _matrix(rel: Relation) -> list[list[bool]]:
    n = rel.space.n
    return [[bool(row >> b & 1) for b in range(n)] for row in rel.rows]


def _serial(m, n) -> Verdict:
    for a in range(n):
        if not any(m[a]):
            return Verdict(False, (a,))
    return TRUE


def _transitive(m, n) -> Verdict:
    # witness (w, w'', w'): w ~> w'' and w'' ~> w' but not w ~> w'
    for a in range(n):
        for mid in range(n):
            if not m[a][mid]:
                continue
            for b in range(n):
                if m[mid][b] and not m[a][b]:
                    return Verdict(False, (a, mid, b))
    return TRUE


def _euclidean(m, n) -> Verdict:
    # witness (w, w', w''): w ~> w' and w ~> w'' but not w' ~> w''
    for a in range(n):
        for b in range(n):
            if not m[a][b]:
                continue
            for c in range(n):
                if m[a][c] and not m[b][c]:
                    return Verdict(False, (a, b, c))
    return TRUE


def _labelled(space: StateSpace, v: Verdict) -> Verdict:
    if v.holds:
        return v
    return Verdict(False, tuple(space.labels[k] for k in v.witness))


def check_relation_properties(rel: Relation) -> RelationReport:
    """Seriality, transitivity and the Euclidean property, with witnesses.

    Witnesses are the lexicographically first failing tuple of state labels.
    """
    n = rel.space.n
    m = _matrix(rel)
    return RelationReport(
        serial=_labelled(rel.space, _serial(m, n)),
        transitive=_labelled(rel.space, _transitive(m, n)),
        euclidean=_labelled(rel.space, _euclidean(m, n)),
    )


# -- structure-side properties ------------------------------------------------


@dataclass(frozen=True)
class StructureReport:
    viable: Verdict
    inclusive: Verdict
    mutual: Verdict
    divisible: Verdict
    partitional: Verdict


def _viable(sets) -> Verdict:
    for k, s in enumerate(sets):
        if not s:
            return Verdict(False, (k,))
    return TRUE


def _inclusive(sets) -> Verdict:
    # witness (w, w', x): w' in I(w), x in I(w') but x not in I(w)
    for k, s in enumerate(sets):
        for j in bits(s):
            extra = sets[j] & ~s
            if extra:
                return Verdict(False, (k, j, lowest(extra)))
    return TRUE


def _mutual(sets) -> Verdict:
    # witness (w, w', w''): w', w'' in I(w) but w'' not in I(w')
    for k, s in enumerate(sets):
        for j in bits(s):
            missing = s & ~sets[j]
            if missing:
                return Verdict(False, (k, j, lowest(missing)))
    return TRUE


def is_viable(info: InfoStructure) -> bool:
    return all(info.sets)


def is_divisible(info: InfoStructure) -> bool:
    sets = info.sets
    return bool(_viable(sets)) and bool(_inclusive(sets)) and bool(_mutual(sets))


def is_partitional(info: InfoStructure) -> bool:
    return is_divisible(info) and not blindspot_mask(info.sets, info.space.full_mask)


def check_structure_properties(info: InfoStructure) -> StructureReport:
    sp = info.space
    viable = _labelled(sp, _viable(info.sets))
    inclusive = _labelled(sp, _inclusive(info.sets))
    mutual = _labelled(sp, _mutual(info.sets))
    divisible = TRUE
    for name, v in (("viable", viable), ("inclusive", inclusive), ("mutual", mutual)):
        if not v:
            divisible = Verdict(False, (name,) + v.witness)
            break
    if not divisible:
        partitional = divisible
    else:
        blind = blindspot_mask(info.sets, sp.full_mask)
        partitional = TRUE if not blind else Verdict(False, ("blindspot", sp.labels[lowest(blind)]))
    return StructureReport(viable, inclusive, mutual, divisible, partitional)


# -- theorem verification -----------------------------------------------------


def _cells_disjoint_or_equal(sets) -> Verdict:
    n = len(sets)
    for a in range(n):
        for b in range(a + 1, n):
            if sets[a] & sets[b] and sets[a] != sets[b]:
                return Verdict(False, (a, b))
    return TRUE


def verify_frame_theorems(rel: Relation, other: Relation | None = None) -> Report:
    """Re-check the relation/structure correspondences on one relation.

    ``other`` is an optional second player's relation over the same space,
    used for the cross-player blindspot item; without it the item is checked
    with the relation paired against itself.
    """
    sp = rel.space
    info = info_from_relation(rel)
    rr = check_relation_properties(rel)
    sr = check_structure_properties(info)
    lab = sp.labels
    checks: list[Check] = [
        check("serial <=> viable", rr.serial.holds == sr.viable.holds, (rr.serial.witness, sr.viable.witness)),
        check(
            "transitive <=> inclusive",
            rr.transitive.holds == sr.inclusive.holds,
            (rr.transitive.witness, sr.inclusive.witness),
        ),
        check("euclidean <=> mutual", rr.euclidean.holds == sr.mutual.holds, (rr.euclidean.witness, sr.mutual.witness)),
        check("round trip relation -> info -> relation", relation_from_info(info) == rel),
    ]

    full = sp.full_mask
    reached = image_mask(info.sets, full)
    blind = blindspot_mask(info.sets, full)
    checks.append(
        check(
            "image and blindspots partition the space",
            reached & blind == 0 and reached | blind == full,
            (sp.labels_of(reached), sp.labels_of(blind)),
        )
    )

    divisible = sr.divisible.holds
    sets = info.sets
    if not divisible:
        for name in (
            "divisible cells disjoint or equal",
            "divisible: w not in I(w) <=> w blindspot",
            "divisible: v in I(w) => v in I(v) = I(w)",
            "divisible, equal images: v in I(O) => v in J(v)",
        ):
            checks.append(skipped(name, "structure is not divisible"))
        return Report("frame theorems", tuple(checks))

    v = _cells_disjoint_or_equal(sets)
    checks.append(check("divisible cells disjoint or equal", v.holds, v.witness and tuple(lab[k] for k in v.witness)))

    bad = None
    for k in range(sp.n):
        if bool(sets[k] >> k & 1) == bool(blind >> k & 1):
            bad = lab[k]
            break
    checks.append(check("divisible: w not in I(w) <=> w blindspot", bad is None, bad))

    bad = None
    for k in range(sp.n):
        for j in bits(sets[k]):
            if not (sets[j] >> j & 1 and sets[j] == sets[k]):
                bad = (lab[k], lab[j])
                break
        if bad:
            break
    checks.append(check("divisible: v in I(w) => v in I(v) = I(w)", bad is None, bad))

    other_sets = sets if other is None else info_from_relation(other).sets
    if other is not None and not is_divisible(InfoStructure(sp, other_sets)):
        checks.append(skipped("divisible, equal images: v in I(O) => v in J(v)", "second structure not divisible"))
    elif image_mask(other_sets, full) != reached:
        checks.append(skipped("divisible, equal images: v in I(O) => v in J(v)", "images differ"))
    else:
        bad = next((lab[k] for k in bits(reached) if not other_sets[k] >> k & 1), None)
        checks.append(check("divisible, equal images: v in I(O) => v in J(v)", bad is None, bad))
    return Report("frame theorems", tuple(checks))
