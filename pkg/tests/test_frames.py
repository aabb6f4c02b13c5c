import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from doxa.errors import UnknownState, ValidationError
from doxa.frames import (
    Event,
    InfoStructure,
    Relation,
    StateSpace,
    blindspots,
    check_relation_properties,
    check_structure_properties,
    image,
    info_from_relation,
    is_divisible,
    relation_from_info,
    verify_frame_theorems,
)
from doxa.search import enumerate_relations

SP2 = StateSpace.of_size(2)


def fig1() -> Relation:
    return Relation.from_pairs(SP2, [("w1", "w2"), ("w2", "w2")])


@st.composite
def relations(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return Relation(StateSpace.of_size(n), tuple(rows))


# -- construction ---------------------------------------------------------------


def test_state_space_rejects_empty_and_duplicates():
    with pytest.raises(ValidationError):
        StateSpace(())
    with pytest.raises(ValidationError):
        StateSpace(("a", "a"))
    with pytest.raises(ValidationError):
        StateSpace(("a", ""))


def test_unknown_labels_raise():
    with pytest.raises(UnknownState):
        SP2.index("w9")
    with pytest.raises(UnknownState):
        Relation.from_pairs(SP2, [("w1", "w3")])


def test_event_algebra():
    sp = StateSpace(("a", "b", "c"))
    e, f = sp.event(["a", "b"]), sp.event(["b", "c"])
    assert (e | f) == sp.omega
    assert (e & f).labels == ("b",)
    assert (e - f).labels == ("a",)
    assert (~e).labels == ("c",)
    assert e & f <= e and not e <= f
    assert len(e) == 2 and "a" in e and "c" not in e and "zz" not in e
    assert str(e) == "{a, b}"
    assert sp.event(["b", "a"]) == e


def test_info_map_must_be_total():
    with pytest.raises(ValidationError):
        InfoStructure.from_map(SP2, {"w1": ["w2"]})


# -- conversions ----------------------------------------------------------------


def test_fig1_conversion():
    info = info_from_relation(fig1())
    assert info["w1"].labels == ("w2",)
    assert info["w2"].labels == ("w2",)
    assert relation_from_info(info) == fig1()
    assert set(relation_from_info(info).label_pairs) == {("w1", "w2"), ("w2", "w2")}


def test_identity_and_empty_conversions():
    sp = StateSpace(("a", "b"))
    ident = info_from_relation(Relation.identity(sp))
    assert ident["a"].labels == ("a",) and ident["b"].labels == ("b",)
    empty = info_from_relation(Relation.empty(sp))
    assert not empty["a"] and not empty["b"]
    assert relation_from_info(InfoStructure(sp, (0, 0))) == Relation.empty(sp)


def test_round_trip_random_n5_against_pair_oracle():
    rng = random.Random(5)
    sp = StateSpace.of_size(5)
    for _ in range(200):
        rel = Relation(sp, tuple(rng.randrange(32) for _ in range(5)))
        info = info_from_relation(rel)
        for a, b in itertools.product(range(5), repeat=2):
            assert ((a, b) in oracles.pairs_of(rel)) == (sp.labels[b] in info[sp.labels[a]])
        assert relation_from_info(info) == rel
        assert info_from_relation(relation_from_info(info)) == info


def test_image():
    info = info_from_relation(fig1())
    assert image(info, SP2.omega).labels == ("w2",)
    assert not image(info, SP2.empty)
    ident = InfoStructure.identity(StateSpace.of_size(4))
    e = ident.space.event(["w1", "w3"])
    assert image(ident, e) == e


# -- properties ------------------------------------------------------------------


def test_fig1_properties():
    rr = check_relation_properties(fig1())
    assert rr.serial and rr.transitive and rr.euclidean
    sr = check_structure_properties(info_from_relation(fig1()))
    assert sr.divisible
    assert not sr.partitional


def test_full_relation_properties():
    rr = check_relation_properties(Relation.full(StateSpace.of_size(3)))
    assert rr.serial and rr.transitive and rr.euclidean


def test_empty_relation_properties():
    rr = check_relation_properties(Relation.empty(SP2))
    assert not rr.serial and rr.serial.witness == ("w1",)
    assert rr.transitive and rr.euclidean


def test_identity_is_partitional():
    sr = check_structure_properties(InfoStructure.identity(StateSpace.of_size(3)))
    assert sr.partitional


def test_mutual_witness():
    info = InfoStructure.from_map(SP2, {"w1": ["w1", "w2"], "w2": ["w2"]})
    sr = check_structure_properties(info)
    assert not sr.mutual
    assert sr.mutual.witness == ("w1", "w2", "w1")


def test_witnesses_are_real_counterexamples():
    for rel in enumerate_relations(3):
        sp = rel.space
        pairs = oracles.pairs_of(rel)
        rr = check_relation_properties(rel)
        if not rr.transitive:
            a, mid, b = map(sp.index, rr.transitive.witness)
            assert (a, mid) in pairs and (mid, b) in pairs and (a, b) not in pairs
        if not rr.euclidean:
            a, b, c = map(sp.index, rr.euclidean.witness)
            assert (a, b) in pairs and (a, c) in pairs and (b, c) not in pairs
        sets = oracles.info_sets(info_from_relation(rel))
        sr = check_structure_properties(info_from_relation(rel))
        if not sr.inclusive:
            w, v, x = map(sp.index, sr.inclusive.witness)
            assert v in sets[w] and x in sets[v] and x not in sets[w]
        if not sr.viable:
            assert not sets[sp.index(sr.viable.witness[0])]


def test_properties_match_oracle_exhaustively():
    for n in (1, 2, 3):
        for rel in enumerate_relations(n):
            pairs = oracles.pairs_of(rel)
            sets = oracles.info_sets(info_from_relation(rel))
            rr = check_relation_properties(rel)
            sr = check_structure_properties(info_from_relation(rel))
            assert rr.serial.holds == oracles.serial(pairs, n)
            assert rr.transitive.holds == oracles.transitive(pairs, n)
            assert rr.euclidean.holds == oracles.euclidean(pairs, n)
            assert sr.viable.holds == oracles.viable(sets)
            assert sr.inclusive.holds == oracles.inclusive(sets)
            assert sr.mutual.holds == oracles.mutual(sets)


@settings(max_examples=300, deadline=None)
@given(relations(max_n=7))
def test_properties_match_oracle_random(rel):
    n = rel.space.n
    pairs = oracles.pairs_of(rel)
    sets = oracles.info_sets(info_from_relation(rel))
    rr = check_relation_properties(rel)
    sr = check_structure_properties(info_from_relation(rel))
    assert (rr.serial.holds, rr.transitive.holds, rr.euclidean.holds) == (
        oracles.serial(pairs, n),
        oracles.transitive(pairs, n),
        oracles.euclidean(pairs, n),
    )
    assert (sr.viable.holds, sr.inclusive.holds, sr.mutual.holds) == (
        oracles.viable(sets),
        oracles.inclusive(sets),
        oracles.mutual(sets),
    )


# -- blindspots and the theorem report ---------------------------------------------


def test_blindspots_examples():
    assert blindspots(info_from_relation(fig1())).labels == ("w1",)
    assert not blindspots(InfoStructure.identity(StateSpace.of_size(3)))
    sp = StateSpace(("s1", "s2", "s3"))
    info = InfoStructure.from_map(sp, {s: ["s2", "s3"] for s in sp.labels})
    assert blindspots(info).labels == ("s1",)


@settings(max_examples=200, deadline=None)
@given(relations(max_n=8))
def test_blindspots_match_oracle(rel):
    info = info_from_relation(rel)
    n = rel.space.n
    assert set(blindspots(info).indices) == oracles.blindspots(oracles.info_sets(info), n)
    reached = image(info, rel.space.omega)
    assert reached.isdisjoint(blindspots(info))
    assert (reached | blindspots(info)) == rel.space.omega


def test_frame_report_examples():
    assert verify_frame_theorems(fig1()).ok
    assert verify_frame_theorems(Relation.identity(StateSpace.of_size(4))).ok
    for rel in enumerate_relations(3):
        assert verify_frame_theorems(rel).ok


def test_frame_report_skips_divisible_items_when_not_divisible():
    rep = verify_frame_theorems(Relation.empty(SP2))
    assert rep.ok
    assert rep["divisible cells disjoint or equal"].status.value == "hypothesis-not-met"


def _canonical_forms(n):
    """Divisible structures built from the canonical form, independently."""
    out = set()
    states = range(n)
    for r in range(n):
        for blind in itertools.combinations(states, r):
            rest = [k for k in states if k not in blind]
            for partition in _partitions(rest):
                cells = [frozenset(c) for c in partition]
                for choice in itertools.product(cells, repeat=len(blind)):
                    sets = {}
                    for c in cells:
                        for k in c:
                            sets[k] = c
                    for k, c in zip(blind, choice):
                        sets[k] = c
                    out.add(tuple(sets[k] for k in states))
    return out


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        yield [[first]] + p


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_canonical_form_characterizes_divisibility(n):
    found = set()
    for rel in enumerate_relations(n):
        info = info_from_relation(rel)
        if is_divisible(info):
            found.add(tuple(frozenset(s) for s in oracles.info_sets(info)))
    assert found == _canonical_forms(n)
    if n == 2:
        assert len(found) == 4


def test_event_mask_bounds():
    with pytest.raises(ValidationError):
        Event(SP2, 4)
