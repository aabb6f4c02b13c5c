from fractions import Fraction

import pytest

from doxa.decisions import agreement_check
from doxa.errors import CapExceeded, InvalidBlindspotSet
from doxa.frames import InfoStructure, StateSpace, blindspot_mask, is_divisible
from doxa.search import (
    GeneratorConfig,
    divisible_structures,
    enumerate_relations,
    mirrored_model,
    prng_header,
    random_agreement_instance,
    random_divisible_structure,
    random_extension_instance,
    random_profile,
    search_agreement_counterexample,
    seeds,
)


def test_enumeration_counts():
    assert len(list(enumerate_relations(1))) == 2
    assert len(list(enumerate_relations(2))) == 16
    assert len(set(enumerate_relations(2))) == 16
    assert len(divisible_structures(2)) == 4
    with pytest.raises(CapExceeded):
        next(enumerate_relations(6))


def test_enumeration_bit_order():
    rels = list(enumerate_relations(2))
    assert rels[0].rows == (0, 0)
    assert set(rels[1].label_pairs) == {("w1", "w1")}
    assert set(rels[4].label_pairs) == {("w2", "w1")}


def test_random_divisible_examples():
    sp = StateSpace.of_size(2)
    partitions = {
        InfoStructure.identity(sp),
        InfoStructure.from_partition(sp, [["w1", "w2"]]),
    }
    for seed in range(20):
        assert random_divisible_structure(GeneratorConfig(n=2, seed=seed, blindspots=())) in partitions
        fig1 = random_divisible_structure(GeneratorConfig(n=2, seed=seed, blindspots=(0,)))
        assert fig1 == InfoStructure.from_map(sp, {"w1": ["w2"], "w2": ["w2"]})
    one = random_divisible_structure(GeneratorConfig(n=1, blindspots=()))
    assert one.sets == (1,)


def test_invalid_blindspot_sets():
    with pytest.raises(InvalidBlindspotSet):
        random_divisible_structure(GeneratorConfig(n=2, blindspots=(0, 1)))
    with pytest.raises(InvalidBlindspotSet):
        random_divisible_structure(GeneratorConfig(n=2, blindspots=(5,)))


def test_generated_structures_are_divisible_with_requested_blindspots():
    for cfg in seeds(GeneratorConfig(n=7, blindspots=(1, 4)), 100):
        info = random_divisible_structure(cfg)
        assert is_divisible(info)
        assert blindspot_mask(info.sets, info.space.full_mask) == 0b10010
    for cfg in seeds(GeneratorConfig(n=6, players=3), 50):
        p = random_profile(cfg)
        masks = {blindspot_mask(s.sets, p.space.full_mask) for s in p.structures}
        assert len(masks) == 1 and all(map(is_divisible, p.structures))


def test_determinism():
    cfg = GeneratorConfig(n=6, seed=42)
    assert random_divisible_structure(cfg) == random_divisible_structure(cfg)
    assert random_agreement_instance(cfg) == random_agreement_instance(cfg)
    a = random_extension_instance(cfg)
    b = random_extension_instance(cfg)
    assert a.extension.space == b.extension.space and a.credal == b.credal
    assert "PCG64" in prng_header()


def test_agreement_instances_conclude():
    nontrivial = 0
    for cfg in seeds(GeneratorConfig(n=6, seed=1000), 80):
        inst = random_agreement_instance(cfg)
        res = agreement_check(inst.profile, inst.decision, inst.state)
        assert res.hypotheses_hold and res.conclusion
        nontrivial += len(set(inst.decision.prior)) > 1 or res.decisions["1"] not in (0, 1)
    assert nontrivial > 0


def test_default_search_returns_mirrored_model():
    found = search_agreement_counterexample()
    assert found.instance == mirrored_model()
    assert found.decisions == {"1": Fraction(1), "2": Fraction(0)}


def test_equal_blindspots_search_finds_nothing():
    cfg = GeneratorConfig(n=3, equal_blindspots=True, include_known=False)
    assert search_agreement_counterexample(cfg) is None


def test_search_at_three_states_finds_a_witness():
    found = search_agreement_counterexample(GeneratorConfig(n=3, min_n=3, include_known=False))
    assert found is not None
    inst = found.instance
    assert inst.profile.space.n == 3
    res = agreement_check(inst.profile, inst.decision, inst.state)
    assert res.divisible and all(res.gstp.values()) and res.common_information
    assert not res.equal_blindspots and not res.conclusion
    assert res.decisions == found.decisions


def test_search_enumeration_finds_smallest_first():
    found = search_agreement_counterexample(GeneratorConfig(n=3, include_known=False))
    assert found.instance.profile.space.n == 2


def test_search_budget_and_cap():
    assert search_agreement_counterexample(GeneratorConfig(n=3, include_known=False, budget=5)) is None
    with pytest.raises(CapExceeded):
        search_agreement_counterexample(GeneratorConfig(n=5, include_known=False))
