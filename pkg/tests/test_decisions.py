import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from doxa.decisions import (
    Posterior,
    Table,
    agreement_check,
    evaluate,
    satisfies_gstp,
    uniform_prior,
)
from doxa.errors import UndefinedAt, ValidationError, ZeroProbabilityConditioning
from doxa.frames import InfoStructure, StateSpace, blindspot_mask
from doxa.group import Profile, group_rows
from doxa.search import GeneratorConfig, mirrored_model, random_agreement_instance

SP2 = StateSpace.of_size(2)
SP4 = StateSpace(("1", "2", "3", "4"))


def half() -> Posterior:
    return Posterior(SP2, uniform_prior(SP2), SP2.mask_of(["w2"]))


# -- evaluation -------------------------------------------------------------------


def test_posterior_evaluation():
    f = half()
    assert evaluate(f, SP2.event(["w2"])) == 1
    assert evaluate(f, SP2.omega) == Fraction(1, 2)
    g = Posterior(SP2, (Fraction(0), Fraction(1)), SP2.mask_of(["w2"]))
    with pytest.raises(ZeroProbabilityConditioning):
        evaluate(g, SP2.event(["w1"]))


def test_posterior_validation():
    with pytest.raises(ValidationError):
        Posterior(SP2, (Fraction(1, 2), Fraction(2, 5)), 0)
    with pytest.raises(ValidationError):
        Posterior(SP2, (Fraction(3, 2), Fraction(-1, 2)), 0)


def test_table_evaluation():
    t = Table.from_events(SP2, [(["w1"], 1), (["w1", "w2"], "buy")])
    assert evaluate(t, SP2.event(["w1"])) == 1
    assert evaluate(t, SP2.omega) == "buy"
    with pytest.raises(UndefinedAt):
        evaluate(t, SP2.event(["w2"]))
    assert evaluate(Table.constant(SP2, Fraction(2, 4)), SP2.empty) == Fraction(1, 2)


def test_decision_values_reject_floats():
    with pytest.raises(ValidationError):
        Table.constant(SP2, 0.5)


# -- sure-thing principle -----------------------------------------------------------


def test_gstp_partition_equal_posteriors():
    sp = StateSpace.of_size(4)
    info = InfoStructure.from_partition(sp, [["w1", "w2"], ["w3", "w4"]])
    f = Posterior(sp, uniform_prior(sp), sp.mask_of(["w1", "w3"]))
    res = satisfies_gstp(f, info)
    assert res.holds and res.mode == "exhaustive"


def test_gstp_constant_table():
    assert satisfies_gstp(Table.constant(SP4, "x"), InfoStructure.identity(SP4))


def test_gstp_constructed_violation():
    sp = StateSpace(("a", "b"))
    f = Table.from_events(sp, [(["a"], 1), (["b"], 1), (["a", "b"], 0)])
    res = satisfies_gstp(f, InfoStructure.identity(sp))
    assert not res.holds
    s, d = res.counterexample
    assert s.labels == ("a", "b") and d == 1


def test_gstp_errors_carry_subset():
    f = Table.from_events(SP2, [(["w1"], 1), (["w2"], 1)])
    with pytest.raises(UndefinedAt) as info:
        satisfies_gstp(f, InfoStructure.identity(SP2))
    assert info.value.context["subset"].labels == ("w1", "w2")


@st.composite
def gstp_cases(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    sp = StateSpace.of_size(n)
    sets = tuple(draw(st.lists(st.integers(1, (1 << n) - 1), min_size=n, max_size=n)))
    info = InfoStructure(sp, sets)
    if draw(st.booleans()):
        weights = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
        prior = tuple(Fraction(w, sum(weights)) for w in weights)
        f = Posterior(sp, prior, draw(st.integers(0, (1 << n) - 1)))
    else:
        values = draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
        f = Table(sp, dict(enumerate(values)))
    return f, info


def _oracle_f(f, n):
    if isinstance(f, Posterior):
        target = {k for k in range(n) if f.target >> k & 1}
        return lambda event: oracles.posterior(f.prior, target, event)
    return lambda event: f.entries[sum(1 << k for k in event)]


@settings(max_examples=300, deadline=None)
@given(gstp_cases())
def test_gstp_matches_all_subsets_oracle(case):
    f, info = case
    n = info.space.n
    assert satisfies_gstp(f, info).holds == oracles.gstp(_oracle_f(f, n), oracles.info_sets(info), n)


def test_gstp_sampled_mode_on_large_space():
    sp = StateSpace.of_size(14)
    cells = [[f"w{k}" for k in range(1, 8)], [f"w{k}" for k in range(8, 15)]]
    info = InfoStructure.from_partition(sp, cells)
    f = Posterior(sp, uniform_prior(sp), sp.mask_of(["w1", "w8"]))
    res = satisfies_gstp(f, info, samples=2000)
    assert res.holds and res.mode == "sampled"
    bad = Table(sp, {info.sets[0]: 1, info.sets[7]: 1, sp.full_mask: 0})
    res = satisfies_gstp(bad, info, samples=2000)
    assert not res.holds and res.mode == "sampled"


def test_gstp_counterexample_is_first_in_mask_order():
    # every two-element subset fails; the first one by mask order is {w1, w2}
    sp = StateSpace.of_size(3)
    entries = {1: 0, 2: 0, 4: 0}
    for mask in range(1, 8):
        entries.setdefault(mask, 1)
    res = satisfies_gstp(Table(sp, entries), InfoStructure.identity(sp))
    assert res.counterexample[0].labels == ("w1", "w2")


# -- agreement -----------------------------------------------------------------------


def test_agreement_without_common_information():
    p1 = InfoStructure.from_partition(SP4, [["1", "2"], ["3", "4"]])
    p2 = InfoStructure.from_partition(SP4, [["1", "2", "3"], ["4"]])
    f = Posterior(SP4, uniform_prior(SP4), SP4.mask_of(["1", "4"]))
    res = agreement_check(Profile(SP4, ("1", "2"), (p1, p2)), f, "1")
    assert res.decisions == {"1": Fraction(1, 2), "2": Fraction(1, 3)}
    assert res.decision_events["2"].labels == ("1", "2", "3")
    assert not res.common_information
    assert res.group_info == SP4.omega
    assert not res.hypotheses_hold and not res.theorem_violated


def test_agreement_shared_partition():
    p = InfoStructure.from_partition(SP4, [["1", "2"], ["3", "4"]])
    f = Posterior(SP4, uniform_prior(SP4), SP4.mask_of(["1", "4"]))
    res = agreement_check(Profile(SP4, ("1", "2"), (p, p)), f, "1")
    assert res.hypotheses_hold and res.conclusion
    assert res.decisions == {"1": Fraction(1, 2), "2": Fraction(1, 2)}


def test_agreement_mirrored_model():
    inst = mirrored_model()
    res = agreement_check(inst.profile, inst.decision, inst.state)
    assert res.decisions == {"1": Fraction(1), "2": Fraction(0)}
    assert res.hypotheses == {
        "divisible": True,
        "equal-blindspots": False,
        "gstp": True,
        "common-information": True,
    }
    assert res.violated_hypotheses == ("equal-blindspots",)
    assert not res.conclusion


def test_agreement_errors_name_player_and_state():
    sp = StateSpace.of_size(2)
    f = Posterior(sp, (Fraction(0), Fraction(1)), 1)
    ident = InfoStructure.identity(sp)
    with pytest.raises(ZeroProbabilityConditioning) as info:
        agreement_check(Profile(sp, ("1",), (ident,)), f, "w2")
    assert info.value.context["player"] == "1"
    assert info.value.context["state"] == "w1"


def _hypotheses_by_oracle(profile, f, state):
    """Recompute every hypothesis from the definitions."""
    n = profile.space.n
    fo = _oracle_f(f, n)
    w = profile.space.index(state)
    sets = [oracles.info_sets(s) for s in profile.structures]
    divisible = all(oracles.viable(s) and oracles.inclusive(s) and oracles.mutual(s) for s in sets)
    blind = {frozenset(oracles.blindspots(s, n)) for s in sets}
    gstp = all(oracles.gstp(fo, s, n) for s in sets)
    decisions = [fo(s[w]) for s in sets]
    events = [{v for v in range(n) if fo(s[v]) == d} for s, d in zip(sets, decisions)]
    common = oracles.group_set(profile.structures, w, n) <= set.intersection(*events)
    return divisible and len(blind) == 1 and gstp and common, decisions


def test_generated_instances_are_sound():
    for seed in range(150):
        inst = random_agreement_instance(GeneratorConfig(n=5, seed=seed, players=2 + seed % 2))
        res = agreement_check(inst.profile, inst.decision, inst.state)
        ok, decisions = _hypotheses_by_oracle(inst.profile, inst.decision, inst.state)
        assert ok and res.hypotheses_hold
        assert len(set(decisions)) == 1
        assert set(res.decisions.values()) == set(decisions)


def test_aumann_special_case():
    # no blindspots and a full-support prior: the classical setting
    rng = random.Random(7)
    checked = 0
    for _ in range(300):
        sp = StateSpace.of_size(5)
        structures = []
        for _ in range(2):
            labels = list(sp.labels)
            rng.shuffle(labels)
            cut = rng.randrange(1, 5)
            structures.append(InfoStructure.from_partition(sp, [labels[:cut], labels[cut:]]))
        weights = [rng.randint(1, 3) for _ in range(5)]
        prior = tuple(Fraction(x, sum(weights)) for x in weights)
        f = Posterior(sp, prior, rng.randrange(32))
        p = Profile(sp, ("1", "2"), tuple(structures))
        assert all(blindspot_mask(s.sets, sp.full_mask) == 0 for s in structures)
        res = agreement_check(p, f, rng.choice(sp.labels))
        assert res.divisible and res.equal_blindspots and all(res.gstp.values())
        if res.common_information:
            checked += 1
            assert res.conclusion
    assert checked > 0


def test_decision_events_cover_group_info_when_common():
    inst = mirrored_model()
    res = agreement_check(inst.profile, inst.decision, inst.state)
    rows = group_rows(inst.profile.structures)
    meet = res.decision_events["1"] & res.decision_events["2"]
    assert rows[0] & ~meet.mask == 0
