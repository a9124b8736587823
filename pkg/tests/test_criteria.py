from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from isopoint.atlas import NamedSubgroupKind, build_named, enumerate_subgroups_cns_plus, nonresidues
from isopoint.criteria import (RULES, ImageClass, Outcome, RamificationData, RuleVerdict, admissible_f,
                               level_lowering_ok, no_split_eigenvalues_in_cns, replay_step,
                               riemann_roch_eliminates, semi_cartan_embeds, supersingular_forced,
                               tame_inertia_compatible)
from isopoint.degrees import degree_profile
from isopoint.facts import FACTS
from isopoint.gl2_core import Mat2

BIG = [11, 17, 19, 23, 29, 31, 37, 41, 43, 47]


@pytest.mark.parametrize("ell,want", [(37, {1, 2, 3, 4, 6}), (11, {1, 2}), (13, {1, 2, 3, 4, 6}), (17, {1, 2, 4})])
def test_admissible_f(ell, want):
    assert admissible_f(ell) == want
    assert all(f < 5 or f == 6 for f in want)


def test_ramification_data():
    assert RamificationData.of(13, 6) == RamificationData(6, 6)
    assert RamificationData.of(11, 4).f == 2
    with pytest.raises(ValueError):
        RamificationData.of(11, 5)


def test_semi_cartan_13():
    r = semi_cartan_embeds(13, 6)
    assert r.embeds and r.subgroup_order == 2
    m = r.witness
    assert m.trace == 0 and m.det == 12 and m.order() == 2
    assert m in build_named(NamedSubgroupKind("NonsplitCartanNormalizer", 13))
    assert m not in build_named(NamedSubgroupKind("NonsplitCartan", 13))


@pytest.mark.parametrize("ell", BIG)
def test_semi_cartan_never_embeds(ell):
    for f in admissible_f(ell):
        assert not semi_cartan_embeds(ell, f).embeds


@pytest.mark.parametrize("ell", BIG + [13])
def test_epsilon_independence(ell):
    e1, e2 = nonresidues(ell)[:2]
    for f in admissible_f(ell):
        assert semi_cartan_embeds(ell, f, e1).embeds == semi_cartan_embeds(ell, f, e2).embeds


@pytest.mark.parametrize("ell", [17, 19, 23, 29, 31, 37, 41, 43, 47])
def test_d_f_order_above_two(ell):
    for f in admissible_f(ell):
        assert build_named(NamedSubgroupKind("SemiCartanPower", ell, f=f)).order == (ell - 1) // f > 2


def test_semi_cartan_rejects_bad_f():
    with pytest.raises(ValueError):
        semi_cartan_embeds(11, 3)


def test_semi_cartan_by_subgroup_scan():
    # cross-check: some enumerated subgroup of C+_ns(13) is conjugate to D^6, none to larger D^f
    for f, want in [(6, True), (4, False), (2, False)]:
        h = (13 - 1) // f
        found = False
        for g in enumerate_subgroups_cns_plus(13):
            if g.order != h:
                continue
            d = sorted(zip(g.traces().tolist(), g.dets().tolist()))
            target = sorted(((1 + pow(2, f * k, 13)) % 13, pow(2, f * k, 13)) for k in range(h))
            found |= d == target
        assert found == want


@pytest.mark.parametrize("ell", [5, 7, 11, 13, 17, 19, 23, 29, 31, 37])
def test_no_split_eigenvalues(ell):
    assert no_split_eigenvalues_in_cns(ell)


def test_supersingular_forced():
    assert supersingular_forced(11).forced
    r = supersingular_forced(13)
    assert r.forced and r.override
    assert r.verdict().outcome is Outcome.SURVIVES
    assert supersingular_forced(37).forced
    assert supersingular_forced(7).forced is None
    assert supersingular_forced(7).verdict().outcome is Outcome.NOT_APPLICABLE


def test_level_lowering():
    v = level_lowering_ok(ImageClass.SURJECTIVE, 11, 2)
    assert v.outcome is Outcome.DESCENDS and FACTS.citation("level_lowering") in v.citations
    v = level_lowering_ok(ImageClass.BOREL, 37, 3)
    assert v.outcome is Outcome.DESCENDS and FACTS.citation("greenberg") in v.citations
    assert v.witnesses["covering_degree"] == 37 ** 4
    v = level_lowering_ok(ImageClass.NONSPLIT_CARTAN_NORMALIZER, 19)
    assert v.outcome is Outcome.DESCENDS and FACTS.citation("degree_formula") in v.citations
    assert level_lowering_ok(ImageClass.EXCEPTIONAL, 13).outcome is Outcome.DESCENDS
    assert level_lowering_ok(ImageClass.EXCEPTIONAL, 17).outcome is Outcome.NOT_APPLICABLE
    with pytest.raises(ValueError):
        level_lowering_ok("Cartan", 11)


def test_riemann_roch_examples():
    assert riemann_roch_eliminates(2, 1)
    assert riemann_roch_eliminates(8, 5)
    assert not riemann_roch_eliminates(1, 1)
    with pytest.raises(ValueError):
        riemann_roch_eliminates(1, -1)


@given(st.integers(1, 200), st.integers(0, 100), st.integers(0, 20))
def test_riemann_roch_monotone(d, g, k):
    if riemann_roch_eliminates(d, g):
        assert riemann_roch_eliminates(d + k, g)
        assert riemann_roch_eliminates(d, max(g - k, 0))


def test_verdict_requires_provenance():
    with pytest.raises(ValueError):
        RuleVerdict("x", Outcome.SURVIVES)


def test_replay_step_roundtrip():
    v = level_lowering_ok(ImageClass.BOREL, 17, 2)
    assert replay_step(v.to_dict()) == v.outcome.value
    with pytest.raises(KeyError):
        replay_step({"rule_id": "nope", "inputs": {}})
    assert set(RULES) >= {"riemann_roch", "nonsplit_degree_bound", "dkm_x1_17_degree4"}


def test_fact_table():
    assert FACTS.mazur_borel_primes == frozenset({2, 3, 5, 7, 11, 17, 37})
    assert FACTS.nonsplit_degree_bound(11) == 10
    assert len(FACTS.borel_j(17)) == 2 and len(FACTS.borel_j(37)) == 2
    d = FACTS.to_dict()
    assert all(f["citation"] for f in d["rules"])
    assert all(j["citation"] for j in d["borel_j_invariants_17_37"])
    assert FACTS.borel_j(37)[0].value == 9317
    with pytest.raises(Exception):
        FACTS.version = "2"  # immutable


def test_tame_inertia_filter_on_cns_plus_11():
    full = build_named(NamedSubgroupKind("NonsplitCartanNormalizer", 11))
    assert tame_inertia_compatible(full, 11)
    small = [g for g in enumerate_subgroups_cns_plus(11) if g.label == "cns+@11:C5.w0"][0]
    assert not tame_inertia_compatible(small, 11)
    assert degree_profile(small).min_degree < Fraction(120, 12)
