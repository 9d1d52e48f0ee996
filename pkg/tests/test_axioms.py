# tests/test_axioms.py
"""
Axiom checkers:
- known passes (Shapley on E, SYM, CU, AC, EG, MR, HM-NGC, TLB)
- known violations carry a witness that replays to the same deviation
- CM certificates for least-square and negative-coefficient rules
- exact mode, determinism and name handling
- guard failures on sampled and derived games propagate with the game
"""

from fractions import Fraction
from typing import Optional

import pytest

from elsctl import utils
from elsctl.axioms import AXIOMS, check, check_NGC, get_axiom, replay_witness
from elsctl.errors import DomainGuardFailed, PlayerCountTooSmall, UnknownAxiom
from elsctl.models import AffineWeights, LSWeights, SamplePlan, SolutionRule, Verdict
from elsctl.values import (
    CIS,
    ED,
    SHAPLEY,
    affine_combination_rule,
    dictator_rule,
    least_square_rule,
    mix_rule,
    power_rule,
    prop_division_rule,
    psi_rule,
    standalone_rule,
)


@pytest.mark.parametrize("axiom", ["E", "L", "SYM", "RNP", "CU", "CDI", "CDO", "AC", "EG", "MR"])
def test_shapley_passes(axiom, small_plan) -> None:
    report = check(axiom, SHAPLEY, small_plan)
    assert report.verdict == Verdict.PASSED_SAMPLE
    assert report.witness is None
    assert report.trials == small_plan.trials


def test_shapley_passes_ngc_and_tlb() -> None:
    plan = SamplePlan(trials=4, n_min=3, n_max=3, seed=1)
    assert check("HM-NGC", SHAPLEY, plan).passed
    assert check("TLB", SHAPLEY, plan).passed
    assert check_NGC("F", CIS, plan).passed


@pytest.mark.parametrize(
    "axiom, rule",
    [
        ("E", standalone_rule()),
        ("AC", ED),
        ("CU", mix_rule(0.5)),
        ("CDI", mix_rule(0.25)),
        ("CDO", prop_division_rule()),
        ("SYM", dictator_rule(1)),
        ("EG", dictator_rule(1)),
        ("F-NGC", SHAPLEY),
    ],
)
def test_violations_replay(axiom, rule, small_plan) -> None:
    report = check(axiom, rule, small_plan)
    assert report.verdict == Verdict.VIOLATED
    w = report.witness
    assert w is not None
    assert 0 <= w.trial < small_plan.trials
    assert replay_witness(rule, report) == pytest.approx(float(w.deviation))
    assert float(w.deviation) > small_plan.check_tol


def test_power_rule_breaks_linearity(small_plan) -> None:
    rule = power_rule(2)
    assert check("E", rule, small_plan).passed
    assert not check("L", rule, small_plan).passed
    assert not check("TLB", rule, small_plan).passed


def test_igp_for_psi(small_plan) -> None:
    for s in (1, 2):
        assert check("IGP", psi_rule(s), small_plan).passed
    assert not check("IGP", ED, small_plan).passed


def test_cm_certificates() -> None:
    plan = SamplePlan(trials=5, n_min=3, n_max=3, seed=4)
    ls = least_square_rule(LSWeights((1.0, 1.0, 1.0)))
    report = check("CM", ls, plan)
    assert report.passed
    assert report.notes["certificate"] == {"3": True}

    combo = affine_combination_rule(AffineWeights((2.0, -1.0, 0.0)))
    report = check("CM", combo, plan)
    assert not report.passed
    assert report.notes["certificate"] == {"3": False}


def test_exact_mode(exact_plan) -> None:
    for axiom in ("E", "CU", "CDO", "AC"):
        assert check(axiom, SHAPLEY, exact_plan).passed
    report = check("AC", ED, exact_plan)
    assert not report.passed
    assert isinstance(report.witness.deviation, Fraction)
    assert replay_witness(ED, report) == report.witness.deviation


def test_reports_are_deterministic(small_plan) -> None:
    a = check("CU", mix_rule(0.75), small_plan)
    b = check("CU", mix_rule(0.75), small_plan)
    assert a.witness.trial == b.witness.trial
    assert a.witness.deviation == b.witness.deviation
    assert a.witness.params == b.witness.params


def test_axiom_names() -> None:
    assert get_axiom("hm-ngc") is AXIOMS["HM-NGC"]
    assert get_axiom("mngc") is AXIOMS["M-NGC"]
    assert get_axiom("cd_i") is AXIOMS["CDI"]
    with pytest.raises(UnknownAxiom):
        get_axiom("XYZ")


def test_ngc_needs_three_players() -> None:
    plan = SamplePlan(trials=2, n_min=2, n_max=3)
    with pytest.raises(PlayerCountTooSmall):
        check("HM-NGC", SHAPLEY, plan)


def _no_additive_games(v) -> Optional[str]:
    if utils.close(v.total, sum(v.singletons())):
        return "additive game"
    return None


def test_derived_game_outside_domain_propagates(small_plan) -> None:
    rule = SolutionRule("ed-nonadditive", ED.evaluate, guard=_no_additive_games)
    with pytest.raises(DomainGuardFailed) as exc:
        check("RNP", rule, small_plan)
    assert "trial 0" in str(exc.value)
    derived = exc.value.game
    assert derived is not None
    assert utils.close(derived.total, sum(derived.singletons()))


def test_redraw_limit_propagates_last_draw(small_plan) -> None:
    rule = SolutionRule("nowhere", ED.evaluate, guard=lambda v: "empty domain")
    with pytest.raises(DomainGuardFailed, match="no admissible game") as exc:
        check("E", rule, small_plan)
    assert exc.value.game is not None
    assert exc.value.game.n == small_plan.players_for_trial(0)
    with pytest.raises(DomainGuardFailed):
        check("TLB", rule, SamplePlan(trials=2, n_min=3, n_max=3, seed=1))
