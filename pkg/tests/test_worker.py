# tests/test_worker.py
"""
Parallel trial chunks:
- chunks cover every trial exactly once, in order
- merging keeps the first witness and the skips a serial run would count
- a guard failure in an earlier chunk is raised, a later one is never reached
- a two-process check reports exactly what the serial check reports
"""

import pickle

import pytest

from elsctl.axioms import TrialOutcome
from elsctl.config import RunConfig
from elsctl.engine import CheckEngine
from elsctl.errors import DomainGuardFailed
from elsctl.storage import report_to_dict
from elsctl.worker import merge_outcomes, trial_chunks


def test_trial_chunks() -> None:
    assert trial_chunks(10, 3) == [(0, 4), (4, 7), (7, 10)]
    assert trial_chunks(2, 5) == [(0, 1), (1, 2)]
    assert trial_chunks(7, 1) == [(0, 7)]


def test_merge_outcomes() -> None:
    first_hit, later_hit = object(), object()
    merged = merge_outcomes([
        TrialOutcome(skipped=1, trials_run=3),
        TrialOutcome(witness=first_hit, skipped=2, trials_run=2),
        TrialOutcome(witness=later_hit, skipped=5, trials_run=3),
    ])
    assert merged.witness is first_hit
    assert merged.skipped == 3
    assert merged.trials_run == 5

    clean = merge_outcomes([TrialOutcome(skipped=1, trials_run=4), TrialOutcome(trials_run=4)])
    assert clean.witness is None and clean.skipped == 1 and clean.trials_run == 8


def test_merge_raises_first_guard_failure() -> None:
    failure = DomainGuardFailed("E/ed trial 5: derived game outside the rule's domain", game="g5")
    with pytest.raises(DomainGuardFailed) as exc:
        merge_outcomes([TrialOutcome(trials_run=4), TrialOutcome(error=failure), TrialOutcome(trials_run=4)])
    assert exc.value is failure

    hit = object()
    merged = merge_outcomes([TrialOutcome(witness=hit, trials_run=2), TrialOutcome(error=failure)])
    assert merged.witness is hit


def test_guard_failure_survives_pickling() -> None:
    copy = pickle.loads(pickle.dumps(DomainGuardFailed("propdiv: zero singleton sum", game=[0, 0, 1])))
    assert str(copy) == "propdiv: zero singleton sum"
    assert copy.game == [0, 0, 1]


@pytest.mark.parametrize("rule, axiom", [("mix", "CU"), ("shapley", "E"), ("propdiv", "CDO"), ("cis", "CM")])
def test_parallel_matches_serial(rule, axiom) -> None:
    base = dict(trials=8, n_min=3, n_max=4, seed=4)
    serial = CheckEngine(RunConfig(workers=1, **base)).check(rule, axiom)
    parallel = CheckEngine(RunConfig(workers=2, **base)).check(rule, axiom)
    assert report_to_dict(parallel) == report_to_dict(serial)
