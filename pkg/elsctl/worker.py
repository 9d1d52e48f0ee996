
import logging
import multiprocessing
from typing import List, Tuple

from .axioms import Axiom, TrialOutcome, finish_report, get_axiom, run_trials
from .errors import DomainGuardFailed
from .engine import build_rule
from .models import CheckReport, SamplePlan, SolutionRule

logger = logging.getLogger(__name__)


def trial_chunks(trials: int, workers: int) -> List[Tuple[int, int]]:
    """Contiguous [start, stop) ranges covering 0..trials-1."""
    workers = max(1, min(workers, trials))
    size, extra = divmod(trials, workers)
    chunks, start = [], 0
    for k in range(workers):
        stop = start + size + (1 if k < extra else 0)
        chunks.append((start, stop))
        start = stop
    return chunks


def worker_main(rule_spec: str, axiom_name: str, plan: SamplePlan, tol: float, cond_limit: float,
                start: int, stop: int) -> TrialOutcome:
    # rules hold closures, so each process rebuilds its own from the registry
    rule = build_rule(rule_spec, plan.exact, tol, cond_limit)
    try:
        return run_trials(get_axiom(axiom_name), rule, plan, start, stop)
    except DomainGuardFailed as e:
        return TrialOutcome(error=e)


def merge_outcomes(outcomes: List[TrialOutcome]) -> TrialOutcome:
    """Replays chunks in trial order: the first witness or guard failure decides, as in a serial run."""
    merged = TrialOutcome()
    for outcome in outcomes:
        if outcome.error is not None:
            raise outcome.error
        merged.skipped += outcome.skipped
        merged.trials_run += outcome.trials_run
        if outcome.witness is not None:
            merged.witness = outcome.witness
            break
    return merged


def parallel_check(axiom: Axiom, rule: SolutionRule, plan: SamplePlan, workers: int,
                   tol: float, cond_limit: float) -> CheckReport:
    if rule.spec is None:
        raise ValueError(f"rule {rule.name} cannot be rebuilt in a worker process")
    chunks = trial_chunks(plan.trials, workers)
    jobs = [(rule.spec, axiom.name, plan, tol, cond_limit, start, stop) for start, stop in chunks]
    logger.debug("%s/%s: %d chunks over %d processes", rule.name, axiom.name, len(jobs), workers)
    with multiprocessing.Pool(processes=len(jobs)) as pool:
        outcomes = pool.starmap(worker_main, jobs)
    return finish_report(axiom, rule, plan, merge_outcomes(outcomes))
