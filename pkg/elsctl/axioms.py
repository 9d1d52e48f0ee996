
"""Falsification checkers for the axioms.

Each checker samples games from a seeded plan, instantiates the axiom's
finite quantifiers exhaustively (all S, all pairs, all permutations up to
n=6) and stops at the first violation. Trial k always draws from the stream
(seed, k), so any split of the trial range reproduces the serial report.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import utils
from .core import (
    additive_game,
    indicator_game,
    linear_combination,
    null_players,
    permute_game,
    replace_grand,
)
from .errors import DomainGuardFailed, NotLinear, PlayerCountTooSmall, UnknownAxiom
from .generators import generate_game
from .models import (
    CheckReport,
    Game,
    Permutation,
    ReducedGameKind,
    SamplePlan,
    SolutionRule,
    Verdict,
    Witness,
)
from .transforms import (
    comp_down_insider,
    comp_down_outsider,
    comp_up_residual,
    reduce_ac,
    reduce_f,
    reduce_hm,
    reduce_m,
)
from .values import extract_coefficients

logger = logging.getLogger(__name__)

MAX_REDRAWS = 100
EXHAUSTIVE_PERMUTATIONS = 6
SAMPLED_PERMUTATIONS = 50
TLB_RANDOM_GAMES = 16

Params = Dict[str, Any]


class Evaluation:
    """A sampled game with the rule's payoff on it computed once."""

    def __init__(self, rule: SolutionRule, v: Game) -> None:
        self.rule = rule
        self.v = v
        self._phi: Optional[np.ndarray] = None

    @property
    def phi(self) -> np.ndarray:
        if self._phi is None:
            self._phi = self.rule(self.v).pay
        return self._phi

    def pay(self, game: Game) -> np.ndarray:
        return self.rule(game).pay


Comparison = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class Axiom:
    name: str
    title: str
    cases: Callable[[Game, np.random.Generator, SamplePlan], Iterator[Params]]
    compare: Callable[[Evaluation, Params], Comparison]
    draw: Optional[Callable[[int, np.random.Generator, SamplePlan], Game]] = None
    one_sided: bool = False
    min_players: int = utils.MIN_PLAYERS


@dataclass
class TrialOutcome:
    witness: Optional[Witness] = None
    skipped: int = 0  # TLB fitting games outside the rule's domain
    trials_run: int = 0
    notes: Dict[str, Any] = field(default_factory=dict)
    error: Optional[DomainGuardFailed] = None


# --- shared helpers ---------------------------------------------------------


def _idx(mask: int, n: int) -> List[int]:
    return [p - 1 for p in utils.players_of(mask, n)]


def _vec(values: List[Any], exact: bool) -> np.ndarray:
    return utils.field_array(values, exact)


def _draw_uniform(n: int, rng: np.random.Generator, plan: SamplePlan) -> Game:
    return generate_game("uniform", n, rng, plan.low, plan.high, plan.exact)


def _random_t(rng: np.random.Generator, plan: SamplePlan) -> utils.Number:
    return utils.random_worth(rng, plan.t_low, plan.t_high, plan.exact)


def _deviation(expected: np.ndarray, actual: np.ndarray, one_sided: bool) -> utils.Number:
    if len(expected) == 0:
        return 0.0
    if one_sided:
        gap = max(e - a for e, a in zip(expected, actual))
        return gap if gap > 0 else gap * 0
    return utils.max_deviation(expected, actual)


def _scale(expected: np.ndarray) -> utils.Number:
    return max((abs(x) for x in expected), default=0)


# --- case generators and comparisons per axiom -------------------------------


def _single_case(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    yield {}


def _compare_E(ev: Evaluation, params: Params) -> Comparison:
    v = ev.v
    return _vec([v.total], v.exact), _vec([sum(ev.phi[1:], ev.phi[0])], v.exact)


def _cases_L(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    w = _draw_uniform(v.n, rng, plan)
    c = utils.random_worth(rng, -3, 3, plan.exact)
    c2 = utils.random_worth(rng, -3, 3, plan.exact)
    yield {"w": w, "c": c, "c2": c2}


def _compare_L(ev: Evaluation, params: Params) -> Comparison:
    w, c, c2 = params["w"], params["c"], params["c2"]
    combined = linear_combination([(c, ev.v), (c2, w)])
    expected = ev.phi * utils.to_field(c, ev.v.exact) + ev.pay(w) * utils.to_field(c2, ev.v.exact)
    return expected, ev.pay(combined)


def _cases_SYM(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    n = v.n
    if n <= EXHAUSTIVE_PERMUTATIONS:
        for image in itertools.permutations(range(1, n + 1)):
            yield {"perm": Permutation(image)}
    else:
        for _ in range(SAMPLED_PERMUTATIONS):
            yield {"perm": Permutation(tuple(int(x) + 1 for x in rng.permutation(n)))}


def _compare_SYM(ev: Evaluation, params: Params) -> Comparison:
    pi: Permutation = params["perm"]
    moved = ev.pay(permute_game(ev.v, pi))
    return ev.phi, moved[[pi(i) - 1 for i in range(1, ev.v.n + 1)]]


def _draw_additive(n: int, rng: np.random.Generator, plan: SamplePlan) -> Game:
    return generate_game("additive", n, rng, plan.low, plan.high, plan.exact)


def _compare_IGP(ev: Evaluation, params: Params) -> Comparison:
    return ev.v.singletons(), ev.phi


def _compare_RNP(ev: Evaluation, params: Params) -> Comparison:
    return ev.phi, ev.pay(additive_game(ev.phi))


def _cases_t(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    yield {"t": v.total}
    yield {"t": utils.to_field(0, plan.exact)}
    yield {"t": _random_t(rng, plan)}


def _provisional(ev: Evaluation, params: Params) -> np.ndarray:
    return ev.pay(replace_grand(ev.v, params["t"]))


def _compare_CU(ev: Evaluation, params: Params) -> Comparison:
    x = _provisional(ev, params)
    return ev.phi, x + ev.pay(comp_up_residual(x, ev.v))


def _compare_CDI(ev: Evaluation, params: Params) -> Comparison:
    x = _provisional(ev, params)
    return ev.phi, ev.pay(comp_down_insider(x, ev.v))


def _compare_CDO(ev: Evaluation, params: Params) -> Comparison:
    x = _provisional(ev, params)
    return ev.phi, ev.pay(comp_down_outsider(x, ev.v))


def _cases_AC(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    for S in range(1, v.grand):
        yield {"S": S}


def _compare_AC(ev: Evaluation, params: Params) -> Comparison:
    S = params["S"]
    idx = _idx(S, ev.v.n)
    reduced = reduce_ac(ev.phi, ev.v, S)
    return ev.phi[idx], ev.pay(reduced)[idx]


def _cases_CM(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    for T in range(1, v.grand + 1):
        if plan.exact:
            delta: utils.Number = Fraction(int(rng.integers(1, 41)), 8)
        else:
            delta = float(rng.uniform(1e-3, 5.0))
        yield {"T": T, "delta": delta}


def _compare_CM(ev: Evaluation, params: Params) -> Comparison:
    v, T = ev.v, params["T"]
    raised = v + indicator_game(v.n, T, v.exact).scaled(params["delta"])
    idx = _idx(T, v.n)
    return ev.phi[idx], ev.pay(raised)[idx]


def _draw_two_active(n: int, rng: np.random.Generator, plan: SamplePlan) -> Game:
    i, j = sorted(int(x) + 1 for x in rng.choice(n, size=2, replace=False))
    return generate_game("two_active", n, rng, plan.low, plan.high, plan.exact, i=i, j=j)


def _cases_EG(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    null = null_players(v)
    for i, j in itertools.combinations(range(1, v.n + 1), 2):
        others = v.grand ^ utils.mask_of((i, j))
        if others & null == others:
            yield {"i": i, "j": j}


def _compare_EG(ev: Evaluation, params: Params) -> Comparison:
    i, j = params["i"] - 1, params["j"] - 1
    singles = ev.v.singletons()
    return _vec([ev.phi[i] - singles[i]], ev.v.exact), _vec([ev.phi[j] - singles[j]], ev.v.exact)


def _draw_single_active(n: int, rng: np.random.Generator, plan: SamplePlan) -> Game:
    i = int(rng.integers(1, n + 1))
    return generate_game("single_active", n, rng, plan.low, plan.high, plan.exact, i=i)


def _cases_MR(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    null = null_players(v)
    for i in range(1, v.n + 1):
        others = v.grand ^ utils.bit(i)
        if others & null == others:
            yield {"i": i}


def _compare_MR(ev: Evaluation, params: Params) -> Comparison:
    return _vec([ev.v.total], ev.v.exact), _vec([ev.phi[params["i"] - 1]], ev.v.exact)


def _cases_NGC(v: Game, rng: np.random.Generator, plan: SamplePlan) -> Iterator[Params]:
    for S in range(1, v.grand + 1):
        if utils.size(S) >= 2:
            yield {"S": S}


_REDUCERS = {
    ReducedGameKind.HM: reduce_hm,
    ReducedGameKind.F: reduce_f,
    ReducedGameKind.M: reduce_m,
}


def _ngc_compare(kind: ReducedGameKind) -> Callable[[Evaluation, Params], Comparison]:
    reducer = _REDUCERS[kind]

    def compare(ev: Evaluation, params: Params) -> Comparison:
        S = params["S"]
        idx = _idx(S, ev.v.n)
        return ev.phi[idx], ev.pay(reducer(ev.rule, ev.v, S))[idx]

    return compare


def _marginal_differences(v: Game, i: int, j: int) -> np.ndarray:
    """(v(S u i) - v(S u j)) over S within N minus {i, j}, in mask order."""
    rest = [p for p in range(1, v.n + 1) if p not in (i, j)]
    subsets = [utils.mask_of(c) for r in range(len(rest) + 1) for c in itertools.combinations(rest, r)]
    subsets.sort()
    bi, bj = utils.bit(i), utils.bit(j)
    return np.array([v.worth[S | bi] - v.worth[S | bj] for S in subsets],
                    dtype=object if v.exact else float)


def _bargaining_gap(ev: Evaluation, i: int, j: int) -> utils.Number:
    reduced = ev.pay(reduce_ac(ev.phi, ev.v, utils.mask_of((i, j))))
    return reduced[i - 1] - reduced[j - 1]


def _compare_TLB(ev: Evaluation, params: Params) -> Comparison:
    i, j = params["i"], params["j"]
    d = utils.to_float_array(_marginal_differences(ev.v, i, j))
    predicted = float(np.dot(np.asarray(params["gamma"], dtype=float), d))
    return np.array([predicted]), np.array([float(_bargaining_gap(ev, i, j))])


AXIOMS: Dict[str, Axiom] = {
    "E": Axiom("E", "efficiency", _single_case, _compare_E),
    "L": Axiom("L", "linearity", _cases_L, _compare_L),
    "SYM": Axiom("SYM", "symmetry", _cases_SYM, _compare_SYM),
    "IGP": Axiom("IGP", "inessential game property", _single_case, _compare_IGP,
                 draw=_draw_additive),
    "RNP": Axiom("RNP", "renegotiation-proofness", _single_case, _compare_RNP),
    "CU": Axiom("CU", "composition up", _cases_t, _compare_CU),
    "CDI": Axiom("CDI", "insider-guaranteed composition down", _cases_t, _compare_CDI),
    "CDO": Axiom("CDO", "outsider-guaranteed composition down", _cases_t, _compare_CDO),
    "AC": Axiom("AC", "active-player consistency", _cases_AC, _compare_AC),
    "TLB": Axiom("TLB", "two-person linear bargaining", _single_case, _compare_TLB),
    "CM": Axiom("CM", "coalitional monotonicity", _cases_CM, _compare_CM, one_sided=True),
    "EG": Axiom("EG", "equal gain for two players", _cases_EG, _compare_EG, draw=_draw_two_active),
    "MR": Axiom("MR", "minimal right", _cases_MR, _compare_MR,
                draw=_draw_single_active),
    "HM-NGC": Axiom("HM-NGC", "nullified-game consistency (HM)", _cases_NGC,
                    _ngc_compare(ReducedGameKind.HM), min_players=3),
    "F-NGC": Axiom("F-NGC", "nullified-game consistency (F)", _cases_NGC,
                   _ngc_compare(ReducedGameKind.F), min_players=3),
    "M-NGC": Axiom("M-NGC", "nullified-game consistency (M)", _cases_NGC,
                   _ngc_compare(ReducedGameKind.M), min_players=3),
}


def get_axiom(name: str) -> Axiom:
    key = name.upper()
    if key.endswith("NGC") and "-" not in key:
        key = key[:-3] + "-NGC"
    if key in ("CD_I", "CD_O"):
        key = key.replace("_", "")
    try:
        return AXIOMS[key]
    except KeyError:
        raise UnknownAxiom(f"unknown axiom {name!r} (known: {', '.join(AXIOMS)})") from None


# --- trial runner -----------------------------------------------------------


def _draw_accepted(axiom: Axiom, rule: SolutionRule, n: int, rng: np.random.Generator,
                   plan: SamplePlan) -> Game:
    draw = axiom.draw or _draw_uniform
    reason = None
    v = None
    for _ in range(MAX_REDRAWS):
        v = draw(n, rng, plan)
        reason = rule.rejection(v)
        if reason is None:
            return v
    raise DomainGuardFailed(f"{rule.name}: no admissible game in {MAX_REDRAWS} draws ({reason})",
                            game=v)


def _check_players(axiom: Axiom, plan: SamplePlan) -> None:
    if plan.n_min < axiom.min_players:
        raise PlayerCountTooSmall(f"{axiom.name} needs n >= {axiom.min_players}, got n={plan.n_min}")


def run_trials(axiom: Axiom, rule: SolutionRule, plan: SamplePlan,
               start: int = 0, stop: Optional[int] = None) -> TrialOutcome:
    """Run trials start..stop-1; stop at the first violation."""
    _check_players(axiom, plan)
    stop = plan.trials if stop is None else stop
    outcome = TrialOutcome()
    for trial in range(start, stop):
        rng = utils.trial_rng(plan.seed, trial)
        n = plan.players_for_trial(trial)
        v = _draw_accepted(axiom, rule, n, rng, plan)
        ev = Evaluation(rule, v)
        outcome.trials_run += 1
        for params in axiom.cases(v, rng, plan):
            try:
                expected, actual = axiom.compare(ev, params)
            except DomainGuardFailed as e:
                raise DomainGuardFailed(
                    f"{axiom.name}/{rule.name} trial {trial}: derived game outside the rule's domain ({e})",
                    game=e.game,
                ) from e
            deviation = _deviation(expected, actual, axiom.one_sided)
            if utils.exceeds(deviation, _scale(expected), plan.check_tol):
                logger.info("%s violated by %s at trial %d (deviation %s)", axiom.name, rule.name,
                            trial, utils.format_number(deviation))
                outcome.witness = Witness(v, params, expected, actual, deviation, trial)
                return outcome
    return outcome


def report_from(axiom: Axiom, rule: SolutionRule, plan: SamplePlan,
                outcome: TrialOutcome) -> CheckReport:
    verdict = Verdict.VIOLATED if outcome.witness is not None else Verdict.PASSED_SAMPLE
    return CheckReport(axiom=axiom.name, rule=rule.name, verdict=verdict, trials=plan.trials,
                       seed=plan.seed, skipped=outcome.skipped, witness=outcome.witness,
                       notes=dict(outcome.notes))


def finish_report(axiom: Axiom, rule: SolutionRule, plan: SamplePlan,
                  outcome: TrialOutcome) -> CheckReport:
    if axiom.name == "CM":
        outcome.notes["certificate"] = _cm_certificate(rule, plan)
    return report_from(axiom, rule, plan, outcome)


def run_check(axiom: Axiom, rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    if axiom.name == "TLB":
        return check_TLB(rule, plan)
    return finish_report(axiom, rule, plan, run_trials(axiom, rule, plan))


def check(name: str, rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return run_check(get_axiom(name), rule, plan)


def replay_witness(rule: SolutionRule, report: CheckReport) -> utils.Number:
    """Recompute a violated witness; returns the deviation it reproduces."""
    if report.witness is None:
        raise ValueError(f"{report.axiom} report for {report.rule} carries no witness")
    axiom = get_axiom(report.axiom)
    w = report.witness
    expected, actual = axiom.compare(Evaluation(rule, w.game), w.params)
    return _deviation(expected, actual, axiom.one_sided)


# --- checkers ---------------------------------------------------------------


def check_E(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("E", rule, plan)


def check_L(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("L", rule, plan)


def check_SYM(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("SYM", rule, plan)


def check_IGP(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("IGP", rule, plan)


def check_RNP(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("RNP", rule, plan)


def check_CU(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("CU", rule, plan)


def check_CDI(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("CDI", rule, plan)


def check_CDO(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("CDO", rule, plan)


def check_AC(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("AC", rule, plan)


def check_CM(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("CM", rule, plan)


def check_EG(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("EG", rule, plan)


def check_MR(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check("MR", rule, plan)


def check_NGC(kind: Any, rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    return check(f"{ReducedGameKind(kind).value}-NGC", rule, plan)


def _cm_certificate(rule: SolutionRule, plan: SamplePlan) -> Dict[str, Optional[bool]]:
    """p_s >= 0 for s < n when the rule has symmetric linear coefficients, else None."""
    out: Dict[str, Optional[bool]] = {}
    for n in plan.n_values:
        try:
            coeffs = extract_coefficients(rule, n, plan.exact, seed=plan.seed)
        except NotLinear:
            out[str(n)] = None
            continue
        if not coeffs.symmetric:
            out[str(n)] = None
            continue
        floor = 0 if plan.exact else -plan.check_tol
        out[str(n)] = bool(all(p >= floor for p in coeffs.p[:-1]))
    return out


def _tlb_fit_games(n: int, plan: SamplePlan) -> List[Game]:
    rng = utils.trial_rng(plan.seed, n, 1)
    basis = [indicator_game(n, S, plan.exact) for S in range(1, 1 << n)]
    return basis + [_draw_uniform(n, rng, plan) for _ in range(TLB_RANDOM_GAMES)]


def _tlb_rows(rule: SolutionRule, games: List[Game], i: int, j: int,
              skipped: List[int]) -> Tuple[List[Game], np.ndarray, np.ndarray]:
    used, rows, targets = [], [], []
    for g in games:
        ev = Evaluation(rule, g)
        try:
            gap = _bargaining_gap(ev, i, j)
        except DomainGuardFailed:
            skipped[0] += 1
            continue
        used.append(g)
        rows.append(utils.to_float_array(_marginal_differences(g, i, j)))
        targets.append(float(gap))
    return used, np.array(rows), np.array(targets)


def _tlb_violation(rule: SolutionRule, games: List[Game], D: np.ndarray, y: np.ndarray,
                   gamma: np.ndarray, i: int, j: int, plan: SamplePlan, trial: int,
                   source: str) -> Optional[Witness]:
    if len(y) == 0:
        return None
    predicted = D @ gamma
    gaps = np.abs(predicted - y)
    worst = int(np.argmax(gaps))
    if not utils.exceeds(float(gaps[worst]), predicted[worst], plan.check_tol):
        return None
    params = {"i": i, "j": j, "gamma": [float(g) for g in gamma], "source": source}
    return Witness(games[worst], params, np.array([predicted[worst]]), np.array([y[worst]]),
                   float(gaps[worst]), trial)


def check_TLB(rule: SolutionRule, plan: SamplePlan) -> CheckReport:
    """Fit gamma^{i,j} by least squares on a spanning set and test it on fresh games."""
    axiom = AXIOMS["TLB"]
    skipped = [0]
    gammas: Dict[str, List[float]] = {}
    witness = None
    for n in plan.n_values:
        fit_games = _tlb_fit_games(n, plan)
        fresh = []
        for trial in range(plan.trials):
            if plan.players_for_trial(trial) == n:
                rng = utils.trial_rng(plan.seed, trial)
                fresh.append((trial, _draw_accepted(axiom, rule, n, rng, plan)))
        fitted = False
        for i, j in itertools.combinations(range(1, n + 1), 2):
            used, D, y = _tlb_rows(rule, fit_games, i, j, skipped)
            if len(y) == 0:
                continue
            fitted = True
            gamma = np.linalg.lstsq(D, y, rcond=None)[0]
            if (i, j) == (1, 2):
                gammas[str(n)] = [float(g) for g in gamma]
            witness = _tlb_violation(rule, used, D, y, gamma, i, j, plan, -1, "fit")
            if witness is None and fresh:
                games = [g for _, g in fresh]
                used_fresh, D2, y2 = _tlb_rows(rule, games, i, j, skipped)
                witness = _tlb_violation(rule, used_fresh, D2, y2, gamma, i, j, plan, -1, "fresh")
                if witness is not None:
                    trial = next(t for t, g in fresh if g is witness.game)
                    witness = Witness(witness.game, witness.params, witness.expected,
                                      witness.actual, witness.deviation, trial)
            if witness is not None:
                logger.info("TLB violated by %s for pair (%d,%d) on a %s game", rule.name, i, j,
                            witness.params["source"])
                break
        if not fitted:
            rejected = next((g for g in fit_games if rule.rejection(g) is not None), None)
            raise DomainGuardFailed(f"TLB/{rule.name}: no fitting game for n={n} is inside the rule's domain",
                                    game=rejected)
        if witness is not None:
            break
    outcome = TrialOutcome(witness=witness, skipped=skipped[0], notes={"gamma": gammas})
    return report_from(axiom, rule, plan, outcome)


CHECKERS: Dict[str, Callable[[SolutionRule, SamplePlan], CheckReport]] = {
    "E": check_E,
    "L": check_L,
    "SYM": check_SYM,
    "IGP": check_IGP,
    "RNP": check_RNP,
    "CU": check_CU,
    "CDI": check_CDI,
    "CDO": check_CDO,
    "AC": check_AC,
    "TLB": check_TLB,
    "CM": check_CM,
    "EG": check_EG,
    "MR": check_MR,
    "HM-NGC": lambda rule, plan: check_NGC("HM", rule, plan),
    "F-NGC": lambda rule, plan: check_NGC("F", rule, plan),
    "M-NGC": lambda rule, plan: check_NGC("M", rule, plan),
}
