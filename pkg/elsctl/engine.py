
import logging
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Union

from . import axioms, theorems, utils
from .config import RunConfig
from .errors import UnknownRule
from .generators import generate_game
from .models import (
    AffineWeights,
    Allocation,
    CheckReport,
    Game,
    LSWeights,
    SigmaWeights,
    SolutionRule,
    SuiteResult,
)
from .storage import load_weights, parse_number
from .values import (
    CIS,
    ED,
    ENSC,
    SHAPLEY,
    affine_combination_rule,
    dictator_rule,
    least_square_rule,
    marginal_rule,
    mix_rule,
    power_rule,
    prop_division_rule,
    psi_rule,
    sigma_shapley_rule,
    standalone_rule,
)

logger = logging.getLogger(__name__)

RuleLike = Union[str, SolutionRule]

RULES = (
    "ed", "cis", "ensc", "shapley", "psi:s", "sigma-shapley:file|list", "affine:file|list",
    "least-square:file|list", "standalone", "marginal", "dictator:i", "propdiv", "power:alpha", "mix:beta",
)


def _required(name: str, arg: str) -> str:
    if not arg:
        raise UnknownRule(f"rule {name!r} needs a parameter ({name}:...)")
    return arg


def _integer(name: str, arg: str) -> int:
    try:
        return int(_required(name, arg))
    except ValueError as e:
        raise UnknownRule(f"rule {name!r} needs an integer parameter, got {arg!r}") from e


def _exponent(arg: str) -> Any:
    value = parse_number(arg, exact=True)
    return int(value) if value.denominator == 1 else float(value)


def build_rule(spec: str, exact: bool = False, tol: float = utils.TOL,
               cond_limit: float = utils.COND_LIMIT) -> SolutionRule:
    """Registry lookup: "name" or "name:parameter" to a SolutionRule."""
    name, _, arg = spec.strip().partition(":")
    name = name.lower()
    plain: Dict[str, Callable[[], SolutionRule]] = {
        "ed": lambda: ED,
        "cis": lambda: CIS,
        "ensc": lambda: ENSC,
        "shapley": lambda: SHAPLEY,
        "standalone": standalone_rule,
        "marginal": marginal_rule,
        "propdiv": lambda: prop_division_rule(tol),
    }
    if name in plain:
        if arg:
            raise UnknownRule(f"rule {name!r} takes no parameter")
        return plain[name]()
    if name == "psi":
        return psi_rule(_integer(name, arg))
    if name == "dictator":
        return dictator_rule(_integer(name, arg) if arg else 1)
    if name == "power":
        return power_rule(_exponent(_required(name, arg)))
    if name == "mix":
        beta = parse_number(arg, exact) if arg else utils.to_field(Fraction(1, 2), exact)
        return mix_rule(beta)
    if name == "sigma-shapley":
        weights, _ = load_weights(_required(name, arg), exact)
        return sigma_shapley_rule(SigmaWeights(weights))
    if name == "affine":
        weights, _ = load_weights(_required(name, arg), exact)
        return affine_combination_rule(AffineWeights(weights), tol)
    if name == "least-square":
        weights, m0 = load_weights(_required(name, arg), exact)
        m = LSWeights(weights, m0 if m0 is not None else 0)
        return least_square_rule(m, include_empty=m0 is not None, cond_limit=cond_limit)
    raise UnknownRule(f"unknown rule {spec!r} (known: {', '.join(RULES)})")


class CheckEngine:
    """Runs value, check, gen and verify commands under one RunConfig."""

    def __init__(self, run: RunConfig) -> None:
        self.run = run

    def rule(self, spec: RuleLike) -> SolutionRule:
        if isinstance(spec, SolutionRule):
            return spec
        return build_rule(spec, self.run.exact, self.run.tol, self.run.cond_limit)

    def value(self, v: Game, spec: RuleLike) -> Allocation:
        if self.run.exact and not v.exact:
            v = v.as_exact()
        return self.rule(spec)(v)

    def check(self, spec: RuleLike, axiom: str) -> CheckReport:
        rule = self.rule(spec)
        plan = self.run.to_plan()
        target = axioms.get_axiom(axiom)
        if self.run.workers > 1 and target.name != "TLB" and rule.spec is not None:
            from .worker import parallel_check

            logger.debug("checking %s/%s on %d workers", rule.name, target.name, self.run.workers)
            return parallel_check(target, rule, plan, self.run.workers, self.run.tol, self.run.cond_limit)
        return axioms.run_check(target, rule, plan)

    def replay(self, spec: RuleLike, report: CheckReport) -> utils.Number:
        return axioms.replay_witness(self.rule(spec), report)

    def generate(self, name: str, n: Optional[int] = None, **params: Any) -> Game:
        n = self.run.n_min if n is None else n
        return generate_game(name, n, self.run.seed, exact=self.run.exact, **params)

    def verify(self, theorem: str) -> List[SuiteResult]:
        return theorems.verify(theorem, self.run.to_plan())
