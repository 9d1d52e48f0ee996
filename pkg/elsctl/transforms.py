
"""Composed and reduced games on the fixed player set.

Every transformation returns a game on the same N. The nullified-game
reductions (HM, F, M) take the rule itself because their worths depend on
the rule evaluated on nullified games, not only on the allocation phi(v).
"""

import logging
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from . import utils
from .core import additive_game, dual_game, nullified_game, replace_grand
from .errors import CoalitionTooSmall, NotProperSubset
from .models import Allocation, Game, ReducedGameKind, pay_vector

logger = logging.getLogger(__name__)

Rule = Callable[[Game], Allocation]


def _aligned(x: Any, v: Game) -> Tuple[np.ndarray, Game]:
    pay = pay_vector(x)
    if len(pay) != v.n:
        raise ValueError(f"allocation has {len(pay)} entries, game has {v.n} players")
    if utils.is_exact(pay) and v.exact:
        return pay, v
    return utils.to_float_array(pay), v.as_float()


def _build(n: int, values: np.ndarray, exact: bool) -> Game:
    return Game(n, utils.field_array(list(values), exact))


def comp_up_residual(x: Any, v: Game) -> Game:
    """U(x, v) = v - x_hat."""
    pay, v = _aligned(x, v)
    return Game(v.n, v.worth - additive_game(pay).worth)


def comp_down_insider(x: Any, v: Game) -> Game:
    """D_I(x, v): x_hat below N, v(N) at N."""
    pay, v = _aligned(x, v)
    worth = additive_game(pay).worth.copy()
    worth[v.grand] = v.total
    return Game(v.n, worth)


def comp_down_outsider(x: Any, v: Game) -> Game:
    """D_O(x, v)(S) = v(N) - x_hat(N minus S) for nonempty S."""
    pay, v = _aligned(x, v)
    x_hat = additive_game(pay).worth
    worth = v.total - x_hat[v.grand ^ utils.all_masks(v.n)]
    worth[0] = utils.to_field(0, v.exact)
    return Game(v.n, worth)


def reduce_ac(x: Any, v: Game, S: int) -> Game:
    """R^{AC,S}(x, v)(T) = v(T) - sum of x_i over T minus S."""
    if S == v.grand:
        raise NotProperSubset("active-player reduction needs S to be a proper subset of N")
    pay, v = _aligned(x, v)
    outside = pay.copy()
    outside[utils.membership(v.n)[:, S]] = utils.to_field(0, v.exact)
    return Game(v.n, v.worth - additive_game(outside).worth)


def _check_reduction(v: Game, S: int) -> None:
    if utils.size(S) < 2:
        raise CoalitionTooSmall(f"reduced games need |S| >= 2, got |S|={utils.size(S)}")


class _NullifiedPayoffs:
    """Outsider payoff sums on nullified games, memoized by the nullifying coalition."""

    def __init__(self, rule: Rule, v: Game, outside: int) -> None:
        self.rule = rule
        self.v = v
        self.outside = outside
        self._outsiders = [i for i in range(v.n) if (outside >> i) & 1]
        self._memo: Dict[int, utils.Number] = {}

    def __call__(self, U: int) -> utils.Number:
        if U not in self._memo:
            pay = self.rule(nullified_game(self.v, U)).pay
            self._memo[U] = sum((pay[j] for j in self._outsiders), utils.to_field(0, self.v.exact))
        return self._memo[U]

    def __len__(self) -> int:
        return len(self._memo)


def reduced_worth_hm(rule: Rule, v: Game, S: int, T: int,
                     payoffs: Optional[_NullifiedPayoffs] = None) -> utils.Number:
    """One entry of R^{HM,S}: v(T u out) minus the outsiders' payoffs in v|_{T u out}."""
    if T & S == 0:
        return utils.to_field(0, v.exact)
    outside = v.grand ^ S
    if payoffs is None:
        payoffs = _NullifiedPayoffs(rule, v, outside)
    U = (T & S) | outside
    return v.worth[U] - payoffs(U)


def _reduce_hm_unchecked(rule: Rule, v: Game, S: int) -> Game:
    payoffs = _NullifiedPayoffs(rule, v, v.grand ^ S)
    values = [reduced_worth_hm(rule, v, S, T, payoffs) for T in range(1 << v.n)]
    logger.debug("reduce_hm: %d nullified evaluations for S=%s", len(payoffs), bin(S))
    return _build(v.n, values, v.exact)


def reduce_hm(rule: Rule, v: Game, S: int) -> Game:
    _check_reduction(v, S)
    return _reduce_hm_unchecked(rule, v, S)


def _outsider_sum(rule: Rule, v: Game, S: int, source: Game) -> utils.Number:
    total = utils.to_field(0, v.exact)
    for j in utils.players_of(v.grand ^ S, v.n):
        total += rule(nullified_game(source, utils.bit(j))).pay[j - 1]
    return total


def reduce_f(rule: Rule, v: Game, S: int) -> Game:
    """R^{F,S}: v(N) minus outsiders' stand-alone payoffs on supersets of S, v(T & S) elsewhere."""
    _check_reduction(v, S)
    top = v.total - _outsider_sum(rule, v, S, v)
    masks = utils.all_masks(v.n)
    values = v.worth[masks & S].copy()
    values[(masks & S) == S] = top
    return _build(v.n, values, v.exact)


def reduce_m(rule: Rule, v: Game, S: int) -> Game:
    """R^{M,S}: v(T u out) minus outsiders' payoffs in the nullified dual singletons."""
    _check_reduction(v, S)
    outside = v.grand ^ S
    deduction = _outsider_sum(rule, v, S, dual_game(v))
    masks = utils.all_masks(v.n)
    values = v.worth[(masks & S) | outside] - deduction
    values[(masks & S) == 0] = utils.to_field(0, v.exact)
    return _build(v.n, values, v.exact)


def reduce_game(kind: Any, rule: Rule, v: Game, S: Optional[int] = None,
                t: Optional[Any] = None) -> Game:
    """Dispatch over the seven transformations.

    The composition kinds use rule(v^t) (rule(v) when t is None); AC uses rule(v).
    """
    kind = ReducedGameKind(kind)
    if kind in (ReducedGameKind.HM, ReducedGameKind.F, ReducedGameKind.M):
        if S is None:
            raise ValueError(f"{kind.value} reduction needs a coalition S")
        reducer = {ReducedGameKind.HM: reduce_hm, ReducedGameKind.F: reduce_f,
                   ReducedGameKind.M: reduce_m}[kind]
        return reducer(rule, v, S)
    if kind == ReducedGameKind.AC:
        if S is None:
            raise ValueError("AC reduction needs a coalition S")
        return reduce_ac(rule(v), v, S)
    x = rule(v if t is None else replace_grand(v, t))
    if kind == ReducedGameKind.COMP_UP:
        return comp_up_residual(x, v)
    if kind == ReducedGameKind.COMP_DOWN_INSIDER:
        return comp_down_insider(x, v)
    return comp_down_outsider(x, v)
