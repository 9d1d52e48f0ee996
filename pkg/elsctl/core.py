
from typing import Any, Iterable, Tuple

import numpy as np

from . import utils
from .errors import CoalitionOutOfRange, EmptyCoalition, InvalidPermutation, MixedPlayerCount
from .models import Game, Permutation, pay_vector


def zero_game(n: int, exact: bool = False) -> Game:
    return Game(n, utils.zeros(1 << n, exact))


def _check_coalition(n: int, S: int) -> None:
    if S < 0 or S >= 1 << n:
        raise CoalitionOutOfRange(f"coalition {bin(S)} is not a subset of {n} players")


def indicator_game(n: int, S: int, exact: bool = False) -> Game:
    """e_S: worth 1 on S and 0 elsewhere."""
    n = utils.check_players(n)
    if S == 0:
        raise EmptyCoalition("indicator game of the empty coalition")
    _check_coalition(n, S)
    worth = utils.zeros(1 << n, exact)
    worth[S] = utils.to_field(1, exact)
    return Game(n, worth)


def unanimity_game(n: int, T: int, exact: bool = False) -> Game:
    n = utils.check_players(n)
    if T == 0:
        raise EmptyCoalition("unanimity game needs a nonempty carrier")
    _check_coalition(n, T)
    masks = utils.all_masks(n)
    hit = (masks & T) == T
    one, nil = utils.to_field(1, exact), utils.to_field(0, exact)
    worth = np.array([one if h else nil for h in hit], dtype=object if exact else float)
    return Game(n, worth)


def dual_game(v: Game) -> Game:
    masks = utils.all_masks(v.n)
    return Game(v.n, v.total - v.worth[v.grand ^ masks])


def additive_game(x: Any) -> Game:
    pay = pay_vector(x)
    n = len(pay)
    member = utils.membership(n)
    if utils.is_exact(pay):
        worth = np.array(
            [sum(pay[member[:, m]], utils.to_field(0, True)) for m in range(1 << n)],
            dtype=object,
        )
        return Game(n, worth)
    return Game(n, member.T.astype(float) @ pay)


def permute_game(v: Game, pi: Permutation) -> Game:
    """pi v with (pi v)(pi S) = v(S)."""
    if pi.n != v.n:
        raise InvalidPermutation(f"permutation on {pi.n} players applied to a game on {v.n}")
    worth = utils.zeros(1 << v.n, v.exact)
    worth[pi.mask_map()] = v.worth
    return Game(v.n, worth)


def replace_grand(v: Game, t: Any) -> Game:
    """v^t: v with the grand coalition worth set to t."""
    worth = v.worth.copy()
    worth[v.grand] = utils.to_field(t, v.exact)
    return Game(v.n, worth)


def nullified_game(v: Game, S: int) -> Game:
    """v|_S(T) = v(T & S)."""
    return Game(v.n, v.worth[utils.all_masks(v.n) & S])


def marginals(v: Game, i: int) -> np.ndarray:
    """v(S u {i}) - v(S) over the coalitions S not containing player i (1-based)."""
    b = utils.bit(i)
    without = utils.all_masks(v.n)[~utils.membership(v.n)[i - 1]]
    return v.worth[without | b] - v.worth[without]


def is_null(v: Game, i: int, tol: float = utils.NULL_TOL) -> bool:
    diff = marginals(v, i)
    if v.exact:
        return all(d == 0 for d in diff)
    return bool(np.all(np.abs(diff) <= tol))


def null_players(v: Game, tol: float = utils.NULL_TOL) -> int:
    return utils.mask_of(i for i in range(1, v.n + 1) if is_null(v, i, tol))


def linear_combination(terms: Iterable[Tuple[Any, Game]]) -> Game:
    terms = list(terms)
    if not terms:
        raise ValueError("linear_combination needs at least one term")
    n = terms[0][1].n
    if any(g.n != n for _, g in terms):
        raise MixedPlayerCount("all games in a linear combination must share n")
    exact = all(g.exact for _, g in terms)
    total = utils.zeros(1 << n, exact)
    for c, g in terms:
        worth = g.worth if exact else utils.to_float_array(g.worth)
        total = total + utils.to_field(c, exact) * worth
    return Game(n, total)
