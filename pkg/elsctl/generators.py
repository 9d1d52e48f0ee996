
from typing import Any, Callable, Dict, Union

import numpy as np

from . import utils
from .core import additive_game, linear_combination, nullified_game, unanimity_game
from .errors import UnknownGenerator
from .models import Allocation, Game

RngLike = Union[int, np.random.Generator]

# share of two_active draws where one of the pair is null as well
DEGENERATE_SHARE = 0.1


def _rng(rng_or_seed: RngLike) -> np.random.Generator:
    if isinstance(rng_or_seed, np.random.Generator):
        return rng_or_seed
    return utils.trial_rng(rng_or_seed)


def _uniform(n: int, rng: np.random.Generator, low: float, high: float, exact: bool) -> Game:
    body = utils.random_worths(rng, (1 << n) - 1, low, high, exact)
    return Game(n, np.concatenate([utils.zeros(1, exact), body]))


def _additive(n, rng, low, high, exact) -> Game:
    return additive_game(Allocation(utils.random_worths(rng, n, low, high, exact)))


def _unanimity_mixture(n, rng, low, high, exact, terms: int = 0) -> Game:
    terms = terms or 2 * n
    carriers = rng.integers(1, 1 << n, size=terms)
    coeffs = utils.random_worths(rng, terms, low, high, exact)
    return linear_combination(
        (c, unanimity_game(n, int(T), exact)) for c, T in zip(coeffs, carriers)
    )


def _two_active(n, rng, low, high, exact, i: int = 1, j: int = 2) -> Game:
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise UnknownGenerator(f"two_active needs two distinct players in 1..{n}, got {i},{j}")
    keep = utils.mask_of((i, j))
    if rng.random() < DEGENERATE_SHARE:
        keep = utils.bit(i if rng.random() < 0.5 else j)
    return nullified_game(_uniform(n, rng, low, high, exact), keep)


def _single_active(n, rng, low, high, exact, i: int = 1) -> Game:
    if not 1 <= i <= n:
        raise UnknownGenerator(f"single_active needs a player in 1..{n}, got {i}")
    return nullified_game(_uniform(n, rng, low, high, exact), utils.bit(i))


def _symmetric(n, rng, low, high, exact) -> Game:
    by_size = np.concatenate([utils.zeros(1, exact), utils.random_worths(rng, n, low, high, exact)])
    return Game(n, by_size[utils.coalition_sizes(n)])


GENERATORS: Dict[str, Callable[..., Game]] = {
    "uniform": _uniform,
    "additive": _additive,
    "unanimity_mixture": _unanimity_mixture,
    "two_active": _two_active,
    "single_active": _single_active,
    "symmetric": _symmetric,
}


def generate_game(name: str, n: int, rng_or_seed: RngLike = 0, low: float = -10.0,
                  high: float = 10.0, exact: bool = False, **params: Any) -> Game:
    """Draw a game from a named generator; deterministic for a given seed."""
    try:
        build = GENERATORS[name]
    except KeyError:
        known = ", ".join(sorted(GENERATORS))
        raise UnknownGenerator(f"unknown generator {name!r} (known: {known})") from None
    n = utils.check_players(n)
    return build(n, _rng(rng_or_seed), low, high, exact, **params)
