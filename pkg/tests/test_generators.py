# tests/test_generators.py
"""
Seeded game generators:
- same seed, same game
- null-player structure of two_active and single_active
- additive and symmetric shapes
- unknown names and bad parameters
"""

from fractions import Fraction

import pytest

from elsctl import utils
from elsctl.core import null_players
from elsctl.errors import UnknownGenerator
from elsctl.generators import GENERATORS, generate_game


def test_seed_reproduces_game() -> None:
    a = generate_game("uniform", 4, 123)
    b = generate_game("uniform", 4, 123)
    c = generate_game("uniform", 4, 124)
    assert a.same_as(b)
    assert not a.same_as(c)


def test_single_active_leaves_one_player() -> None:
    v = generate_game("single_active", 3, 9, i=1)
    assert null_players(v) & 0b110 == 0b110


def test_two_active_nulls_everyone_else() -> None:
    for seed in range(30):
        v = generate_game("two_active", 4, seed, i=1, j=3)
        null = null_players(v)
        assert null & 0b1010 == 0b1010


def test_additive_and_symmetric_shapes() -> None:
    v = generate_game("additive", 4, 2, exact=True)
    assert sum(v.singletons(), Fraction(0)) == v.total

    s = generate_game("symmetric", 4, 2)
    sizes = utils.coalition_sizes(4)
    for m in range(1, 16):
        assert s[m] == s[utils.masks_of_size(4, int(sizes[m]))[0]]


def test_exact_worths_are_eighths() -> None:
    v = generate_game("unanimity_mixture", 3, 5, exact=True)
    assert v.exact
    assert all((x * 8).denominator == 1 for x in v.worth)


def test_unknown_generator_and_bad_params() -> None:
    assert set(GENERATORS) == {"uniform", "additive", "unanimity_mixture", "two_active",
                               "single_active", "symmetric"}
    with pytest.raises(UnknownGenerator):
        generate_game("lottery", 3)
    with pytest.raises(UnknownGenerator):
        generate_game("two_active", 3, 0, i=1, j=1)
    with pytest.raises(UnknownGenerator):
        generate_game("single_active", 3, 0, i=4)
