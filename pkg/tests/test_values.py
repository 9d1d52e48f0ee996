# tests/test_values.py
"""
Solution rules:
- closed forms (ED, CIS, ENSC, Shapley, psi^s) on a hand-computed game
- Shapley three ways and the average-of-psi identity
- sigma-Shapley, affine combinations and coefficient extraction
- least squares against its numeric oracle
- guards of the counterexample rules
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from elsctl import utils
from elsctl.core import additive_game, unanimity_game
from elsctl.errors import (
    DomainGuardFailed,
    InvalidWeights,
    NotLinear,
    NotSigmaRepresentable,
    SizeOutOfRange,
    WeightsNotAffine,
)
from elsctl.generators import generate_game
from elsctl.models import AffineWeights, Allocation, Game, LSWeights, SigmaWeights
from elsctl.values import (
    CIS,
    ED,
    ENSC,
    SHAPLEY,
    affine_combination_rule,
    discounted_sigma,
    extract_coefficients,
    fit_sigma,
    least_square_rule,
    least_square_value,
    ls_oracle,
    marginal_rule,
    mix_rule,
    power_rule,
    prop_division_rule,
    potential,
    psi_value,
    shapley_by_permutations,
    shapley_by_potential,
    shapley_value,
    sigma_shapley_value,
    standalone_rule,
)


def _f(*values) -> list:
    return [Fraction(v) for v in values]


def test_closed_forms(game3_exact) -> None:
    assert list(ED(game3_exact)) == _f(3, 3, 3)
    assert list(CIS(game3_exact)) == _f(3, 4, 2)
    assert list(ENSC(game3_exact)) == _f(2, 4, 3)
    assert list(shapley_value(game3_exact)) == [Fraction(5, 2), Fraction(4), Fraction(5, 2)]


def test_psi_endpoints(game3_exact) -> None:
    assert list(psi_value(game3_exact, 1)) == list(CIS(game3_exact))
    assert list(psi_value(game3_exact, 2)) == list(ENSC(game3_exact))
    assert list(psi_value(game3_exact, 3)) == list(ED(game3_exact))
    with pytest.raises(SizeOutOfRange):
        psi_value(game3_exact, 0)
    with pytest.raises(SizeOutOfRange):
        psi_value(game3_exact, 4)


def test_shapley_on_unanimity() -> None:
    u = unanimity_game(3, 0b011, exact=True)
    assert list(shapley_value(u)) == [Fraction(1, 2), Fraction(1, 2), Fraction(0)]


def test_potential_of_unanimity_games() -> None:
    for mask, size in ((0b011, 2), (0b111, 3), (0b100, 1)):
        assert potential(unanimity_game(3, mask, exact=True)) == Fraction(1, size)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_shapley_three_ways_exact(n) -> None:
    v = generate_game("uniform", n, 11, exact=True)
    direct = list(shapley_value(v))
    assert direct == list(shapley_by_permutations(v))
    assert direct == list(shapley_by_potential(v))


@pytest.mark.parametrize("n", [3, 4, 6])
def test_average_of_psi_is_shapley(n) -> None:
    v = generate_game("uniform", n, 5, exact=True)
    total = sum((psi_value(v, s).pay for s in range(1, n)), utils.zeros(n, True))
    assert list(total / (n - 1)) == list(shapley_value(v))


@settings(max_examples=25, deadline=None, derandomize=True)
@given(seed=st.integers(min_value=0, max_value=10_000), n=st.integers(min_value=2, max_value=6))
def test_rules_keep_efficiency(seed, n) -> None:
    v = generate_game("uniform", n, seed)
    for rule in (ED, CIS, ENSC, SHAPLEY):
        assert rule(v).total == pytest.approx(float(v.total), abs=1e-9)
    for s in range(1, n + 1):
        assert psi_value(v, s).total == pytest.approx(float(v.total), abs=1e-9)


@settings(max_examples=20, deadline=None, derandomize=True)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_psi_returns_x_on_additive_games(seed) -> None:
    rng = utils.trial_rng(seed)
    x = utils.random_worths(rng, 4, -5, 5, True)
    v = additive_game(Allocation(x))
    for s in range(1, 4):
        assert list(psi_value(v, s)) == list(x)


def test_sigma_shapley_with_ones_is_shapley(game3_exact) -> None:
    ones = SigmaWeights(tuple(Fraction(1) for _ in range(3)))
    assert list(sigma_shapley_value(game3_exact, ones)) == list(shapley_value(game3_exact))
    half = discounted_sigma(3, Fraction(1, 2), exact=True)
    assert half.values == (Fraction(1, 4), Fraction(1, 2), Fraction(1))


def test_affine_combination(game3_exact) -> None:
    rule = affine_combination_rule(AffineWeights(_f(1, 0, 0)))
    assert list(rule(game3_exact)) == list(CIS(game3_exact))
    half = affine_combination_rule(AffineWeights((Fraction(1, 2), Fraction(1, 2), Fraction(0))))
    assert list(half(game3_exact)) == list(shapley_value(game3_exact))
    with pytest.raises(WeightsNotAffine):
        affine_combination_rule(AffineWeights(_f(1, 1, 0)))
    with pytest.raises(DomainGuardFailed):
        rule(generate_game("uniform", 4, 0))


def test_mix_rule(game3_exact) -> None:
    mixed = mix_rule(Fraction(1, 2))(game3_exact)
    assert list(mixed) == [Fraction(11, 4), Fraction(7, 2), Fraction(11, 4)]


def test_coefficients_of_shapley_are_els() -> None:
    coeffs = extract_coefficients(SHAPLEY, 4, exact=True)
    assert coeffs.symmetric and coeffs.sigma_form and coeffs.els
    assert coeffs.p[3] == Fraction(1, 4)
    sigma = fit_sigma(coeffs)
    assert sigma.values == tuple(Fraction(1) for _ in range(4))


def test_coefficients_of_ed_and_psi() -> None:
    sigma = fit_sigma(extract_coefficients(ED, 3, exact=True))
    assert sigma.values == (0, 0, 1)
    coeffs = extract_coefficients(affine_combination_rule(AffineWeights(_f(2, -1, 0))), 3, exact=True)
    assert coeffs.els
    assert coeffs.p[1] < 0


def test_coefficients_reject_nonlinear_rules() -> None:
    with pytest.raises(NotLinear):
        extract_coefficients(prop_division_rule(), 3)
    coeffs = extract_coefficients(standalone_rule(), 3, exact=True)
    assert not coeffs.els
    with pytest.raises(NotSigmaRepresentable):
        fit_sigma(extract_coefficients(marginal_rule(), 3, exact=True))


def test_least_square_matches_oracle() -> None:
    rng = utils.trial_rng(42)
    for n in (3, 4, 5):
        m = LSWeights(tuple(float(x) for x in rng.uniform(0.2, 2.0, size=n)))
        v = generate_game("uniform", n, int(rng.integers(1000)))
        x = least_square_value(v, m)
        assert x.total == pytest.approx(float(v.total), abs=1e-9)
        assert np.allclose(x.pay, ls_oracle(v, m).pay, atol=1e-6)


def test_oracle_stays_efficient_with_empty_set_weight() -> None:
    m = LSWeights((1.0, 0.5, 2.0, 1.0), m0=3.0)
    v = generate_game("uniform", 4, 17)
    y = ls_oracle(v, m, include_empty=True)
    assert y.total == pytest.approx(float(v.total), abs=1e-9)
    assert np.allclose(y.pay, least_square_value(v, m, include_empty=True).pay, atol=1e-6)


def test_least_square_exact_and_additive() -> None:
    m = LSWeights(tuple(Fraction(k) for k in (1, 2, 1, 1)))
    x = _f(1, -2, 3, 5)
    v = additive_game(Allocation(np.array(x, dtype=object)))
    assert list(least_square_value(v, m)) == x

    w = generate_game("uniform", 4, 8, exact=True)
    exact = least_square_value(w, m)
    approx = least_square_value(w.as_float(), m)
    assert exact.total == w.total
    assert np.allclose([float(a) for a in exact], approx.pay, atol=1e-9)

    coeffs = extract_coefficients(least_square_rule(m), 4, exact=True)
    assert coeffs.els
    assert all(p >= 0 for p in coeffs.p[:-1])


def test_least_square_weights_validation() -> None:
    with pytest.raises(InvalidWeights):
        LSWeights((1.0, -1.0, 1.0))
    with pytest.raises(InvalidWeights):
        LSWeights((0.0, 0.0, 1.0))


def test_counterexample_rules(game3_exact) -> None:
    assert list(standalone_rule()(game3_exact)) == _f(1, 2, 0)
    assert list(marginal_rule()(game3_exact)) == _f(4, 6, 5)
    assert list(prop_division_rule()(game3_exact)) == _f(3, 6, 0)
    assert list(power_rule(2)(game3_exact)) == [Fraction(7, 3), Fraction(16, 3), Fraction(4, 3)]

    flat = Game(3, _f(0, 1, -1, 0, 0, 0, 0, 2))
    with pytest.raises(DomainGuardFailed):
        prop_division_rule()(flat)
    with pytest.raises(DomainGuardFailed):
        power_rule(Fraction(1, 2))(game3_exact)
