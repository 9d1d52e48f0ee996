
"""Solution rules and the linear algebra behind them.

Every rule keeps the arithmetic of its input: exact games give Fraction
payoffs, float games give float64 payoffs. Factorial and binomial weights are
formed as Fractions first and converted afterwards.
"""

import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Any, List, Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.optimize

from . import utils
from .core import dual_game, indicator_game, nullified_game
from .errors import (
    DegenerateObjective,
    DomainGuardFailed,
    NotLinear,
    NotSigmaRepresentable,
    SizeOutOfRange,
    WeightsNotAffine,
)
from .models import (
    AffineWeights,
    Allocation,
    Game,
    LinearCoefficients,
    LSWeights,
    SigmaWeights,
    SolutionRule,
)

logger = logging.getLogger(__name__)


def _alloc(values: Sequence[Any], exact: bool) -> Allocation:
    return Allocation(utils.field_array(list(values), exact))


def _weights(fractions: Sequence[Fraction], exact: bool) -> np.ndarray:
    return utils.field_array([utils.to_field(f, exact) for f in fractions], exact)


def _sum(values: np.ndarray, exact: bool) -> utils.Number:
    return sum(values, utils.to_field(0, exact)) if exact else float(np.sum(values))


# --- closed-form values -----------------------------------------------------


def ed_value(v: Game) -> Allocation:
    share = v.total / utils.to_field(v.n, v.exact)
    return _alloc([share] * v.n, v.exact)


def cis_value(v: Game) -> Allocation:
    singles = v.singletons()
    rest = (v.total - _sum(singles, v.exact)) / utils.to_field(v.n, v.exact)
    return Allocation(singles + rest)


def ensc_value(v: Game) -> Allocation:
    return cis_value(dual_game(v))


@lru_cache(maxsize=None)
def _marginal_weights(n: int) -> tuple:
    """s!(n-s-1)!/n! for s = 0..n-1."""
    return tuple(Fraction(factorial(s) * factorial(n - s - 1), factorial(n)) for s in range(n))


def shapley_value(v: Game) -> Allocation:
    n = v.n
    weights = _weights(_marginal_weights(n), v.exact)
    sizes = utils.coalition_sizes(n)
    masks = utils.all_masks(n)
    pay = []
    for i in range(n):
        without = masks[~utils.membership(n)[i]]
        diff = v.worth[without | (1 << i)] - v.worth[without]
        pay.append(_sum(weights[sizes[without]] * diff, v.exact))
    return _alloc(pay, v.exact)


def shapley_by_permutations(v: Game) -> Allocation:
    """Average marginal contribution over all n! orders (factorial cost)."""
    n = v.n
    totals = utils.zeros(n, v.exact)
    for order in itertools.permutations(range(n)):
        mask = 0
        for i in order:
            totals[i] += v.worth[mask | (1 << i)] - v.worth[mask]
            mask |= 1 << i
    return Allocation(totals / utils.to_field(factorial(n), v.exact))


@lru_cache(maxsize=None)
def _potential_weights(n: int) -> tuple:
    """(s-1)!(n-s)!/n! for s = 0..n; the s=0 slot is unused."""
    return (Fraction(0),) + tuple(
        Fraction(factorial(s - 1) * factorial(n - s), factorial(n)) for s in range(1, n + 1)
    )


def potential(v: Game) -> utils.Number:
    weights = _weights(_potential_weights(v.n), v.exact)
    return _sum(weights[utils.coalition_sizes(v.n)] * v.worth, v.exact)


def shapley_by_potential(v: Game) -> Allocation:
    top = potential(v)
    return _alloc(
        [top - potential(nullified_game(v, v.grand ^ utils.bit(i))) for i in range(1, v.n + 1)],
        v.exact,
    )


def psi_value(v: Game, s: int) -> Allocation:
    n = v.n
    if not 1 <= s <= n:
        raise SizeOutOfRange(f"psi needs 1 <= s <= {n}, got s={s}")
    if s == n:
        return ed_value(v)
    exact = v.exact
    layer = utils.masks_of_size(n, s)
    worths = v.worth[layer]
    average = _sum(worths, exact) * utils.to_field(Fraction(1, comb(n, s)), exact)
    scale = utils.to_field(Fraction(n - 1, s), exact)
    base = v.total / utils.to_field(n, exact)
    pay = []
    for i in range(n):
        outside = worths[((layer >> i) & 1) == 0]
        excluded = _sum(outside, exact) * utils.to_field(Fraction(1, comb(n - 1, s)), exact)
        pay.append(base + scale * (average - excluded))
    return _alloc(pay, exact)


def sigma_scaled(v: Game, sigma: SigmaWeights) -> Game:
    if sigma.n != v.n:
        raise ValueError(f"sigma has {sigma.n} entries, game has {v.n} players")
    factors = utils.field_array([0, *sigma.values], v.exact)
    return Game(v.n, v.worth * factors[utils.coalition_sizes(v.n)])


def sigma_shapley_value(v: Game, sigma: SigmaWeights) -> Allocation:
    return shapley_value(sigma_scaled(v, sigma))


def discounted_sigma(n: int, delta: Any, exact: bool = False) -> SigmaWeights:
    """sigma(s) = delta^(n-s); sigma(n) = 1."""
    d = utils.to_field(delta, exact)
    return SigmaWeights(tuple(d ** (n - s) for s in range(1, n + 1)))


# --- least squares ----------------------------------------------------------


def _ls_system(v: Game, m: LSWeights, include_empty: bool, exact: bool):
    """Centred design G, centred target d and row weights for the excess variance."""
    n = v.n
    if m.n != n:
        raise ValueError(f"weights cover {m.n} sizes, game has {n} players")
    start = 0 if include_empty else 1
    rows = utils.all_masks(n)[start:]
    member = utils.membership(n)[:, rows].T
    sizes = utils.coalition_sizes(n)[rows]
    nonempty = rows != 0
    count = (1 << n) - 1
    weight_of = [m.m0, *m.m]
    if exact:
        A = np.array([[Fraction(int(c)) for c in row] for row in member], dtype=object)
        b = np.array([utils.to_field(x, True) for x in v.worth[rows]], dtype=object)
        W = np.array([utils.to_field(weight_of[s], True) for s in sizes], dtype=object)
        colmean = np.array([sum(A[nonempty, k], Fraction(0)) / count for k in range(n)], dtype=object)
        bmean = sum(b[nonempty], Fraction(0)) / count
    else:
        A = member.astype(float)
        b = utils.to_float_array(v.worth)[rows]
        W = np.array([float(weight_of[s]) for s in sizes])
        colmean = A[nonempty].sum(axis=0) / count
        bmean = b[nonempty].sum() / count
    G = A - colmean[np.newaxis, :]
    d = b - bmean
    return G, d, W


def _solve_exact(M: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    size = len(rhs)
    aug = [list(row) + [r] for row, r in zip(M, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise DegenerateObjective("stationarity system is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        aug[col] = [x / lead for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][size] for r in range(size)]


def least_square_value(v: Game, m: LSWeights, include_empty: bool = False,
                       cond_limit: float = utils.COND_LIMIT) -> Allocation:
    """Minimise the m-weighted variance of excesses around their mean, subject to efficiency.

    The mean excess always runs over nonempty coalitions; include_empty adds
    the empty coalition's term (weight m0) to the objective only.
    """
    n = v.n
    exact = v.exact
    G, d, W = _ls_system(v, m, include_empty, exact)
    WG = G * W[:, np.newaxis]
    H = np.dot(G.T, WG)
    g = np.dot(WG.T, d)
    if exact:
        one = Fraction(1)
        M = [list(H[r]) + [one] for r in range(n)] + [[one] * n + [Fraction(0)]]
        x = _solve_exact(M, list(g) + [v.total])[:n]
        return _alloc(x, True)
    K = np.zeros((n + 1, n + 1))
    K[:n, :n] = H
    K[:n, n] = 1.0
    K[n, :n] = 1.0
    rhs = np.append(g, float(v.total))
    cond = np.linalg.cond(K)
    if not np.isfinite(cond) or cond > cond_limit:
        raise DegenerateObjective(f"stationarity system is ill-conditioned (cond={cond:.3g})")
    try:
        sol = scipy.linalg.solve(K, rhs)
    except np.linalg.LinAlgError as e:
        raise DegenerateObjective(f"stationarity system is singular: {e}") from e
    return _alloc(sol[:n], False)


def ls_oracle(v: Game, m: LSWeights, include_empty: bool = False) -> Allocation:
    """Independent check of least_square_value (float only).

    Runs BFGS (scipy.optimize.minimize) on the objective restricted to the efficiency hyperplane,
    parametrised as x0 + Z y with Z = null_space(1^T), in place of a projected gradient method.
    No stationarity system is formed, so it shares nothing with the solver it checks.
    """
    n = v.n
    G, d, W = _ls_system(v.as_float(), m, include_empty, False)
    Z = scipy.linalg.null_space(np.ones((1, n)))
    x0 = np.full(n, float(v.total) / n)

    def objective(y: np.ndarray):
        r = d - G @ (x0 + Z @ y)
        wr = W * r
        return float(r @ wr), -2.0 * Z.T @ (G.T @ wr)

    res = scipy.optimize.minimize(objective, np.zeros(n - 1), jac=True, method="BFGS",
                                  options={"gtol": 1e-12, "maxiter": 10_000})
    logger.debug("ls_oracle: %s after %d iterations", res.message, res.nit)
    return _alloc(x0 + Z @ res.x, False)


# --- coefficients -----------------------------------------------------------


def _spot_games(n: int, exact: bool, count: int, seed: int) -> List[Game]:
    rng = utils.trial_rng(seed, n)
    return [
        Game(n, np.concatenate([utils.zeros(1, exact), utils.random_worths(rng, (1 << n) - 1, -10, 10, exact)]))
        for _ in range(count)
    ]


def extract_coefficients(rule: Any, n: int, exact: bool = False, tol: float = utils.TOL,
                         seed: int = 0) -> LinearCoefficients:
    """p_i(S) = rule_i(e_S) on the indicator basis, plus the size-symmetric form."""
    n = utils.check_players(n)
    size = 1 << n
    table = np.empty((n, size), dtype=object if exact else float)
    table[:, 0] = utils.to_field(0, exact)
    try:
        for S in range(1, size):
            table[:, S] = rule(indicator_game(n, S, exact)).pay
        games = _spot_games(n, exact, 6, seed)
        for v, w in zip(games[::2], games[1::2]):
            joint = rule(v + w).pay
            split = rule(v).pay + rule(w).pay
            if not utils.all_close(joint, split, tol * 100):
                raise NotLinear(f"{_name(rule)} is not additive on a sampled pair")
            if not utils.all_close(rule(v).pay, np.dot(table, v.worth), tol * 100):
                raise NotLinear(f"{_name(rule)} is not reproduced by its indicator coefficients")
    except DomainGuardFailed as e:
        raise NotLinear(f"{_name(rule)} is undefined on part of the game space: {e}") from e
    return _symmetric_form(n, table, exact, tol)


def _name(rule: Any) -> str:
    return getattr(rule, "name", repr(rule))


def _symmetric_form(n: int, table: np.ndarray, exact: bool, tol: float) -> LinearCoefficients:
    sizes = utils.coalition_sizes(n)
    member = utils.membership(n)
    p: List[Optional[utils.Number]] = [None] * n
    q: List[Optional[utils.Number]] = [None] * (n - 1)
    symmetric = True
    for S in range(1, 1 << n):
        s = int(sizes[S])
        for i in range(n):
            slot, index = (p, s - 1) if member[i, S] else (q, s - 1)
            if slot[index] is None:
                slot[index] = table[i, S]
            elif not utils.close(slot[index], table[i, S], tol):
                symmetric = False
    if not symmetric:
        return LinearCoefficients(n=n, table=table)
    sigma_form = all(
        utils.close(q[k - 1], -utils.ratio(k, n - k, exact) * p[k - 1], tol) for k in range(1, n)
    )
    els = sigma_form and utils.close(p[n - 1], utils.ratio(1, n, exact), tol)
    return LinearCoefficients(n=n, table=table, p=tuple(p), q=tuple(q), symmetric=True,
                              sigma_form=sigma_form, els=els)


def fit_sigma(coeffs: LinearCoefficients) -> SigmaWeights:
    """sigma(s) = n * C(n-1, s-1) * p_s."""
    if not (coeffs.symmetric and coeffs.sigma_form):
        raise NotSigmaRepresentable("coefficients are not of the form q_k = -k/(n-k) p_k")
    n = coeffs.n
    return SigmaWeights(tuple(n * comb(n - 1, s - 1) * coeffs.p[s - 1] for s in range(1, n + 1)))


# --- rules ------------------------------------------------------------------


def _fmt(values: Sequence[Any]) -> str:
    return ",".join(utils.format_number(x) for x in values)


def psi_rule(s: int) -> SolutionRule:
    def guard(v: Game) -> Optional[str]:
        return None if 1 <= s <= v.n else f"psi^{s} needs s <= n"

    return SolutionRule(f"psi^{s}", lambda v: psi_value(v, s), spec=f"psi:{s}", guard=guard)


def sigma_shapley_rule(sigma: SigmaWeights) -> SolutionRule:
    return SolutionRule(
        f"sigma-shapley({_fmt(sigma.values)})",
        lambda v: sigma_shapley_value(v, sigma),
        spec=f"sigma-shapley:{_fmt(sigma.values)}",
        players=sigma.n,
    )


def affine_combination_rule(alpha: AffineWeights, tol: float = utils.TOL) -> SolutionRule:
    """sum_s alpha_s psi^s; alpha_n weights ED."""
    total = sum(alpha.alpha, Fraction(0) if all(isinstance(a, Fraction) for a in alpha.alpha) else 0.0)
    if not utils.close(total, utils.to_field(1, isinstance(total, Fraction)), tol):
        raise WeightsNotAffine(f"affine weights sum to {utils.format_number(total)}, not 1")

    def evaluate(v: Game) -> Allocation:
        pay = utils.zeros(v.n, v.exact)
        for s, a in enumerate(alpha.alpha, start=1):
            if a != 0:
                pay = pay + utils.to_field(a, v.exact) * psi_value(v, s).pay
        return Allocation(pay)

    return SolutionRule(f"affine({_fmt(alpha.alpha)})", evaluate,
                        spec=f"affine:{_fmt(alpha.alpha)}", players=alpha.n)


def mix_rule(beta: Any) -> SolutionRule:
    """beta * ED + (1 - beta) * Shapley."""

    def evaluate(v: Game) -> Allocation:
        b = utils.to_field(beta, v.exact)
        return Allocation(b * ed_value(v).pay + (1 - b) * shapley_value(v).pay)

    label = utils.format_number(beta) if isinstance(beta, Fraction) else repr(float(beta))
    return SolutionRule(f"mix({label})", evaluate, spec=f"mix:{label}")


def least_square_rule(m: LSWeights, include_empty: bool = False,
                      cond_limit: float = utils.COND_LIMIT) -> SolutionRule:
    return SolutionRule(
        f"least-square({_fmt(m.m)})",
        lambda v: least_square_value(v, m, include_empty, cond_limit),
        spec=None if include_empty else f"least-square:{_fmt(m.m)}",
        players=m.n,
    )


def standalone_rule() -> SolutionRule:
    return SolutionRule("standalone", lambda v: Allocation(v.singletons()), spec="standalone")


def marginal_rule() -> SolutionRule:
    def evaluate(v: Game) -> Allocation:
        return _alloc([v.total - v.worth[v.grand ^ utils.bit(i)] for i in range(1, v.n + 1)], v.exact)

    return SolutionRule("marginal", evaluate, spec="marginal")


def dictator_rule(i: int = 1) -> SolutionRule:
    def guard(v: Game) -> Optional[str]:
        return None if 1 <= i <= v.n else f"dictator {i} is not a player"

    def evaluate(v: Game) -> Allocation:
        pay = utils.zeros(v.n, v.exact)
        pay[i - 1] = v.total
        return Allocation(pay)

    return SolutionRule(f"dictator({i})", evaluate, spec=f"dictator:{i}", guard=guard)


def prop_division_rule(tol: float = utils.TOL) -> SolutionRule:
    def guard(v: Game) -> Optional[str]:
        total = _sum(v.singletons(), v.exact)
        vanishing = total == 0 if v.exact else abs(total) <= tol
        if vanishing:
            return "stand-alone worths sum to zero"
        return None

    def evaluate(v: Game) -> Allocation:
        singles = v.singletons()
        return Allocation(singles * (v.total / _sum(singles, v.exact)))

    return SolutionRule("propdiv", evaluate, spec="propdiv", guard=guard)


def power_rule(alpha: Any) -> SolutionRule:
    """v({i})^alpha plus an equal split of what remains."""
    integral = float(alpha).is_integer()
    exponent = int(alpha) if integral else float(alpha)

    def guard(v: Game) -> Optional[str]:
        if integral:
            if exponent < 0 and any(x == 0 for x in v.singletons()):
                return "negative power of a zero stand-alone worth"
            return None
        if v.exact:
            return "non-integer powers are not exact"
        if np.any(v.singletons() < 0):
            return "non-integer power of a negative stand-alone worth"
        return None

    def evaluate(v: Game) -> Allocation:
        raised = np.array([x ** exponent for x in v.singletons()],
                          dtype=object if v.exact else float)
        rest = (v.total - _sum(raised, v.exact)) / utils.to_field(v.n, v.exact)
        return Allocation(raised + rest)

    label = str(exponent)
    return SolutionRule(f"power({label})", evaluate, spec=f"power:{label}", guard=guard)


ED = SolutionRule("ed", ed_value, spec="ed")
CIS = SolutionRule("cis", cis_value, spec="cis")
ENSC = SolutionRule("ensc", ensc_value, spec="ensc")
SHAPLEY = SolutionRule("shapley", shapley_value, spec="shapley")
