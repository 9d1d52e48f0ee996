
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import utils
from .errors import (
    DomainGuardFailed,
    InvalidGame,
    InvalidPermutation,
    InvalidWeights,
    MixedPlayerCount,
)


class Verdict(str, Enum):
    PASSED_SAMPLE = "passed_sample"
    VIOLATED = "violated"


class Overall(str, Enum):
    CONFIRMED_SAMPLE = "confirmed_sample"
    REFUTED = "refuted"


class ReducedGameKind(str, Enum):
    AC = "AC"
    HM = "HM"
    F = "F"
    M = "M"
    COMP_UP = "CompUp"
    COMP_DOWN_INSIDER = "CompDownInsider"
    COMP_DOWN_OUTSIDER = "CompDownOutsider"


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _coerce(values: Any) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype != object:
        arr = arr.astype(float)
    return arr


def _finite(arr: np.ndarray) -> bool:
    if utils.is_exact(arr):
        return all(isinstance(x, (Fraction, int)) for x in arr)
    return bool(np.all(np.isfinite(arr)))


@dataclass(frozen=True, eq=False)
class Game:
    """Characteristic function on N = {1..n} as a dense table indexed by coalition mask."""

    n: int
    worth: np.ndarray

    def __post_init__(self) -> None:
        n = utils.check_players(self.n)
        arr = _coerce(self.worth)
        if arr.shape != (1 << n,):
            raise InvalidGame(f"expected {1 << n} worths for n={n}, got shape {arr.shape}")
        if arr[0] != 0:
            raise InvalidGame("worth of the empty coalition must be 0")
        if not _finite(arr):
            raise InvalidGame("worths must be finite")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "worth", _freeze(arr))

    @property
    def exact(self) -> bool:
        return utils.is_exact(self.worth)

    @property
    def grand(self) -> int:
        return utils.grand(self.n)

    @property
    def total(self) -> utils.Number:
        return self.worth[self.grand]

    def __getitem__(self, mask: int) -> utils.Number:
        return self.worth[mask]

    def singletons(self) -> np.ndarray:
        return self.worth[[1 << i for i in range(self.n)]]

    def key(self) -> Tuple:
        if self.exact:
            return (self.n, tuple(self.worth))
        return (self.n, self.worth.tobytes())

    def as_float(self) -> "Game":
        return self if not self.exact else Game(self.n, utils.to_float_array(self.worth))

    def as_exact(self) -> "Game":
        return self if self.exact else Game(self.n, utils.field_array(self.worth, True))

    def same_as(self, other: "Game", tol: float = utils.TOL) -> bool:
        return self.n == other.n and utils.all_close(self.worth, other.worth, tol)

    def _match(self, other: "Game") -> Tuple[np.ndarray, np.ndarray]:
        if self.n != other.n:
            raise MixedPlayerCount(f"games on {self.n} and {other.n} players")
        a, b = self.worth, other.worth
        if utils.is_exact(a) != utils.is_exact(b):
            a, b = utils.to_float_array(a), utils.to_float_array(b)
        return a, b

    def __add__(self, other: "Game") -> "Game":
        a, b = self._match(other)
        return Game(self.n, a + b)

    def __sub__(self, other: "Game") -> "Game":
        a, b = self._match(other)
        return Game(self.n, a - b)

    def scaled(self, c: Any) -> "Game":
        return Game(self.n, self.worth * utils.to_field(c, self.exact))

    def __repr__(self) -> str:
        cells = ", ".join(
            f"{{{','.join(map(str, utils.players_of(m, self.n)))}}}={utils.format_number(self.worth[m])}"
            for m in range(1, 1 << self.n)
        )
        return f"Game(n={self.n}, {cells})"


@dataclass(frozen=True, eq=False)
class Allocation:
    """Payoff vector; pay[i-1] is the payoff of player i."""

    pay: np.ndarray

    def __post_init__(self) -> None:
        arr = _coerce(self.pay)
        if arr.ndim != 1:
            raise InvalidGame("an allocation is a 1-d payoff vector")
        if not _finite(arr):
            raise InvalidGame("payoffs must be finite")
        object.__setattr__(self, "pay", _freeze(arr))

    @property
    def n(self) -> int:
        return len(self.pay)

    @property
    def exact(self) -> bool:
        return utils.is_exact(self.pay)

    @property
    def total(self) -> utils.Number:
        return self.pay.sum() if self.n else 0

    @property
    def mean(self) -> utils.Number:
        return self.total / self.n

    def __getitem__(self, index: Any) -> Any:
        return self.pay[index]

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.pay)

    def __repr__(self) -> str:
        return "Allocation(" + ", ".join(utils.format_number(x) for x in self.pay) + ")"


@lru_cache(maxsize=4096)
def _mask_map(image: Tuple[int, ...]) -> np.ndarray:
    n = len(image)
    masks = utils.all_masks(n)
    out = np.zeros(1 << n, dtype=np.int64)
    for i, target in enumerate(image):
        out |= ((masks >> i) & 1) << (target - 1)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Permutation:
    """image[i-1] = pi(i), players 1-based."""

    image: Tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(x) for x in self.image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise InvalidPermutation(f"{list(self.image)} is not a bijection on 1..{len(image)}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, player: int) -> int:
        return self.image[player - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, target in enumerate(self.image):
            inv[target - 1] = i + 1
        return Permutation(tuple(inv))

    def mask_map(self) -> np.ndarray:
        return _mask_map(self.image)


Guard = Callable[[Game], Optional[str]]


@dataclass(frozen=True)
class SolutionRule:
    """A named map Game -> Allocation.

    `spec` is the registry string the rule can be rebuilt from (worker
    processes rebuild rules instead of pickling closures). `guard` returns a
    reason string when a game lies outside the rule's domain.
    """

    name: str
    evaluate: Callable[[Game], Allocation] = field(repr=False)
    spec: Optional[str] = None
    guard: Optional[Guard] = field(default=None, repr=False)
    players: Optional[int] = None

    def rejection(self, v: Game) -> Optional[str]:
        if self.players is not None and v.n != self.players:
            return f"{self.name} is defined for n={self.players}, got n={v.n}"
        return self.guard(v) if self.guard is not None else None

    def __call__(self, v: Game) -> Allocation:
        reason = self.rejection(v)
        if reason is not None:
            raise DomainGuardFailed(f"{self.name}: {reason}", game=v)
        return self.evaluate(v)


@dataclass(frozen=True)
class LinearCoefficients:
    """p_i(S) = rule_i(e_S) plus the size-symmetric reduction when it exists.

    p[s-1] = p_s for s=1..n and q[s-1] = q_s for s=1..n-1 (None when the table
    is not size-symmetric).
    """

    n: int
    table: np.ndarray = field(repr=False)
    p: Optional[Tuple[utils.Number, ...]] = None
    q: Optional[Tuple[utils.Number, ...]] = None
    symmetric: bool = False
    sigma_form: bool = False
    els: bool = False


@dataclass(frozen=True)
class SigmaWeights:
    values: Tuple[utils.Number, ...]

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, s: int) -> utils.Number:
        return self.values[s - 1]


@dataclass(frozen=True)
class AffineWeights:
    """alpha[s-1] weights psi^s; alpha[n-1] weights ED."""

    alpha: Tuple[utils.Number, ...]

    @property
    def n(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class LSWeights:
    """m[s-1] is the weight of coalitions of size s; m0 weights the empty set when included."""

    m: Tuple[utils.Number, ...]
    m0: utils.Number = 0

    def __post_init__(self) -> None:
        if any(x < 0 for x in self.m) or self.m0 < 0:
            raise InvalidWeights("least-square weights must be nonnegative")
        if not any(x > 0 for x in self.m[:-1]):
            raise InvalidWeights("some coalition size 1..n-1 needs a positive weight")

    @property
    def n(self) -> int:
        return len(self.m)


@dataclass(frozen=True)
class SamplePlan:
    trials: int = 100
    n_min: int = 3
    n_max: int = 5
    seed: int = 0
    exact: bool = False
    low: float = -10.0
    high: float = 10.0
    t_low: float = -20.0
    t_high: float = 20.0
    check_tol: float = utils.CHECK_TOL

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.n_min > self.n_max:
            raise ValueError(f"empty player range {self.n_min}..{self.n_max}")
        utils.check_players(self.n_min)
        utils.check_players(self.n_max)

    @property
    def n_values(self) -> List[int]:
        return list(range(self.n_min, self.n_max + 1))

    def players_for_trial(self, trial: int) -> int:
        values = self.n_values
        return values[trial % len(values)]

    def for_players(self, n: int) -> "SamplePlan":
        return replace(self, n_min=n, n_max=n)


@dataclass(frozen=True)
class Witness:
    game: Game
    params: Dict[str, Any]
    expected: np.ndarray
    actual: np.ndarray
    deviation: utils.Number
    trial: int


@dataclass(frozen=True)
class CheckReport:
    axiom: str
    rule: str
    verdict: Verdict
    trials: int
    seed: int
    skipped: int = 0
    witness: Optional[Witness] = None
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASSED_SAMPLE


@dataclass(frozen=True)
class Clause:
    """One claim of a suite. expected=None marks an informational observation."""

    claim: str
    observed: bool
    expected: Optional[bool] = True
    report: Optional[CheckReport] = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.expected is None or self.observed == self.expected


@dataclass
class SuiteResult:
    theorem: str
    clauses: List[Clause] = field(default_factory=list)

    def add(self, clause: Clause) -> Clause:
        self.clauses.append(clause)
        return clause

    @property
    def overall(self) -> Overall:
        if all(c.ok for c in self.clauses):
            return Overall.CONFIRMED_SAMPLE
        return Overall.REFUTED

    @property
    def failures(self) -> List[Clause]:
        return [c for c in self.clauses if not c.ok]


@dataclass(frozen=True)
class GameFile:
    n: int
    worths: Dict[str, Any]
    default: Optional[Any] = None
    version: int = 1


def pay_vector(x: Any) -> np.ndarray:
    return x.pay if isinstance(x, Allocation) else _coerce(x)


def coalition_key(players: Sequence[int]) -> str:
    return ",".join(str(p) for p in sorted(players))
