
import os
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

import numpy as np

from .errors import PlayerCountTooLarge, PlayerCountTooSmall

ROOT_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.environ.get("ELSCTL_HOME", ROOT_DIR / "data"))

MIN_PLAYERS = 2
MAX_PLAYERS = 20

TOL = 1e-9
CHECK_TOL = 1e-7
NULL_TOL = 1e-9
COND_LIMIT = 1e12

Number = Union[float, Fraction]


def ensure_data_dirs() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)


def get_data_file(name: str) -> str:
    ensure_data_dirs()
    return str(DATA_DIR / name)


# --- coalitions -------------------------------------------------------------
# Player i (1-based) lives at bit i-1; the grand coalition is 2^n - 1.


def check_players(n: int, minimum: int = MIN_PLAYERS) -> int:
    n = int(n)
    if n < minimum:
        raise PlayerCountTooSmall(f"need at least {minimum} players, got {n}")
    if n > MAX_PLAYERS:
        raise PlayerCountTooLarge(f"at most {MAX_PLAYERS} players supported, got {n}")
    return n


def grand(n: int) -> int:
    return (1 << n) - 1


def bit(player: int) -> int:
    return 1 << (player - 1)


def mask_of(players: Iterable[int]) -> int:
    mask = 0
    for p in players:
        mask |= bit(int(p))
    return mask


def players_of(mask: int, n: int) -> List[int]:
    return [i + 1 for i in range(n) if (mask >> i) & 1]


def size(mask: int) -> int:
    return bin(mask).count("1")


def complement(mask: int, n: int) -> int:
    return grand(n) ^ mask


@lru_cache(maxsize=None)
def all_masks(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    masks.setflags(write=False)
    return masks


@lru_cache(maxsize=None)
def coalition_sizes(n: int) -> np.ndarray:
    masks = all_masks(n)
    sizes = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        sizes += (masks >> i) & 1
    sizes.setflags(write=False)
    return sizes


@lru_cache(maxsize=None)
def membership(n: int) -> np.ndarray:
    """Boolean (n, 2^n) table: row i marks the coalitions containing player i+1."""
    masks = all_masks(n)
    table = np.array([((masks >> i) & 1).astype(bool) for i in range(n)])
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def masks_of_size(n: int, s: int) -> np.ndarray:
    masks = all_masks(n)[coalition_sizes(n) == s]
    masks.setflags(write=False)
    return masks


# --- numeric field ----------------------------------------------------------
# Exact games hold Fractions in object arrays; float games hold float64.


def to_field(x: Any, exact: bool) -> Number:
    if exact:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, float):
            return Fraction(repr(float(x)))
        return Fraction(x)
    return float(x)


def ratio(num: int, den: int, exact: bool) -> Number:
    return Fraction(num, den) if exact else num / den


def field_array(values: Sequence[Any], exact: bool) -> np.ndarray:
    if exact:
        return np.array([to_field(x, True) for x in values] or [], dtype=object)
    return np.asarray(values, dtype=float)


def zeros(length: int, exact: bool) -> np.ndarray:
    if exact:
        return np.array([Fraction(0)] * length, dtype=object)
    return np.zeros(length, dtype=float)


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def to_float_array(arr: np.ndarray) -> np.ndarray:
    return np.asarray([float(x) for x in arr], dtype=float) if is_exact(arr) else arr


def close(a: Number, b: Number, tol: float = TOL) -> bool:
    """Exact equality for Fractions, absolute-or-relative tolerance otherwise."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    a, b = float(a), float(b)
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def all_close(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    if len(a) != len(b):
        return False
    return all(close(x, y, tol) for x, y in zip(a, b))


def max_deviation(a: np.ndarray, b: np.ndarray) -> Number:
    if len(a) == 0:
        return 0.0
    return max(abs(x - y) for x, y in zip(a, b))


def exceeds(deviation: Number, scale: Number, tol: float) -> bool:
    if isinstance(deviation, Fraction):
        return deviation != 0
    return float(deviation) > tol * max(1.0, abs(float(scale)))


def format_number(x: Number) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


# --- random streams ---------------------------------------------------------


def trial_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator per (seed, stream...) so parallel and serial runs agree."""
    return np.random.default_rng([int(seed), *[int(s) for s in stream]])


def random_worth(rng: np.random.Generator, low: float, high: float, exact: bool) -> Number:
    if exact:
        # eighths keep exact arithmetic cheap
        return Fraction(int(rng.integers(int(low * 8), int(high * 8) + 1)), 8)
    return float(rng.uniform(low, high))


def random_worths(rng: np.random.Generator, count: int, low: float, high: float,
                  exact: bool) -> np.ndarray:
    if exact:
        ints = rng.integers(int(low * 8), int(high * 8) + 1, size=count)
        return np.array([Fraction(int(k), 8) for k in ints], dtype=object)
    return rng.uniform(low, high, size=count)
