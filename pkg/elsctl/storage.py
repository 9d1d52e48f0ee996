
"""Game files, weight files and report serialization (JSON)."""

import json
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from . import utils
from .errors import DuplicateKey, MissingCoalition, NonZeroEmptySet, ParseError
from .models import (
    Allocation,
    CheckReport,
    Clause,
    Game,
    GameFile,
    Permutation,
    SuiteResult,
    Witness,
    coalition_key,
)

FORMAT_VERSION = 1

PathLike = Union[str, Path]


def _unique_pairs(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in pairs:
        if key in out:
            raise DuplicateKey(f"duplicate key {key!r}")
        out[key] = value
    return out


def _load_json(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text, object_pairs_hook=_unique_pairs)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.pos) from e
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object at top level", 0)
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version!r}")
    return data


def parse_number(raw: Any, exact: bool) -> utils.Number:
    """JSON number, decimal string or "p/q" literal."""
    if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
        raise ParseError(f"expected a number or numeric string, got {raw!r}")
    try:
        value = Fraction(raw.strip()) if isinstance(raw, str) else utils.to_field(raw, True)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"not a number: {raw!r}") from e
    return value if exact else float(value)


def format_worth(x: utils.Number) -> str:
    return utils.format_number(x)


def parse_key(key: str, n: int) -> int:
    """Canonical coalition key ("1,3") to a bitmask; "" is the empty coalition."""
    if key == "":
        return 0
    try:
        players = [int(p) for p in key.split(",")]
    except ValueError as e:
        raise ParseError(f"bad coalition key {key!r}") from e
    if any(p < 1 or p > n for p in players):
        raise ParseError(f"coalition key {key!r} names a player outside 1..{n}")
    if coalition_key(players) != key or len(set(players)) != len(players):
        raise ParseError(f"coalition key {key!r} is not canonical (ascending, comma separated)")
    return utils.mask_of(players)


def key_of(mask: int, n: int) -> str:
    return coalition_key(utils.players_of(mask, n))


def read_game_file(text: str) -> GameFile:
    data = _load_json(text)
    if "n" not in data or "worths" not in data:
        raise ParseError("game file needs \"n\" and \"worths\"")
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ParseError(f"\"n\" must be an integer, got {n!r}")
    utils.check_players(n)
    worths = data["worths"]
    if not isinstance(worths, dict):
        raise ParseError("\"worths\" must be an object")
    return GameFile(n=n, worths=worths, default=data.get("default"), version=data.get("version", 1))


def game_from_file(spec: GameFile, exact: bool = False) -> Game:
    n = spec.n
    worth: List[Optional[utils.Number]] = [None] * (1 << n)
    worth[0] = utils.to_field(0, exact)
    for key, raw in spec.worths.items():
        mask = parse_key(key, n)
        value = parse_number(raw, exact)
        if mask == 0:
            if value != 0:
                raise NonZeroEmptySet(f"the empty coalition must be worth 0, got {format_worth(value)}")
            continue
        worth[mask] = value
    missing = [mask for mask, x in enumerate(worth) if x is None]
    if missing:
        if spec.default is None:
            shown = ", ".join(repr(key_of(m, n)) for m in missing[:5])
            raise MissingCoalition(f"{len(missing)} coalitions have no worth and no default is declared ({shown})")
        fill = parse_number(spec.default, exact)
        for mask in missing:
            worth[mask] = fill
    return Game(n, utils.field_array(worth, exact))


def parse_game(text: str, exact: bool = False) -> Game:
    return game_from_file(read_game_file(text), exact)


def _canonical_masks(n: int) -> List[int]:
    return sorted(range(1, 1 << n), key=lambda m: (utils.size(m), utils.players_of(m, n)))


def emit_game(v: Game) -> str:
    payload = {
        "version": FORMAT_VERSION,
        "n": v.n,
        "worths": {key_of(m, v.n): format_worth(v.worth[m]) for m in _canonical_masks(v.n)},
    }
    return json.dumps(payload, indent=2)


def load_game(path: PathLike, exact: bool = False) -> Game:
    with open(path, "r", encoding="utf-8") as f:
        return parse_game(f.read(), exact)


def save_game(v: Game, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(emit_game(v) + "\n")


# --- weight vectors ---------------------------------------------------------


def parse_weights(text: str, exact: bool = False) -> Tuple[Tuple[utils.Number, ...], Optional[utils.Number]]:
    """{"version":1, "weights":[...], "m0":optional} -> (weights, m0)."""
    data = _load_json(text)
    raw = data.get("weights")
    if not isinstance(raw, list) or not raw:
        raise ParseError("weight file needs a nonempty \"weights\" array")
    weights = tuple(parse_number(x, exact) for x in raw)
    m0 = parse_number(data["m0"], exact) if "m0" in data else None
    return weights, m0


def emit_weights(weights: Any, m0: Optional[utils.Number] = None) -> str:
    payload: Dict[str, Any] = {"version": FORMAT_VERSION, "weights": [format_worth(x) for x in weights]}
    if m0 is not None:
        payload["m0"] = format_worth(m0)
    return json.dumps(payload, indent=2)


def parse_weight_list(text: str, exact: bool = False) -> Tuple[utils.Number, ...]:
    """Inline "a,b,c" list as given on the command line."""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ParseError(f"empty weight list {text!r}")
    return tuple(parse_number(p, exact) for p in parts)


def load_weights(source: str, exact: bool = False) -> Tuple[Tuple[utils.Number, ...], Optional[utils.Number]]:
    """A weights file path, or an inline comma separated list."""
    path = Path(source)
    if path.suffix == ".json" or path.is_file():
        with open(path, "r", encoding="utf-8") as f:
            return parse_weights(f.read(), exact)
    return parse_weight_list(source, exact), None


# --- reports ----------------------------------------------------------------


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Game):
        return {"n": obj.n, "worths": {key_of(m, obj.n): format_worth(obj.worth[m])
                                       for m in _canonical_masks(obj.n)}}
    if isinstance(obj, Allocation):
        return [format_worth(x) for x in obj.pay]
    if isinstance(obj, Permutation):
        return list(obj.image)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        return format_worth(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return obj


def witness_to_dict(w: Witness) -> Dict[str, Any]:
    return {
        "trial": w.trial,
        "game": to_jsonable(w.game),
        "params": to_jsonable(w.params),
        "expected": to_jsonable(w.expected),
        "actual": to_jsonable(w.actual),
        "deviation": to_jsonable(w.deviation),
    }


def report_to_dict(report: CheckReport) -> Dict[str, Any]:
    return {
        "axiom": report.axiom,
        "rule": report.rule,
        "verdict": report.verdict.value,
        "trials": report.trials,
        "seed": report.seed,
        "skipped": report.skipped,
        "witness": witness_to_dict(report.witness) if report.witness is not None else None,
        "notes": to_jsonable(report.notes),
    }


def clause_to_dict(clause: Clause) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "claim": clause.claim,
        "observed": clause.observed,
        "expected": clause.expected,
        "ok": clause.ok,
    }
    if clause.detail:
        out["detail"] = clause.detail
    if clause.report is not None:
        out["report"] = report_to_dict(clause.report)
    return out


def suite_to_dict(suite: SuiteResult) -> Dict[str, Any]:
    return {
        "theorem": suite.theorem,
        "overall": suite.overall.value,
        "clauses": [clause_to_dict(c) for c in suite.clauses],
    }


def dumps(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2)
