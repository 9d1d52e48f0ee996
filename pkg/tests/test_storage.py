# tests/test_storage.py
"""
Game and weight files:
- coalition keys, defaults and the empty coalition
- duplicate keys, bad JSON and missing coalitions are rejected
- emitted files parse back to the same game
- report JSON is stable
"""

import json
from fractions import Fraction

import pytest

from elsctl.errors import DuplicateKey, MissingCoalition, NonZeroEmptySet, ParseError
from elsctl.generators import generate_game
from elsctl.models import Game
from elsctl.storage import (
    dumps,
    emit_game,
    emit_weights,
    load_game,
    load_weights,
    parse_game,
    parse_key,
    parse_number,
    parse_weights,
    save_game,
)
from elsctl.values import SHAPLEY


def test_two_player_unanimity() -> None:
    v = parse_game('{"version":1,"n":2,"worths":{"":0,"1":0,"2":0,"1,2":1}}')
    assert list(v.worth) == [0.0, 0.0, 0.0, 1.0]
    assert list(SHAPLEY(v)) == [0.5, 0.5]


def test_default_fills_missing_coalitions() -> None:
    v = parse_game('{"version":1,"n":3,"default":0,"worths":{"1,2":1,"1,2,3":1}}', exact=True)
    assert list(v.worth) == [0, 0, 0, 1, 0, 0, 0, 1]
    assert list(SHAPLEY(v)) == [Fraction(1, 2), Fraction(1, 2), 0]


def test_nonzero_empty_coalition() -> None:
    with pytest.raises(NonZeroEmptySet):
        parse_game('{"n":2,"worths":{"":1,"1":0,"2":0,"1,2":1}}')


def test_missing_coalition_without_default() -> None:
    with pytest.raises(MissingCoalition) as exc:
        parse_game('{"n":2,"worths":{"1":0,"1,2":1}}')
    assert "'2'" in str(exc.value)


def test_duplicate_key() -> None:
    with pytest.raises(DuplicateKey):
        parse_game('{"n":2,"worths":{"1":0,"1":1,"2":0,"1,2":1}}')


def test_parse_error_position() -> None:
    with pytest.raises(ParseError) as exc:
        parse_game('{"n":2,"worths":{"1":0,}')
    assert exc.value.position is not None


@pytest.mark.parametrize("key", ["2,1", "1,1", "0", "4", "a", "1, 2"])
def test_rejects_bad_keys(key) -> None:
    with pytest.raises(ParseError):
        parse_key(key, 3)


def test_keys_and_numbers() -> None:
    assert parse_key("", 3) == 0
    assert parse_key("1,3", 3) == 0b101
    assert parse_number("3/4", exact=True) == Fraction(3, 4)
    assert parse_number("-0.25", exact=False) == -0.25
    assert parse_number(2, exact=True) == 2
    for bad in ("x", True, None, "1/0"):
        with pytest.raises(ParseError):
            parse_number(bad, exact=False)


def test_unsupported_version() -> None:
    with pytest.raises(ParseError):
        parse_game('{"version":2,"n":2,"worths":{}}')


@pytest.mark.parametrize("exact", [False, True])
def test_emit_then_parse(exact, tmp_path) -> None:
    v = generate_game("uniform", 4, 11, exact=exact)
    path = tmp_path / "game.json"
    save_game(v, path)
    back = load_game(path, exact=exact)
    assert list(back.worth) == list(v.worth)


def test_emit_orders_keys_by_size() -> None:
    text = emit_game(Game(3, [0, 1, 2, 4, 0, 3, 5, 9]))
    data = json.loads(text)
    assert list(data["worths"]) == ["1", "2", "3", "1,2", "1,3", "2,3", "1,2,3"]
    assert data["worths"]["1,2,3"] == "9.0"
    assert data["version"] == 1 and data["n"] == 3


def test_weights(tmp_path) -> None:
    text = emit_weights([Fraction(1, 2), Fraction(1, 2), 0], m0=Fraction(3))
    weights, m0 = parse_weights(text, exact=True)
    assert weights == (Fraction(1, 2), Fraction(1, 2), 0)
    assert m0 == 3

    path = tmp_path / "sigma.json"
    path.write_text(emit_weights([1, 1, 1]))
    assert load_weights(str(path), exact=True) == ((1, 1, 1), None)
    assert load_weights("1/2,1/2,0", exact=True) == ((Fraction(1, 2), Fraction(1, 2), 0), None)

    with pytest.raises(ParseError):
        parse_weights('{"weights":[]}')


def test_dumps_is_stable(game3_exact) -> None:
    payload = {"allocation": SHAPLEY(game3_exact), "game": game3_exact, "ok": True}
    first = dumps(payload)
    assert first == dumps(payload)
    data = json.loads(first)
    assert data["allocation"] == ["5/2", "4", "5/2"]
    assert data["game"]["worths"]["1,2"] == "4"
    assert list(data) == sorted(data)
