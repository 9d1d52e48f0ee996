# tests/test_engine.py
"""
Rule registry and engine:
- every rule spec builds, parameters are parsed, unknown specs fail
- rebuilding a rule from its own spec gives the same values
- the engine converts games in exact mode and replays its witnesses
"""

from fractions import Fraction

import pytest

from elsctl.config import RunConfig
from elsctl.engine import CheckEngine, build_rule
from elsctl.errors import UnknownRule
from elsctl.storage import emit_weights
from elsctl.values import SHAPLEY, mix_rule, psi_rule


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("shapley", ["5/2", "4", "5/2"]),
        ("CIS", ["3", "4", "2"]),
        ("ensc", ["2", "4", "3"]),
        ("ed", ["3", "3", "3"]),
        ("mix", ["11/4", "7/2", "11/4"]),
        ("marginal", ["4", "6", "5"]),
        ("propdiv", ["3", "6", "0"]),
        ("power:2", ["7/3", "16/3", "4/3"]),
        ("psi:1", ["3", "4", "2"]),
        ("psi:2", ["2", "4", "3"]),
        ("sigma-shapley:1,1,1", ["5/2", "4", "5/2"]),
        ("affine:1/2,1/2,0", ["5/2", "4", "5/2"]),
        ("dictator:2", ["0", "9", "0"]),
        ("standalone", ["1", "2", "0"]),
    ],
)
def test_build_rule(spec, expected, game3_exact) -> None:
    rule = build_rule(spec, exact=True)
    got = [str(x) for x in rule(game3_exact)]
    assert got == expected


def test_rule_rebuilds_from_spec(game3) -> None:
    for rule in (SHAPLEY, psi_rule(2), mix_rule(0.25)):
        again = build_rule(rule.spec)
        assert again.spec == rule.spec
        assert list(again(game3)) == pytest.approx(list(rule(game3)))


def test_weight_file(tmp_path, game3_exact) -> None:
    path = tmp_path / "sigma.json"
    path.write_text(emit_weights([Fraction(1), Fraction(1), Fraction(1)]))
    rule = build_rule(f"sigma-shapley:{path}", exact=True)
    assert [str(x) for x in rule(game3_exact)] == ["5/2", "4", "5/2"]


@pytest.mark.parametrize("spec", ["nosuch", "psi", "psi:x", "shapley:1", "power", "affine:1,1,1"])
def test_unknown_or_malformed(spec) -> None:
    with pytest.raises(ValueError):
        build_rule(spec)


def test_engine_value_and_replay(game3) -> None:
    engine = CheckEngine(RunConfig(trials=10, n_min=3, n_max=3, seed=1, exact=True))
    x = engine.value(game3, "shapley")
    assert list(x) == [Fraction(5, 2), 4, Fraction(5, 2)]

    report = engine.check("ed", "AC")
    assert not report.passed
    assert engine.replay("ed", report) == report.witness.deviation
    with pytest.raises(UnknownRule):
        engine.rule("nosuch")


def test_engine_generate() -> None:
    engine = CheckEngine(RunConfig(n_min=4, n_max=4, seed=2))
    assert engine.generate("uniform").n == 4
    assert engine.generate("single_active", n=3, i=2).n == 3
    assert list(engine.generate("uniform").worth) == list(engine.generate("uniform").worth)
