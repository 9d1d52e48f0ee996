
import argparse
import logging
import sys
from typing import Dict, List, Optional

from . import utils
from .config import Config, RunConfig
from .engine import RULES, CheckEngine
from .errors import GameError
from .generators import GENERATORS
from .models import Allocation, CheckReport, SuiteResult
from .storage import dumps, emit_game, load_game, report_to_dict, suite_to_dict
from .theorems import THEOREMS

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VIOLATED, EXIT_ERROR = 0, 1, 2


def _run_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Base seed for every random stream")
    common.add_argument("--trials", type=int, help="Sampled games per check")
    common.add_argument("--n", dest="n", type=int, help="Number of players (sets the range when --n-max is absent)")
    common.add_argument("--n-max", dest="n_max", type=int, help="Largest number of players to sample")
    common.add_argument("--rational", action="store_true", default=None, help="Exact rational arithmetic")
    common.add_argument("--tol", type=float, help="Tolerance for axiom comparisons in float mode")
    common.add_argument("--format", choices=["human", "json"], help="Output format")
    common.add_argument("--workers", type=int, help="Processes for trial chunks")
    common.add_argument("-v", "--verbose", action="count", default=0, help="INFO logging; twice for DEBUG")
    return common


def _build_parser() -> argparse.ArgumentParser:
    common = _run_options()
    parser = argparse.ArgumentParser(prog="elsctl", description="TU-game allocation rules and axiom checks")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_value = subparsers.add_parser("value", parents=[common], help="Evaluate a rule on a game file")
    p_value.add_argument("game_file", help="Game JSON file")
    p_value.add_argument("rule", help=f"Rule spec ({', '.join(RULES)})")

    p_check = subparsers.add_parser("check", parents=[common], help="Falsify an axiom for a rule")
    p_check.add_argument("rule", help="Rule spec")
    p_check.add_argument("axiom", help="Axiom name (E, L, SYM, AC, CU, HM-NGC, ...)")

    p_gen = subparsers.add_parser("gen", parents=[common], help="Generate a random game file")
    p_gen.add_argument("generator", choices=sorted(GENERATORS), help="Generator name")
    p_gen.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=INT",
        help="Generator parameter, e.g. --param i=1 (repeatable)",
    )
    p_gen.add_argument("--out", help="Write the game to this file instead of stdout")

    p_verify = subparsers.add_parser("verify", parents=[common], help="Run a verification suite")
    p_verify.add_argument("theorem", choices=sorted(THEOREMS) + ["all"], help="Suite id")

    p_config = subparsers.add_parser("config", help="Configuration management")
    config_sub = p_config.add_subparsers(dest="config_command", required=True)
    p_config_get = config_sub.add_parser("get", help="Get a config value")
    p_config_get.add_argument("key", help="Config key")
    p_config_set = config_sub.add_parser("set", help="Set a config value")
    p_config_set.add_argument("key", help="Config key")
    p_config_set.add_argument("value", help="Config value")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def _run_config(args: argparse.Namespace, config: Config) -> RunConfig:
    n_max = args.n_max if args.n_max is not None else args.n
    return RunConfig.from_config(
        config,
        seed=args.seed,
        trials=args.trials,
        n_min=args.n,
        n_max=n_max,
        exact=args.rational,
        check_tol=args.tol,
        format=args.format,
        workers=args.workers,
    )


def _gen_params(raw: List[str]) -> Dict[str, int]:
    params: Dict[str, int] = {}
    for item in raw:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--param expects KEY=INT, got {item!r}")
        try:
            params[key.strip()] = int(value)
        except ValueError as e:
            raise ValueError(f"--param {key} expects an integer, got {value!r}") from e
    return params


def _print_allocation(rule: str, x: Allocation) -> None:
    print(f"rule: {rule}")
    for i, pay in enumerate(x, start=1):
        print(f"  player {i}: {utils.format_number(pay)}")
    print(f"  total: {utils.format_number(x.total)}")


def _print_report(report: CheckReport) -> None:
    print(
        f"[{report.axiom}] rule={report.rule} verdict={report.verdict.value} "
        f"trials={report.trials} seed={report.seed} skipped={report.skipped}"
    )
    w = report.witness
    if w is not None:
        print(f"  witness: trial {w.trial}, deviation {utils.format_number(w.deviation)}")
        print(f"  game: {w.game!r}")
        if w.params:
            shown = ", ".join(f"{k}={v!r}" for k, v in sorted(w.params.items()))
            print(f"  params: {shown}")
        print(f"  expected: {', '.join(utils.format_number(x) for x in w.expected)}")
        print(f"  actual:   {', '.join(utils.format_number(x) for x in w.actual)}")
    for key, note in sorted(report.notes.items()):
        print(f"  {key}: {note}")


def _print_suite(suite: SuiteResult) -> None:
    print(f"Suite {suite.theorem}: {suite.overall.value} ({len(suite.clauses)} clauses, "
          f"{len(suite.failures)} failed)")
    for clause in suite.clauses:
        mark = "ok" if clause.ok else "FAIL"
        if clause.expected is None:
            mark = "info"
        print(f"  [{mark}] {clause.claim}: observed={clause.observed}")
        if clause.detail and (not clause.ok or clause.expected is None):
            print(f"      {clause.detail}")


def _cmd_value(args: argparse.Namespace, engine: CheckEngine) -> int:
    v = load_game(args.game_file, engine.run.exact)
    rule = engine.rule(args.rule)
    x = engine.value(v, rule)
    if engine.run.format == "json":
        print(dumps({"rule": rule.name, "allocation": x, "total": x.total}))
    else:
        _print_allocation(rule.name, x)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace, engine: CheckEngine) -> int:
    report = engine.check(args.rule, args.axiom)
    if engine.run.format == "json":
        print(dumps(report_to_dict(report)))
    else:
        _print_report(report)
    return EXIT_OK if report.passed else EXIT_VIOLATED


def _cmd_gen(args: argparse.Namespace, engine: CheckEngine) -> int:
    v = engine.generate(args.generator, **_gen_params(args.param))
    text = emit_game(v)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        print(f"Wrote {args.generator} game (n={v.n}) to {args.out}")
    else:
        print(text)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace, engine: CheckEngine) -> int:
    suites = engine.verify(args.theorem)
    if engine.run.format == "json":
        print(dumps([suite_to_dict(s) for s in suites]))
    else:
        for suite in suites:
            _print_suite(suite)
    return EXIT_OK if all(not s.failures for s in suites) else EXIT_VIOLATED


def _cmd_config(args: argparse.Namespace, config: Config) -> int:
    if args.config_command == "get":
        if args.key not in Config.DEFAULTS:
            raise ValueError(f"Unknown config key {args.key!r}")
        print(f"{args.key} = {config.get(args.key)}")
    else:
        config.set(args.key, args.value)
        print(f"{args.key} = {config.get(args.key)}")
    return EXIT_OK


COMMANDS = {
    "value": _cmd_value,
    "check": _cmd_check,
    "gen": _cmd_gen,
    "verify": _cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    argv = argv if argv is not None else sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(argv)
    _configure_logging(getattr(args, "verbose", 0))

    try:
        config = Config()
        if args.command == "config":
            return _cmd_config(args, config)
        engine = CheckEngine(_run_config(args, config))
        logger.debug("run config: %s", engine.run)
        return COMMANDS[args.command](args, engine)
    except (GameError, ValueError, OSError) as e:
        print(f"Error running {args.command}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
