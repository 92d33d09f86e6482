"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .closed_form import payoff_closed_form
from .engine import DELTA_MAX, QUANTUM, StrategyParams, check_delta, check_werner_parameter, payoffs_numeric
from .equilibrium import (
    BASIS_DELTA,
    SearchConfig,
    StrategyProfile,
    fmt,
    is_nash,
    parse_p_grid,
    preservation_sweep,
    sweep_to_csv,
    sweep_to_json,
)
from .game_model import load_game
from .validation import format_report, run_validation

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3
OUTPUT_DIR_ENV = "QUANTGAMES_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_game(parser):
    parser.add_argument("--game", required=True, help="pd, cg, bos, or path to a game JSON file")


def _add_basis(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--basis", choices=sorted(BASIS_DELTA), help="entangled (delta=pi/2) or product (delta=0)")
    group.add_argument("--delta", type=float, help="measurement-basis entanglement in [0, pi/2]")


def _add_strategies(parser):
    parser.add_argument(
        "--strategies",
        nargs=4,
        type=float,
        metavar=("THETA1", "PHI1", "THETA2", "PHI2"),
        help="Alice's and Bob's (theta, phi) in radians",
    )


def _add_search(parser):
    defaults = SearchConfig()
    parser.add_argument("--grid-theta", type=int, default=defaults.grid_theta)
    parser.add_argument("--grid-phi", type=int, default=defaults.grid_phi)
    parser.add_argument("--refine", type=int, default=defaults.refine_iterations)
    parser.add_argument("--tolerance", type=float, default=defaults.tolerance)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quantgames", description="Quantized 2x2 games with Werner-like initial states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pay = sub.add_parser("payoff", help="payoffs for one strategy profile")
    _add_game(pay)
    pay.add_argument("--p", type=float, required=True)
    _add_basis(pay)
    _add_strategies(pay)
    pay.add_argument("--closed-form", action="store_true", help="also print the endpoint closed form")

    sweep = sub.add_parser("sweep", help="quantized payoff elements over a p grid")
    _add_game(sweep)
    sweep.add_argument("--basis", choices=sorted(BASIS_DELTA), required=True)
    sweep.add_argument("--p-grid", required=True, help="start:stop:steps, endpoints inclusive")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.add_argument("--output", help=f"output file (default: stdout, or ${OUTPUT_DIR_ENV} if set)")
    sweep.add_argument("--workers", type=int, default=None)

    ne = sub.add_parser("ne-check", help="check a profile (default (Q, Q)) for Nash equilibrium")
    _add_game(ne)
    ne.add_argument("--p", type=float, required=True)
    _add_basis(ne)
    _add_strategies(ne)
    _add_search(ne)

    val = sub.add_parser("validate", help="oracle audit of closed forms and state invariants")
    val.add_argument("--samples", type=int, default=1000)
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--output", help="write the JSON report here")
    return parser


def _delta(args) -> float:
    if args.delta is not None:
        return check_delta(args.delta)
    if args.basis is None:
        raise UsageError("one of --basis or --delta is required")
    return BASIS_DELTA[args.basis]


def _profile(args, default: StrategyProfile | None = None) -> StrategyProfile:
    if args.strategies is None:
        if default is None:
            raise UsageError("--strategies THETA1 PHI1 THETA2 PHI2 is required")
        return default
    t1, f1, t2, f2 = args.strategies
    return StrategyProfile(StrategyParams(t1, f1), StrategyParams(t2, f2))


def cmd_payoff(args, out) -> int:
    game = load_game(args.game)
    p = check_werner_parameter(args.p)
    delta = _delta(args)
    prof = _profile(args)
    num = payoffs_numeric(game, p, delta, prof.s1, prof.s2)
    out.write(f"{fmt(num[0])} {fmt(num[1])}\n")
    if args.closed_form:
        if delta not in (0.0, DELTA_MAX):
            raise UsageError("--closed-form needs --basis entangled|product, not an interior --delta")
        cf = payoff_closed_form(game, p, delta, prof.s1, prof.s2)
        out.write(f"closed-form {fmt(cf[0])} {fmt(cf[1])}\n")
        out.write(f"abs-diff {abs(cf[0] - num[0]):.3e} {abs(cf[1] - num[1]):.3e}\n")
    return EXIT_OK


def _sweep_target(args) -> Path | None:
    if args.output:
        return Path(args.output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base:
        return Path(base) / f"sweep_{Path(args.game).stem.lower()}_{args.basis}.{args.format}"
    return None


def cmd_sweep(args, out) -> int:
    game = load_game(args.game)
    grid = parse_p_grid(args.p_grid)
    records = preservation_sweep(game, args.basis, grid, workers=args.workers)
    if args.format == "csv":
        text = sweep_to_csv(records, "AlphaBetaSigma" if game.form == "bos" else "RSTU")
    else:
        text = sweep_to_json(records, game, args.basis)
    target = _sweep_target(args)
    if target is None:
        out.write(text)
    else:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_ne_check(args, out) -> int:
    game = load_game(args.game)
    p = check_werner_parameter(args.p)
    delta = _delta(args)
    prof = _profile(args, default=StrategyProfile(QUANTUM, QUANTUM))
    cfg = SearchConfig(args.grid_theta, args.grid_phi, args.refine, args.tolerance)
    res = is_nash(game, p, delta, prof, cfg)
    dev = res.best_deviation
    out.write(f"NE={'true' if res.verdict else 'false'}\n")
    out.write(f"max_violation={fmt(res.max_violation)}\n")
    out.write(
        f"best_deviation player={res.deviating_player} theta={fmt(dev.theta)} "
        f"phi={fmt(dev.phi)} payoff={fmt(res.deviation_payoff)}\n"
    )
    return EXIT_OK


def cmd_validate(args, out) -> int:
    if args.samples < 0:
        raise UsageError("--samples must be non-negative")
    report = run_validation(args.samples, args.seed)
    out.write(format_report(report))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if report.ok else EXIT_VALIDATION


COMMANDS = {
    "payoff": cmd_payoff,
    "sweep": cmd_sweep,
    "ne-check": cmd_ne_check,
    "validate": cmd_validate,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ValueError) as exc:
        print(f"quantgames: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"quantgames: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
