#!/usr/bin/env python3
"""Command-line surface of market_lab: simulation, extraction, prediction and circuit compilation."""

import argparse
import sys
import traceback
from collections.abc import Sequence
from pathlib import Path
from typing import NoReturn

from dotenv import load_dotenv

from market_lab.config.settings import get_lab_settings
from market_lab.dao.compiled_dao import CompiledMarketDAO
from market_lab.dao.market_dao import MarketSpecDAO
from market_lab.dao.netlist_dao import NetlistDAO
from market_lab.dao.price_dao import PriceCsvDAO
from market_lab.dao.system_dao import SystemDAO
from market_lab.exceptions import (
    HistoryLimitInfeasibleError,
    InfeasibleHistoryError,
    ProbabilityZeroError,
    VanishingConeError,
    VerificationError,
)
from market_lab.models.dsmc import DsmcParams
from market_lab.models.market import PriceRule, PriceSeries
from market_lab.services.circuit_compiler import compile_market
from market_lab.services.dsmc import (
    memory_study_initial_prices,
    run_dsmc_batch,
    simulate_dsmc,
    summary_stats,
)
from market_lab.services.linear_bridge import market_to_system
from market_lab.services.predictors import (
    predict_exact,
    predict_limit_distribution,
    sample_conditional_frequency,
)
from market_lab.services.verifier import require_passing, verify_compilation
from market_lab.utils.logging import get_market_lab_logger, setup_market_lab_logger
from market_lab.utils.rational import to_fraction
from market_lab.utils.svg import render_price_svg

logger = get_market_lab_logger("cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFICATION = 3

INFEASIBLE_VERDICTS = (
    InfeasibleHistoryError,
    ProbabilityZeroError,
    HistoryLimitInfeasibleError,
    VanishingConeError,
)


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def setup_logging(verbose: bool = False) -> None:
    """Setup logging configuration."""
    level = "DEBUG" if verbose else get_lab_settings().log_level
    setup_market_lab_logger(level=level)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _rational(text: str) -> str:
    try:
        to_fraction(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    return text


def _write_svg(series: PriceSeries, path: str, title: str | None = None) -> None:
    settings = get_lab_settings()
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    svg = render_price_svg(series, settings.svg_width, settings.svg_height, title)
    target.write_text(svg, encoding="utf-8")
    logger.info(f"Wrote chart {target}")


def simulate_dsmc_command(args: argparse.Namespace) -> int:
    """Run one DSMC market and write its price CSV (and chart)."""
    if args.init_prices:
        initial = PriceCsvDAO().load(args.init_prices).prices
    else:
        initial = memory_study_initial_prices(args.memory, args.seed)

    params = DsmcParams(
        m=args.traders,
        L=args.max_period,
        k=args.memory,
        alpha=args.alpha,
        days=args.days,
        initial_prices=initial,
        seed=args.seed,
    )
    series = simulate_dsmc(params).series
    PriceCsvDAO().save(series, args.out)
    if args.plot:
        _write_svg(series, args.plot)

    print(summary_stats(series).as_block())
    return EXIT_OK


def dsmc_batch_command(args: argparse.Namespace) -> int:
    """Run every DSMC configuration of a YAML batch file."""
    results = run_dsmc_batch(args.config)
    out_dir = Path(args.out_dir)
    prices = PriceCsvDAO()

    print("DSMC Batch Summary:")
    print(f"Completed {len(results)} runs:")
    for result in results:
        prices.save(result.series, out_dir / f"{result.name}.csv")
        if args.plot:
            _write_svg(result.series, str(out_dir / f"{result.name}.svg"), result.name)
        print(f"  {result.name} -> {out_dir / result.name}.csv")
        print("\n".join(f"    {line}" for line in result.stats.as_block().splitlines()))
    return EXIT_OK


def extract_command(args: argparse.Namespace) -> int:
    """Extract the linear system of a market history."""
    model = MarketSpecDAO().load(args.market)
    history = PriceCsvDAO().load(args.prices)
    system, provenance = market_to_system(model, history)
    SystemDAO().save_system(system, provenance, args.out)
    print(f"columns {system.columns} A_rows {len(system.A)} B_rows {len(system.B)}")
    return EXIT_OK


def predict_command(args: argparse.Namespace) -> int:
    """Predict the next day's movement, exactly or in the many-traders limit."""
    model = MarketSpecDAO().load(args.market)
    history = PriceCsvDAO().load(args.prices)

    if args.mode == "exact":
        print(predict_exact(model, history).as_line())
        return EXIT_OK

    prediction = predict_limit_distribution(model, history, args.epsilon, args.eta, args.seed)
    print(f"{prediction.p_up:g}")
    if args.verbose:
        print(f"half_width {prediction.half_width:g}")
        print(f"verdict {prediction.verdict}")
    return EXIT_OK


def limit_frequency_command(args: argparse.Namespace) -> int:
    """Sample finite-m populations and report the up-frequency among those that fit the history."""
    model = MarketSpecDAO().load(args.market)
    history = PriceCsvDAO().load(args.prices)
    result = sample_conditional_frequency(model, history, args.traders, args.trials, args.seed)
    logger.info(f"{result.conditioned} of {result.trials} sampled populations reproduce the history")
    print(f"{result.frequency:.6f}")
    return EXIT_OK


def circuit_compile_command(args: argparse.Namespace) -> int:
    """Compile a netlist (and optional condition netlist) into a market directory."""
    netlists = NetlistDAO()
    c_out = netlists.load(args.netlist)
    c_cond = netlists.load(args.cond) if args.cond else None
    cm = compile_market(c_out, c_cond, PriceRule(args.rule.upper()))
    CompiledMarketDAO().save(cm, c_out, c_cond, args.out_dir)
    print(f"strategies {cm.market.h} history_days {len(cm.history) - 1} target_day {cm.target_day}")
    return EXIT_OK


def circuit_verify_command(args: argparse.Namespace) -> int:
    """Verify a compiled market directory against its netlists."""
    cm, c_out, c_cond = CompiledMarketDAO().load(args.out_dir)
    report = verify_compilation(cm, c_out, c_cond)
    print(report.as_text(), end="")
    require_passing(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Build the market-lab argument parser."""
    parser = _Parser(
        prog="market-lab",
        description="Simulate markets, extract their linear systems and predict price movements",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Simulate a 20-trader DSMC market for 250 days
  market-lab simulate-dsmc --traders 20 --memory 2 --max-period 8 --alpha 0.25 \\
      --days 250 --seed 1 --out runs/dsmc.csv --plot runs/dsmc.svg

  # Exact next-day distribution of a market history
  market-lab predict market.json prices.csv --mode exact

  # Compile and verify an OR circuit
  market-lab circuit compile or.net --rule fi --out-dir build/or
  market-lab circuit verify build/or
        """,
    )
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Enable verbose logging and error tracebacks"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate-dsmc", help="Run one DSMC market")
    simulate.add_argument("--traders", type=int, required=True, help="Number of traders m")
    simulate.add_argument("--memory", type=_positive_int, required=True, help="Memory size k")
    simulate.add_argument("--max-period", type=int, required=True, help="Maximum switching period L")
    simulate.add_argument("--alpha", type=_rational, required=True, help="Unit of price change")
    simulate.add_argument("--days", type=_positive_int, required=True, help="Number of trading days")
    simulate.add_argument("--seed", type=int, required=True, help="Seed for the trader draws")
    simulate.add_argument("--init-prices", help="Price CSV holding the k+1 initial prices")
    simulate.add_argument("--out", required=True, help="Output price CSV")
    simulate.add_argument("--plot", help="Output SVG chart")
    simulate.set_defaults(handler=simulate_dsmc_command)

    batch = commands.add_parser("dsmc-batch", help="Run a YAML batch of DSMC markets")
    batch.add_argument("--config", required=True, help="Path to YAML batch file")
    batch.add_argument("--out-dir", required=True, help="Directory for the price CSVs")
    batch.add_argument("--plot", action="store_true", help="Write an SVG chart next to every CSV")
    batch.set_defaults(handler=dsmc_batch_command)

    extract = commands.add_parser("extract", help="Extract the linear system of a market history")
    extract.add_argument("market", help="market.json")
    extract.add_argument("prices", help="Price CSV")
    extract.add_argument("--out", required=True, help="Output system.json")
    extract.set_defaults(handler=extract_command)

    predict = commands.add_parser("predict", help="Predict the next day's price movement")
    predict.add_argument("market", help="market.json")
    predict.add_argument("prices", help="Price CSV")
    predict.add_argument(
        "--mode",
        choices=["exact", "limit"],
        default="exact",
        help="limit prints p_up; add -v for its error bound",
    )
    predict.add_argument("--epsilon", type=float, default=0.01, help="Limit mode: relative error bound")
    predict.add_argument("--eta", type=float, default=0.01, help="Limit mode: failure probability")
    predict.add_argument("--seed", type=int, help="Limit mode: Monte Carlo seed (required)")
    predict.set_defaults(handler=predict_command)

    frequency = commands.add_parser("limit-frequency", help="Finite-m empirical up-frequency")
    frequency.add_argument("market", help="market.json with a multinomial population")
    frequency.add_argument("prices", help="Price CSV")
    frequency.add_argument("--traders", type=int, required=True, help="Number of traders m")
    frequency.add_argument("--trials", type=_positive_int, required=True, help="Sampled populations")
    frequency.add_argument("--seed", type=int, required=True, help="Sampling seed")
    frequency.set_defaults(handler=limit_frequency_command)

    circuit = commands.add_parser("circuit", help="Compile NOR circuits into markets")
    circuit_commands = circuit.add_subparsers(dest="circuit_command", required=True)

    compile_ = circuit_commands.add_parser("compile", help="Compile a netlist into a market directory")
    compile_.add_argument("netlist", help="Output circuit netlist")
    compile_.add_argument("--cond", help="Condition circuit netlist")
    compile_.add_argument("--rule", choices=["fi", "pi"], default="fi")
    compile_.add_argument("--out-dir", required=True, help="Output market directory")
    compile_.set_defaults(handler=circuit_compile_command)

    verify = circuit_commands.add_parser("verify", help="Verify a compiled market directory")
    verify.add_argument("out_dir", help="Directory written by 'circuit compile'")
    verify.set_defaults(handler=circuit_verify_command)

    return parser


def main(argv: Sequence[str] | None = None) -> None:
    """Main CLI entry point."""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(args.verbose)

    if args.command == "predict" and args.mode == "limit" and args.seed is None:
        parser.error("--seed is required with --mode limit")

    try:
        status = args.handler(args)
    except INFEASIBLE_VERDICTS as e:
        print(f"Infeasible: {e}", file=sys.stderr)
        status = EXIT_INFEASIBLE
    except VerificationError as e:
        print(f"Verification failed: {e}", file=sys.stderr)
        status = EXIT_VERIFICATION
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        if args.verbose:
            traceback.print_exc()
        status = EXIT_USAGE
    except Exception as e:
        print(f"\nAn unexpected error occurred: {e}", file=sys.stderr)
        if args.verbose:
            traceback.print_exc()
        status = EXIT_USAGE
    sys.exit(status)


if __name__ == "__main__":
    main()
