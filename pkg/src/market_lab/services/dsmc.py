"""
The deterministic-switching momentum/contrarian (DSMC) market.

Traders draw an initial kind and a switching period once, from a PCG64 generator seeded
with the run seed (kinds first, then periods). Everything afterwards is deterministic.
"""

from fractions import Fraction
from pathlib import Path

import numpy as np
import yaml
from pydantic import ValidationError

from market_lab.models.dsmc import (
    DsmcBatchConfig,
    DsmcBatchResult,
    DsmcParams,
    DsmcRun,
    SummaryStats,
    TraderRecord,
    TraderState,
)
from market_lab.models.market import (
    MarketModel,
    Multinomial,
    PopulationCounts,
    PriceRule,
    PriceSeries,
    StrategyKind,
    SwitchingStrategy,
)
from market_lab.services.trend import trend, window_trend
from market_lab.utils.logging import get_market_lab_logger

logger = get_market_lab_logger("services.dsmc")


def draw_traders(params: DsmcParams) -> list[TraderState]:
    """Draw each trader's initial kind (uniform over M, C) and period (uniform over 2..L)."""
    rng = np.random.Generator(np.random.PCG64(params.seed))
    kinds = rng.integers(0, 2, size=params.m)
    periods = rng.integers(2, params.L + 1, size=params.m)
    return [
        TraderState(
            initial_kind=StrategyKind.MOMENTUM if kind == 0 else StrategyKind.CONTRARIAN,
            period=int(period),
        )
        for kind, period in zip(kinds, periods, strict=True)
    ]


def simulate_dsmc(params: DsmcParams) -> DsmcRun:
    """
    Run the DSMC market for ``params.days`` trading days.

    The given prices occupy days 1..k+1; trading starts on day k+2, where every trader
    applies its current kind to the k-day trend and P_t = P_{t-1} + alpha * (m_b - m_s).

    Args:
        params: Model parameters and seed

    Returns:
        The full price series (first day 1) and a per-trader action log
    """
    traders = draw_traders(params)

    # +1 for momentum, -1 for contrarian; flipped on odd phases
    initial_signs = np.array(
        [1 if t.initial_kind is StrategyKind.MOMENTUM else -1 for t in traders], dtype=np.int64
    )
    periods = np.array([t.period for t in traders], dtype=np.int64)
    actions = np.zeros((params.m, params.days), dtype=np.int8)

    prices: list[Fraction] = list(params.initial_prices)
    for offset in range(params.days):
        momentum_action = 1 if window_trend(prices[-(params.k + 1) :]) >= 0 else -1
        phase_signs = np.where(((offset // periods) % 2) == 0, initial_signs, -initial_signs)
        day_actions = phase_signs * momentum_action
        actions[:, offset] = day_actions
        prices.append(prices[-1] + params.alpha * int(day_actions.sum()))

    # Per-trader action log
    records = tuple(
        TraderRecord(
            initial_kind=trader.initial_kind,
            period=trader.period,
            actions=tuple(int(a) for a in actions[index]),
            kinds=tuple(
                trader.initial_kind if (offset // trader.period) % 2 == 0 else trader.initial_kind.flipped()
                for offset in range(params.days)
            ),
        )
        for index, trader in enumerate(traders)
    )
    series = PriceSeries(prices=tuple(prices), first_day=1)
    logger.info(
        f"DSMC run: m={params.m}, L={params.L}, k={params.k}, alpha={params.alpha}, "
        f"{params.days} trading days, seed={params.seed}, final price {series.last_price}"
    )
    return DsmcRun(series=series, traders=records)


def dsmc_as_market(
    params: DsmcParams, traders: list[TraderState] | None = None
) -> tuple[MarketModel, PopulationCounts, PriceSeries]:
    """
    Re-express a DSMC run as an AS market under the PI rule.

    Each (initial kind, period) pair becomes a switching strategy starting on day k+2; the
    2(L-1) pairs are equally likely, so the population law is a uniform multinomial.

    Returns:
        The market, the realized counts of the drawn traders and the initial series
    """
    if traders is None:
        traders = draw_traders(params)
    pairs = [(kind, period) for kind in StrategyKind for period in range(2, params.L + 1)]
    strategies = tuple(
        SwitchingStrategy(initial=kind, period=period, k=params.k, start=params.first_trading_day)
        for kind, period in pairs
    )
    counts = [0] * len(pairs)
    for trader in traders:
        counts[pairs.index((trader.initial_kind, trader.period))] += 1
    model = MarketModel(
        alpha=params.alpha,
        strategies=strategies,
        rule=PriceRule.PI,
        population=Multinomial(p=tuple(Fraction(1, len(pairs)) for _ in pairs)),
        m=params.m,
    )
    initial = PriceSeries(prices=params.initial_prices, first_day=1)
    return model, PopulationCounts(counts=tuple(counts)), initial


def summary_stats(series: PriceSeries) -> SummaryStats:
    """
    Descriptive statistics of the daily changes of a series.

    The mean and the drawup/drawdown are exact; the standard deviation (ddof=1) and the
    lag-1 autocorrelation are floats, and an undefined autocorrelation is reported as 0.

    Raises:
        ValueError: If the series has fewer than 3 prices
    """
    if len(series) < 3:
        raise ValueError(f"summary statistics need at least 3 prices, got {len(series)}")

    changes = series.changes()
    as_float = np.array([float(d) for d in changes])
    std = float(np.std(as_float, ddof=1))

    lagged, leading = as_float[:-1], as_float[1:]
    if len(lagged) < 2 or np.std(lagged) == 0 or np.std(leading) == 0:
        autocorrelation = 0.0
    else:
        autocorrelation = float(np.corrcoef(lagged, leading)[0, 1])

    drawup = drawdown = Fraction(0)
    low = high = series.prices[0]
    for price in series.prices[1:]:
        drawup = max(drawup, price - low)
        drawdown = max(drawdown, high - price)
        low, high = min(low, price), max(high, price)

    longest = run = 0
    previous = 0
    for change in changes:
        direction = (change > 0) - (change < 0)
        run = run + 1 if direction != 0 and direction == previous else (1 if direction != 0 else 0)
        previous = direction
        longest = max(longest, run)

    return SummaryStats(
        mean_change=sum(changes, Fraction(0)) / len(changes),
        std_change=std,
        lag1_autocorrelation=autocorrelation,
        max_drawup=drawup,
        max_drawdown=drawdown,
        longest_monotone_run=longest,
    )


def memory_study_initial_prices(k: int, seed: int) -> tuple[Fraction, ...]:
    """Draw k+1 prices in whole quarters from [70, 90]."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return tuple(Fraction(int(q), 4) for q in rng.integers(280, 361, size=k + 1))


def run_dsmc_batch(config_path: str | Path) -> list[DsmcBatchResult]:
    """
    Run every DSMC configuration listed in a YAML batch file.

    Runs that fail validation are logged and skipped; the others are returned in order.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the file is not a valid batch description
    """
    # Load and validate the batch file
    config_file = Path(config_path)
    if not config_file.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    try:
        with open(config_file) as f:
            config_data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ValueError(f"Invalid YAML in config file: {config_path}") from e

    try:
        config = DsmcBatchConfig.model_validate(config_data)
    except ValidationError as e:
        raise ValueError(f"Invalid batch structure in {config_path}: {e}") from e

    logger.info(f"Starting DSMC batch of {len(config.runs)} runs from {config_path}")
    results: list[DsmcBatchResult] = []
    errors: dict[str, str] = {}
    for run in config.runs:
        try:
            initial = run.initial_prices
            if initial is None:
                price_seed = run.seed if run.initial_price_seed is None else run.initial_price_seed
                initial = memory_study_initial_prices(run.k, price_seed)
            params = DsmcParams(
                m=run.m,
                L=run.L,
                k=run.k,
                alpha=run.alpha,
                days=run.days,
                initial_prices=initial,
                seed=run.seed,
            )
            series = simulate_dsmc(params).series
            stats = summary_stats(series)
            results.append(DsmcBatchResult(name=run.name, params=params, series=series, stats=stats))
        except ValueError as e:
            logger.error(f"DSMC run '{run.name}' failed: {e}")
            errors[run.name] = str(e)

    logger.info(f"DSMC batch completed. Success: {len(results)}, Errors: {len(errors)}")
    if errors:
        logger.warning(f"Some runs failed: {list(errors.keys())}")
    return results


__all__ = [
    "draw_traders",
    "dsmc_as_market",
    "memory_study_initial_prices",
    "run_dsmc_batch",
    "simulate_dsmc",
    "summary_stats",
    "trend",
]
