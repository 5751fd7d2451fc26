"""
Strategy evaluation and day-by-day price dynamics of the AS model.
"""

from fractions import Fraction

import numpy as np

from market_lab.models.market import (
    BernoulliSubset,
    ContrarianStrategy,
    HoldStrategy,
    MarketModel,
    MomentumStrategy,
    Multinomial,
    PassiveStrategy,
    PopulationCounts,
    PopulationDistribution,
    PriceRule,
    PriceSeries,
    Strategy,
    StrategyKind,
    SwitchingStrategy,
)
from market_lab.services.trend import trend
from market_lab.utils.logging import get_market_lab_logger
from market_lab.utils.rational import sign

logger = get_market_lab_logger("services.market_engine")


def _trend_action(kind: StrategyKind, k: int, history: PriceSeries, day: int) -> int:
    # Not enough history for a k-window yet: hold.
    if not history.has_day(day - k - 1):
        return 0
    momentum = 1 if trend(history, k, day) >= 0 else -1
    return momentum if kind is StrategyKind.MOMENTUM else -momentum


def eval_strategy(strategy: Strategy, history: PriceSeries, day: int) -> int:
    """
    Evaluate a strategy's action (+1 buy, 0 hold, -1 sell) for a trading day.

    Args:
        strategy: Strategy to evaluate
        history: Prices observed before ``day``
        day: Trading day, strictly after the first day of the history

    Returns:
        The action in {-1, 0, +1}

    Raises:
        ValueError: If ``day`` is not a trading day of this history
    """
    if day < 1 or day <= history.first_day:
        raise ValueError(f"no trading on day {day}; the first trading day is {max(1, history.first_day + 1)}")

    match strategy:
        case PassiveStrategy():
            return strategy.action_on(day)
        case HoldStrategy():
            return 0
        case MomentumStrategy(k=k):
            return _trend_action(StrategyKind.MOMENTUM, k, history, day)
        case ContrarianStrategy(k=k):
            return _trend_action(StrategyKind.CONTRARIAN, k, history, day)
        case SwitchingStrategy():
            kind = strategy.kind_on(day)
            if kind is None:
                return 0
            return _trend_action(kind, strategy.k, history, day)
    raise ValueError(f"unknown strategy {strategy!r}")


def strategy_actions(model: MarketModel, history: PriceSeries, day: int) -> tuple[int, ...]:
    """The action row (S^1_day, ..., S^h_day) of every strategy for one day."""
    return tuple(eval_strategy(strategy, history, day) for strategy in model.strategies)


def check_counts(model: MarketModel, counts: PopulationCounts) -> None:
    """
    Validate counts against the model's population mode.

    Raises:
        ValueError: On a length mismatch, a non-binary Bernoulli entry or a multinomial total != m
    """
    if len(counts.counts) != model.h:
        raise ValueError(f"population has {len(counts.counts)} counts for {model.h} strategies")
    if isinstance(model.population, BernoulliSubset):
        if any(x not in (0, 1) for x in counts.counts):
            raise ValueError("bernoulli-subset counts must be 0 or 1")
    elif sum(counts.counts) != model.trader_count:
        raise ValueError(f"multinomial counts sum to {sum(counts.counts)}, expected m={model.trader_count}")


def net_order_flow(model: MarketModel, history: PriceSeries, counts: PopulationCounts, day: int) -> int:
    """Sum of X_i * S^i_day over all strategies."""
    actions = strategy_actions(model, history, day)
    return sum(x * action for x, action in zip(counts.counts, actions, strict=True))


def price_change(model: MarketModel, flow: int) -> Fraction:
    if model.rule is PriceRule.PI:
        return model.alpha * flow
    return model.alpha * sign(flow)


def market_step(model: MarketModel, history: PriceSeries, counts: PopulationCounts, day: int) -> Fraction:
    """
    Compute the price of ``day`` from the previous price and the day's order flow.

    PI: P_day = P_{day-1} + alpha * flow.  FI: P_day = P_{day-1} + alpha * sgn(flow).
    """
    check_counts(model, counts)
    flow = net_order_flow(model, history, counts, day)
    return history.price(day - 1) + price_change(model, flow)


def simulate_as(model: MarketModel, counts: PopulationCounts, initial: PriceSeries, days: int) -> PriceSeries:
    """
    Extend ``initial`` by ``days`` prices, applying market_step day after day.

    Args:
        model: Market to run
        counts: Realized population, fixed for the whole run
        initial: Observed prices to start from
        days: Number of days to add

    Returns:
        The extended series
    """
    if days < 0:
        raise ValueError("days must be non-negative")
    check_counts(model, counts)

    prices = list(initial.prices)
    for day in range(initial.last_day + 1, initial.last_day + 1 + days):
        history = PriceSeries.model_construct(prices=tuple(prices), first_day=initial.first_day)
        flow = net_order_flow(model, history, counts, day)
        prices.append(prices[-1] + price_change(model, flow))

    logger.debug(f"Simulated {days} days for {model.h} strategies under {model.rule}")
    return PriceSeries(prices=tuple(prices), first_day=initial.first_day)


def sample_population(dist: PopulationDistribution, h: int, m: int, seed: int) -> PopulationCounts:
    """
    Draw a population with a PCG64 generator seeded by ``seed``.

    Args:
        dist: Population law
        h: Number of strategies
        m: Number of traders (multinomial only)
        seed: 64-bit seed; equal seeds give equal populations

    Returns:
        Counts X_1..X_h
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    if isinstance(dist, Multinomial):
        if len(dist.p) != h:
            raise ValueError(f"multinomial law has {len(dist.p)} probabilities for {h} strategies")
        if sum(dist.p) != 1:
            raise ValueError("multinomial probabilities must sum to 1")
        draws = rng.multinomial(m, [float(p) for p in dist.p])
        return PopulationCounts(counts=tuple(int(x) for x in draws))
    return PopulationCounts(counts=tuple(int(bit) for bit in rng.integers(0, 2, size=h)))


def tabulate_strategies(model: MarketModel, history: PriceSeries) -> tuple[PassiveStrategy, ...]:
    """
    Replace every strategy by the passive table of its actions along ``history``.

    The table covers all trading days of the history plus the next day, so the tabulated
    market agrees with the original on this history and on its prediction target.
    """
    days = range(max(1, history.first_day + 1), history.last_day + 2)
    tables: list[list[int]] = [[0] * (days.stop - 1) for _ in model.strategies]
    for day in days:
        for column, action in enumerate(strategy_actions(model, history, day)):
            tables[column][day - 1] = action
    return tuple(PassiveStrategy(actions=tuple(table)) for table in tables)
