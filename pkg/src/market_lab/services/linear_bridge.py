"""
Conversions between (market, price history) pairs and linear systems over population variables.

Extraction evaluates every strategy once per day; construction emits passive action tables,
so both directions cost O(h * beta).
"""

from collections.abc import Sequence
from fractions import Fraction

from market_lab.config.settings import LabSettings, get_lab_settings
from market_lab.exceptions import InfeasibleHistoryError, MarketLabError
from market_lab.models.market import (
    BernoulliSubset,
    HoldStrategy,
    MarketModel,
    Multinomial,
    PassiveStrategy,
    PopulationDistribution,
    PriceRule,
    PriceSeries,
)
from market_lab.models.system import DayProvenance, LinearSystem, Movement, Row, RowTag
from market_lab.services.market_engine import strategy_actions, tabulate_strategies
from market_lab.utils.logging import get_market_lab_logger
from market_lab.utils.rational import sign, to_fraction

logger = get_market_lab_logger("services.linear_bridge")


def _require_rule(model: MarketModel, rule: PriceRule) -> None:
    if model.rule is not rule:
        raise ValueError(f"expected a {rule} market, got {model.rule}")


def _trading_days(history: PriceSeries) -> range:
    return range(history.first_day + 1, history.last_day + 1)


def fi_market_to_system(model: MarketModel, history: PriceSeries) -> tuple[LinearSystem, DayProvenance]:
    """
    Convert an FI market and its history into ``A x > 0``, ``B x = 0`` and a target row.

    Up and down days give A rows (the action row times the sign of the move), flat days
    give B rows; ``c`` is the action row of the first unobserved day.

    Raises:
        InfeasibleHistoryError: If a price change is not one of -alpha, 0, +alpha
    """
    _require_rule(model, PriceRule.FI)
    a_rows: list[Row] = []
    b_rows: list[Row] = []
    tags: list[RowTag] = []

    for day in _trading_days(history):
        change = history.price(day) - history.price(day - 1)
        if change not in (-model.alpha, 0, model.alpha):
            raise InfeasibleHistoryError(
                day, f"FI price change {change} is not in {{-{model.alpha}, 0, +{model.alpha}}}"
            )
        actions = strategy_actions(model, history, day)
        if change == 0:
            tags.append(RowTag(day=day, movement=Movement.FLAT, matrix="B", row=len(b_rows)))
            b_rows.append(actions)
        else:
            direction = sign(change)
            movement = Movement.UP if direction > 0 else Movement.DOWN
            tags.append(RowTag(day=day, movement=movement, matrix="A", row=len(a_rows)))
            a_rows.append(tuple(direction * action for action in actions))

    target = strategy_actions(model, history, history.last_day + 1)
    system = LinearSystem(columns=model.h, A=tuple(a_rows), B=tuple(b_rows), b=(0,) * len(b_rows), c=target)
    logger.info(
        f"Extracted FI system: {len(a_rows)} inequalities, {len(b_rows)} equations, {model.h} columns"
    )
    return system, DayProvenance(rows=tuple(tags))


def pi_market_to_system(model: MarketModel, history: PriceSeries) -> tuple[LinearSystem, DayProvenance]:
    """
    Convert a PI market and its history into ``B x = b`` with b_j = (P_j - P_{j-1}) / alpha.

    Raises:
        InfeasibleHistoryError: If a normalized price change is not an integer
    """
    _require_rule(model, PriceRule.PI)
    b_rows: list[Row] = []
    rhs: list[int] = []
    tags: list[RowTag] = []

    for day in _trading_days(history):
        normalized = (history.price(day) - history.price(day - 1)) / model.alpha
        if normalized.denominator != 1:
            raise InfeasibleHistoryError(day, f"PI price change is {normalized} alpha, not an integer")
        direction = sign(normalized)
        movement = Movement.UP if direction > 0 else Movement.DOWN if direction < 0 else Movement.FLAT
        tags.append(RowTag(day=day, movement=movement, matrix="B", row=len(b_rows)))
        b_rows.append(strategy_actions(model, history, day))
        rhs.append(int(normalized))

    target = strategy_actions(model, history, history.last_day + 1)
    system = LinearSystem(columns=model.h, B=tuple(b_rows), b=tuple(rhs), c=target)
    logger.info(f"Extracted PI system: {len(b_rows)} equations, {model.h} columns")
    return system, DayProvenance(rows=tuple(tags))


def market_to_system(model: MarketModel, history: PriceSeries) -> tuple[LinearSystem, DayProvenance]:
    """Dispatch on the market's increment rule."""
    if model.rule is PriceRule.PI:
        return pi_market_to_system(model, history)
    return fi_market_to_system(model, history)


def _price_defaults(
    alpha: Fraction | None, initial_price: Fraction | None, settings: LabSettings | None
) -> tuple[Fraction, Fraction]:
    settings = settings or get_lab_settings()
    if alpha is None:
        alpha = to_fraction(settings.default_alpha)
    if initial_price is None:
        initial_price = to_fraction(settings.default_initial_price)
    return alpha, initial_price


def _passive_columns(rows: Sequence[Row], target: Row, columns: int) -> tuple[PassiveStrategy, ...]:
    return tuple(
        PassiveStrategy(actions=(*(row[column] for row in rows), target[column]))
        for column in range(columns)
    )


def system_to_fi_market(
    system: LinearSystem,
    alpha: Fraction | None = None,
    initial_price: Fraction | None = None,
    population: PopulationDistribution | None = None,
    settings: LabSettings | None = None,
) -> tuple[MarketModel, PriceSeries, DayProvenance]:
    """
    Build an FI market whose history enforces ``A x > 0`` and ``B x = 0``.

    Every A row becomes an up day (row taken verbatim, price +alpha) and every B row a flat
    day, A rows first. Strategy i is passive with the i-th column as its action table and
    ``c_i`` as its action on the day after the history.
    ``alpha`` and ``initial_price`` fall back to the lab settings.

    Raises:
        ValueError: If the system has a non-zero right-hand side
    """
    if any(system.b):
        raise ValueError("an FI market can only encode equations with a zero right-hand side")

    rows = (*system.A, *system.B)
    strategies = _passive_columns(rows, system.c, system.columns)
    alpha, initial_price = _price_defaults(alpha, initial_price, settings)
    prices = [initial_price]
    tags: list[RowTag] = []
    for index, _ in enumerate(system.A):
        prices.append(prices[-1] + alpha)
        tags.append(RowTag(day=len(prices) - 1, movement=Movement.UP, matrix="A", row=index))
    for index, _ in enumerate(system.B):
        prices.append(prices[-1])
        tags.append(RowTag(day=len(prices) - 1, movement=Movement.FLAT, matrix="B", row=index))

    model = MarketModel(
        alpha=alpha, strategies=strategies, rule=PriceRule.FI, population=population or BernoulliSubset()
    )
    logger.info(f"Built FI market: {system.columns} passive strategies, {len(rows)} history days")
    return model, PriceSeries(prices=tuple(prices)), DayProvenance(rows=tuple(tags))


def system_to_pi_market(
    B: Sequence[Row],
    b: Sequence[int],
    columns: int | None = None,
    c: Row | None = None,
    alpha: Fraction | None = None,
    initial_price: Fraction | None = None,
    population: PopulationDistribution | None = None,
    settings: LabSettings | None = None,
) -> tuple[MarketModel, PriceSeries, DayProvenance]:
    """
    Build a PI market whose history enforces ``B x = b``: day j moves the price by alpha * b_j.

    Args:
        B: Equation rows with coefficients in {-1, 0, +1}
        b: Integer right-hand sides, one per row
        columns: Number of variables; inferred from the first row when omitted
        c: Action row of the day after the history (zeros when omitted)
        alpha: Price unit; defaults to the lab settings
        initial_price: Price before the first history day; defaults to the lab settings

    Raises:
        ValueError: On a dimension mismatch or a coefficient outside {-1, 0, +1}
    """
    if len(B) != len(b):
        raise ValueError(f"B has {len(B)} rows but b has {len(b)} entries")
    if columns is None:
        if not B:
            raise ValueError("columns must be given for an empty system")
        columns = len(B[0])
    system = LinearSystem(columns=columns, B=tuple(tuple(r) for r in B), b=tuple(b), c=c or (0,) * columns)

    alpha, initial_price = _price_defaults(alpha, initial_price, settings)
    prices = [initial_price]
    tags: list[RowTag] = []
    for index, rhs in enumerate(system.b):
        prices.append(prices[-1] + alpha * rhs)
        movement = Movement.UP if rhs > 0 else Movement.DOWN if rhs < 0 else Movement.FLAT
        tags.append(RowTag(day=index + 1, movement=movement, matrix="B", row=index))

    model = MarketModel(
        alpha=alpha,
        strategies=_passive_columns(system.B, system.c, columns),
        rule=PriceRule.PI,
        population=population or BernoulliSubset(),
    )
    logger.info(f"Built PI market: {columns} passive strategies, {len(system.B)} history days")
    return model, PriceSeries(prices=tuple(prices)), DayProvenance(rows=tuple(tags))


def embed_pi_fixed_m(
    model: MarketModel, history: PriceSeries, m0: int, m: int
) -> tuple[MarketModel, PriceSeries]:
    """
    Embed an m0-trader PI market into one that accepts any m >= m0 traders.

    Every strategy buys on an inserted day t and trades its original day-t decision on
    day t+1; a hold strategy takes half the probability mass. The inserted day moves the
    price by alpha * m0, so exactly m - m0 traders hold and the remaining counts are
    distributed as in the original market.

    Raises:
        ValueError: If m < m0 or the market is not a multinomial PI market
        MarketLabError: If m0 is not the trader count of ``model``
    """
    _require_rule(model, PriceRule.PI)
    if not isinstance(model.population, Multinomial):
        raise ValueError("the fixed-m embedding needs a multinomial population")
    if m < m0:
        raise ValueError(f"new trader count {m} is below the original {m0}")
    if model.m != m0:
        raise MarketLabError(f"m0={m0} does not match the market's trader count m={model.m}")

    t = history.last_day + 1
    strategies = [
        PassiveStrategy(actions=(*table.actions[: t - 1], 1, table.actions[t - 1]))
        for table in tabulate_strategies(model, history)
    ]
    probabilities = tuple(p / 2 for p in model.population.p) + (Fraction(1, 2),)
    embedded = MarketModel(
        alpha=model.alpha,
        strategies=(*strategies, HoldStrategy()),
        rule=PriceRule.PI,
        population=Multinomial(p=probabilities),
        m=m,
    )
    logger.info(f"Embedded {model.h}-strategy PI market from m0={m0} into m={m}")
    return embedded, history.extended(history.last_price + model.alpha * m0)
