"""Tests for the market domain models."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from market_lab.models.market import (
    BernoulliSubset,
    MarketModel,
    MomentumStrategy,
    Multinomial,
    PassiveStrategy,
    PopulationCounts,
    PriceSeries,
    StrategyKind,
    SwitchingStrategy,
)


@pytest.mark.unit
class TestPriceSeries:
    def test_days_start_at_first_day(self):
        series = PriceSeries(prices=("80", "82", "90"), first_day=1)

        assert series.last_day == 3
        assert series.price(1) == 80
        assert series.price(3) == 90
        assert not series.has_day(0)

    def test_price_outside_series_raises(self):
        series = PriceSeries(prices=(Fraction(100),))

        with pytest.raises(ValueError, match="no price for day 1"):
            series.price(1)

    def test_empty_series_rejected(self):
        with pytest.raises(ValidationError):
            PriceSeries(prices=())

    def test_changes_extended_and_truncated(self):
        series = PriceSeries(prices=("1/4", "1/2", "1/2"))

        assert series.changes() == [Fraction(1, 4), Fraction(0)]
        assert series.extended(Fraction(1)).last_price == 1
        assert series.truncated(1).prices == (Fraction(1, 4), Fraction(1, 2))


@pytest.mark.unit
class TestStrategies:
    def test_passive_days_beyond_table_hold(self):
        strategy = PassiveStrategy(actions=(1, -1))

        assert [strategy.action_on(day) for day in (1, 2, 3)] == [1, -1, 0]

    def test_passive_actions_are_bounded(self):
        with pytest.raises(ValidationError):
            PassiveStrategy(actions=(2,))

    def test_momentum_needs_positive_window(self):
        with pytest.raises(ValidationError):
            MomentumStrategy(k=0)

    def test_switching_phases(self):
        strategy = SwitchingStrategy(initial=StrategyKind.MOMENTUM, period=2, k=2, start=4)

        assert strategy.kind_on(3) is None
        assert [strategy.kind_on(day) for day in (4, 5, 6, 7, 8)] == [
            StrategyKind.MOMENTUM,
            StrategyKind.MOMENTUM,
            StrategyKind.CONTRARIAN,
            StrategyKind.CONTRARIAN,
            StrategyKind.MOMENTUM,
        ]

    def test_switching_period_at_least_two(self):
        with pytest.raises(ValidationError):
            SwitchingStrategy(initial=StrategyKind.CONTRARIAN, period=1, k=1)


@pytest.mark.unit
class TestPopulations:
    def test_multinomial_probabilities_must_be_positive(self):
        with pytest.raises(ValidationError):
            Multinomial(p=(Fraction(1), Fraction(0)))

    def test_multinomial_probabilities_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            Multinomial(p=(Fraction(1, 2), Fraction(1, 3)))

    def test_counts_are_non_negative(self):
        with pytest.raises(ValidationError):
            PopulationCounts(counts=(1, -1))

    def test_scaled_counts(self):
        assert PopulationCounts(counts=(1, 2)).scaled(2).counts == (2, 4)


@pytest.mark.unit
class TestMarketModel:
    def test_alpha_must_be_positive(self):
        with pytest.raises(ValidationError):
            MarketModel(alpha=Fraction(0))

    def test_bernoulli_trader_count_defaults_to_h(self):
        model = MarketModel(alpha="1/4", strategies=(PassiveStrategy(), PassiveStrategy()))

        assert isinstance(model.population, BernoulliSubset)
        assert model.alpha == Fraction(1, 4)
        assert model.trader_count == 2

    def test_multinomial_needs_trader_count(self):
        with pytest.raises(ValidationError, match="trader count"):
            MarketModel(
                alpha=1, strategies=(PassiveStrategy(),), population=Multinomial(p=(Fraction(1),))
            )

    def test_multinomial_length_must_match_strategies(self):
        with pytest.raises(ValidationError, match="2 strategies"):
            MarketModel(
                alpha=1,
                strategies=(PassiveStrategy(), PassiveStrategy()),
                population=Multinomial(p=(Fraction(1),)),
                m=5,
            )
