"""Tests for the k-day trend."""

import pytest

from market_lab.models.market import PriceSeries
from market_lab.services.trend import trend, window_trend


@pytest.mark.unit
class TestTrend:
    def test_rising_window(self):
        history = PriceSeries(prices=(80, 82, 90), first_day=1)

        assert trend(history, 2, 4) == 2

    def test_falling_window(self):
        history = PriceSeries(prices=(5, 4, 3, 2), first_day=1)

        assert trend(history, 3, 5) == -3

    def test_flat_steps_count_for_neither_side(self):
        assert window_trend([1, 1, 2, 1]) == 0

    def test_uses_only_the_last_k_steps(self):
        history = PriceSeries(prices=(10, 9, 8, 9, 10))

        assert trend(history, 2, 5) == 2
        assert trend(history, 4, 5) == 0

    def test_window_before_history_raises(self):
        history = PriceSeries(prices=(80, 82, 90), first_day=1)

        with pytest.raises(ValueError, match="needs prices for days 0..3"):
            trend(history, 3, 4)

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError, match="at least 1"):
            trend(PriceSeries(prices=(1, 2)), 0, 2)
