"""k-day trend of a price series."""

from collections.abc import Sequence
from fractions import Fraction

from market_lab.models.market import PriceSeries


def window_trend(window: Sequence[Fraction]) -> int:
    """Up-moves minus down-moves between consecutive prices of ``window``."""
    ups = downs = 0
    for yesterday, today in zip(window, window[1:], strict=False):
        if today > yesterday:
            ups += 1
        elif today < yesterday:
            downs += 1
    return ups - downs


def trend(history: PriceSeries, k: int, t: int) -> int:
    """
    Count up-days minus down-days among the k comparisons preceding day t.

    Uses prices of days t-(k+1)..t-1; equal consecutive prices count for neither side.

    Raises:
        ValueError: If k < 1 or the history does not cover days t-(k+1)..t-1
    """
    if k < 1:
        raise ValueError("trend window k must be at least 1")
    if not history.has_day(t - k - 1) or not history.has_day(t - 1):
        raise ValueError(f"trend over k={k} on day {t} needs prices for days {t - k - 1}..{t - 1}")
    start = t - k - 1 - history.first_day
    return window_trend(history.prices[start : start + k + 1])
