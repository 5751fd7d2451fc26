import csv
import io

from market_lab.models.market import PriceSeries
from market_lab.utils.rational import format_rational, to_fraction

from .files.generic_dao import GenericFileDAO

PRICE_CSV_HEADER = ["day", "price"]


class PriceCsvDAO(GenericFileDAO[PriceSeries]):
    """
    Data access object for ``day,price`` CSV files.

    Days are consecutive from the series' first day; prices are integers, decimals or
    slash fractions, written exactly.
    """

    format_name = "price CSV"

    def dumps(self, model: PriceSeries) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=PRICE_CSV_HEADER, lineterminator="\n")
        writer.writeheader()
        for offset, price in enumerate(model.prices):
            writer.writerow({"day": model.first_day + offset, "price": format_rational(price)})
        return buffer.getvalue()

    def loads(self, text: str) -> PriceSeries:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != PRICE_CSV_HEADER:
            raise ValueError(f"expected header 'day,price', got {reader.fieldnames}")

        days: list[int] = []
        prices = []
        for line_number, row in enumerate(reader, start=2):
            try:
                day = int(row["day"])
                price = to_fraction(row["price"])
            except (TypeError, ValueError) as e:
                raise ValueError(f"line {line_number}: {e}") from e
            if days and day != days[-1] + 1:
                raise ValueError(f"line {line_number}: day {day} does not follow day {days[-1]}")
            days.append(day)
            prices.append(price)

        if not prices:
            raise ValueError("price CSV has no rows")
        return PriceSeries(prices=tuple(prices), first_day=days[0])
