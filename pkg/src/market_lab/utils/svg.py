"""SVG line charts of price series."""

import io

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from market_lab.models.market import PriceSeries

DPI = 100
SERIES_GID = "price-series"


def render_price_svg(
    series: PriceSeries, width: int = 1000, height: int = 500, title: str | None = None
) -> str:
    """
    Render a series as an SVG document, one vertex per day.

    Element ids are salted with a fixed string and the date metadata is dropped, so equal
    series give byte-identical documents.

    Args:
        series: Prices to plot against their day labels
        width: Figure width in pixels
        height: Figure height in pixels
        title: Optional axes title

    Returns:
        The SVG text
    """
    figure = Figure(figsize=(width / DPI, height / DPI), dpi=DPI)
    FigureCanvasSVG(figure)
    axes = figure.add_subplot()
    days = list(range(series.first_day, series.last_day + 1))
    axes.plot(days, [float(p) for p in series.prices], color="steelblue", linewidth=1.2, gid=SERIES_GID)
    axes.set_xlabel("day")
    axes.set_ylabel("price")
    axes.grid(alpha=0.3)
    if title:
        axes.set_title(title)

    buffer = io.BytesIO()
    with matplotlib.rc_context({"svg.hashsalt": "market-lab", "path.simplify": False}):
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue().decode("utf-8")
