"""API request/response schemas."""

from pydantic import BaseModel, Field

from market_lab.dao.models.files import MarketSpecFile, SystemFile
from market_lab.models.dsmc import SummaryStats
from market_lab.models.market import PriceRule
from market_lab.utils.rational import Rational


class PricePoint(BaseModel):
    day: int
    price: Rational


class MarketHistoryRequest(BaseModel):
    """A market in its market.json shape and the observed prices, first day 0 unless given."""

    market: MarketSpecFile
    prices: list[Rational] = Field(..., min_length=1)
    first_day: int = Field(0, ge=0)


class LimitPredictionRequest(MarketHistoryRequest):
    epsilon: float = Field(0.01, gt=0.0, lt=1.0)
    eta: float = Field(0.01, gt=0.0, lt=1.0)
    seed: int = Field(..., ge=0, lt=2**64)


class CircuitVerifyRequest(BaseModel):
    """Netlist texts of the output circuit and an optional condition circuit."""

    out: str
    cond: str | None = None
    rule: PriceRule = PriceRule.FI


class DsmcResponse(BaseModel):
    series: list[PricePoint]
    stats: SummaryStats


class SystemResponse(SystemFile):
    """The extracted linear system with one provenance tag per trading day."""


class VerificationResponse(BaseModel):
    passed: bool
    report: str
    p_up: Rational | None = None
