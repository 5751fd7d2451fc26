"""Parameters and results of the deterministic-switching momentum/contrarian market."""

from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from market_lab.models.market import PriceSeries, StrategyKind
from market_lab.utils.rational import Rational


class DsmcParams(BaseModel):
    """Trader count m, maximum switching period L, memory k, price unit alpha, run length and seed."""

    m: int = Field(..., ge=0)
    L: int = Field(..., ge=2)
    k: int = Field(..., ge=1)
    alpha: Rational
    days: int = Field(..., ge=1)
    initial_prices: tuple[Rational, ...]
    seed: int = Field(..., ge=0, lt=2**64)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, alpha: Fraction) -> Fraction:
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        return alpha

    @model_validator(mode="after")
    def _check_initial_prices(self) -> "DsmcParams":
        if len(self.initial_prices) != self.k + 1:
            raise ValueError(
                f"expected {self.k + 1} initial prices for memory k={self.k}, got {len(self.initial_prices)}"
            )
        return self

    @property
    def first_trading_day(self) -> int:
        return self.k + 2


class TraderState(BaseModel):
    initial_kind: StrategyKind
    period: int = Field(..., ge=2)

    model_config = ConfigDict(frozen=True)


class TraderRecord(BaseModel):
    """A trader's draw and its action on every trading day, in day order."""

    initial_kind: StrategyKind
    period: int = Field(..., ge=2)
    actions: tuple[int, ...] = ()
    kinds: tuple[StrategyKind, ...] = ()

    model_config = ConfigDict(frozen=True)


class DsmcRun(BaseModel):
    series: PriceSeries
    traders: tuple[TraderRecord, ...]

    model_config = ConfigDict(frozen=True)


class SummaryStats(BaseModel):
    """Descriptive statistics of the daily price changes."""

    mean_change: Rational
    std_change: float
    lag1_autocorrelation: float
    max_drawup: Rational
    max_drawdown: Rational
    longest_monotone_run: int

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def as_block(self) -> str:
        return "\n".join(f"{key} {value}" for key, value in self.model_dump(mode="json").items())


class DsmcRunConfig(BaseModel):
    """One named run of a YAML batch; initial prices are drawn in [70, 90] when omitted."""

    name: str = Field(..., min_length=1, description="Run name, used for output file names")
    m: int = Field(..., ge=0, description="Number of traders")
    L: int = Field(..., ge=2, description="Maximum strategy switching period")
    k: int = Field(..., ge=1, description="Memory size")
    alpha: Rational = Field(..., description="Unit of price change")
    days: int = Field(..., ge=1, description="Number of trading days")
    seed: int = Field(..., ge=0, lt=2**64, description="Seed for the trader draws")
    initial_prices: tuple[Rational, ...] | None = Field(None, description="Prices of days 1..k+1")
    initial_price_seed: int | None = Field(None, ge=0, lt=2**64, description="Seed for drawn initial prices")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class DsmcBatchConfig(BaseModel):
    """A batch of DSMC runs."""

    runs: list[DsmcRunConfig] = Field(..., description="Runs to execute")


class DsmcBatchResult(BaseModel):
    name: str
    params: DsmcParams
    series: PriceSeries
    stats: SummaryStats
