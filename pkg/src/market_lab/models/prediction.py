"""Prediction results and the many-traders limit classification."""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from market_lab.models.system import Row
from market_lab.utils.rational import Rational


class Prediction(BaseModel):
    """Exact conditional distribution of the next day's movement."""

    p_up: Rational
    p_down: Rational
    p_same: Rational
    consistent_assignments: int = Field(0, ge=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _check_distribution(self) -> "Prediction":
        for value in (self.p_up, self.p_down, self.p_same):
            if not 0 <= value <= 1:
                raise ValueError(f"probability {value} outside [0, 1]")
        if self.p_up + self.p_down + self.p_same != 1:
            raise ValueError("prediction probabilities must sum to 1")
        return self

    def as_line(self) -> str:
        return f"p_up {self.p_up} p_down {self.p_down} p_same {self.p_same}"


class BoundedVerdict(StrEnum):
    UP_LIKELY = "UpLikely"
    DOWN_NOT_UP = "DownNotUp"
    INDETERMINATE = "Indeterminate"


class LimitVerdict(StrEnum):
    HISTORY_LIMIT_INFEASIBLE = "HistoryLimitInfeasible"
    ALWAYS_UP = "AlwaysUp"
    ALWAYS_DOWN = "AlwaysDown"
    RATIO = "Ratio"


class LimitClassification(BaseModel):
    """
    Outcome of sorting history constraints by the sign of A_i p.

    For a ``Ratio`` verdict, ``D`` holds the retained rows reduced to h-1 coordinates,
    ``c_prime`` the reduced target and ``covariance`` the single-trader covariance.
    """

    verdict: LimitVerdict
    D: tuple[Row, ...] = ()
    c_prime: Row = ()
    covariance: tuple[tuple[Rational, ...], ...] = ()
    retained_rows: tuple[int, ...] = ()
    reason: str = ""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class ConeEstimate(BaseModel):
    """Monte Carlo estimate of Pr[DY > 0 and c'Y > 0] / Pr[DY > 0]."""

    ratio: float = Field(..., ge=0.0, le=1.0)
    half_width: float = Field(..., ge=0.0)
    samples: int = Field(..., ge=0)
    conditioned: int = Field(..., ge=0)
    hits: int = Field(..., ge=0)
    relative: bool = Field(True, description="half_width is epsilon times the ratio")

    model_config = ConfigDict(frozen=True)


class LimitPrediction(BaseModel):
    """Limit (m -> infinity) next-day distribution; exact for AlwaysUp/AlwaysDown verdicts."""

    p_up: float = Field(..., ge=0.0, le=1.0)
    p_down: float = Field(..., ge=0.0, le=1.0)
    p_same: float = Field(..., ge=0.0, le=1.0)
    half_width: float = Field(0.0, ge=0.0)
    verdict: LimitVerdict
    estimate: ConeEstimate | None = None

    model_config = ConfigDict(frozen=True)


class ConditionalFrequency(BaseModel):
    """Finite-m Monte Carlo: how often the next day moved up among populations that fit the history."""

    trials: int = Field(..., ge=0)
    conditioned: int = Field(..., ge=0)
    hits: int = Field(..., ge=0)
    frequency: float = Field(..., ge=0.0, le=1.0)

    model_config = ConfigDict(frozen=True)
