"""Domain types of the arbitrary-strategies (AS) market model."""

from enum import StrEnum
from fractions import Fraction
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from market_lab.utils.rational import Rational

Action = Annotated[int, Field(ge=-1, le=1)]


class PriceRule(StrEnum):
    """Price increment rule: fixed (FI) or proportional (PI)."""

    FI = "FI"
    PI = "PI"


class StrategyKind(StrEnum):
    MOMENTUM = "M"
    CONTRARIAN = "C"

    def flipped(self) -> "StrategyKind":
        return StrategyKind.CONTRARIAN if self is StrategyKind.MOMENTUM else StrategyKind.MOMENTUM


class PriceSeries(BaseModel):
    """
    Exact prices for consecutive days, starting at ``first_day``.

    AS-model histories start at day 0; DSMC series start at day 1 because their
    given prices occupy days 1..k+1.
    """

    prices: tuple[Rational, ...] = Field(..., min_length=1)
    first_day: int = Field(0, ge=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def last_day(self) -> int:
        return self.first_day + len(self.prices) - 1

    @property
    def last_price(self) -> Fraction:
        return self.prices[-1]

    def price(self, day: int) -> Fraction:
        if day < self.first_day or day > self.last_day:
            raise ValueError(f"no price for day {day} (series covers {self.first_day}..{self.last_day})")
        return self.prices[day - self.first_day]

    def has_day(self, day: int) -> bool:
        return self.first_day <= day <= self.last_day

    def changes(self) -> list[Fraction]:
        return [b - a for a, b in zip(self.prices, self.prices[1:], strict=False)]

    def extended(self, *prices: Fraction) -> "PriceSeries":
        return PriceSeries(prices=(*self.prices, *prices), first_day=self.first_day)

    def truncated(self, last_day: int) -> "PriceSeries":
        return PriceSeries(prices=self.prices[: last_day - self.first_day + 1], first_day=self.first_day)

    def __len__(self) -> int:
        return len(self.prices)


class PassiveStrategy(BaseModel):
    """A fixed per-day action table; ``actions[j]`` is the action of trading day ``j + 1``."""

    kind: Literal["passive"] = "passive"
    actions: tuple[Action, ...] = ()

    model_config = ConfigDict(frozen=True)

    def action_on(self, day: int) -> int:
        if 1 <= day <= len(self.actions):
            return self.actions[day - 1]
        return 0


class MomentumStrategy(BaseModel):
    kind: Literal["momentum"] = "momentum"
    k: int = Field(..., ge=1)

    model_config = ConfigDict(frozen=True)


class ContrarianStrategy(BaseModel):
    kind: Literal["contrarian"] = "contrarian"
    k: int = Field(..., ge=1)

    model_config = ConfigDict(frozen=True)


class SwitchingStrategy(BaseModel):
    """Momentum/contrarian alternation: ``initial`` for days [start, start+period), then flipping."""

    kind: Literal["switching"] = "switching"
    initial: StrategyKind
    period: int = Field(..., ge=2)
    k: int = Field(..., ge=1)
    start: int = Field(1, ge=1)

    model_config = ConfigDict(frozen=True)

    def kind_on(self, day: int) -> StrategyKind | None:
        if day < self.start:
            return None
        phase = (day - self.start) // self.period
        return self.initial if phase % 2 == 0 else self.initial.flipped()


class HoldStrategy(BaseModel):
    kind: Literal["hold"] = "hold"

    model_config = ConfigDict(frozen=True)


Strategy = Annotated[
    PassiveStrategy | MomentumStrategy | ContrarianStrategy | SwitchingStrategy | HoldStrategy,
    Field(discriminator="kind"),
]


class BernoulliSubset(BaseModel):
    """Each strategy is adopted by one trader with probability 1/2, independently."""

    mode: Literal["bernoulli-subset"] = "bernoulli-subset"

    model_config = ConfigDict(frozen=True)


class Multinomial(BaseModel):
    """Each of the m traders picks strategy i independently with probability p_i."""

    mode: Literal["multinomial"] = "multinomial"
    p: tuple[Rational, ...] = Field(..., min_length=1)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("p")
    @classmethod
    def _check_probabilities(cls, p: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        if any(value <= 0 for value in p):
            raise ValueError("multinomial probabilities must all be positive")
        if sum(p) != 1:
            raise ValueError(f"multinomial probabilities must sum to 1, got {sum(p)}")
        return p


PopulationDistribution = Annotated[BernoulliSubset | Multinomial, Field(discriminator="mode")]


class PopulationCounts(BaseModel):
    """Realized strategy counts X_1..X_h."""

    counts: tuple[int, ...]

    model_config = ConfigDict(frozen=True)

    @field_validator("counts")
    @classmethod
    def _check_non_negative(cls, counts: tuple[int, ...]) -> tuple[int, ...]:
        if any(x < 0 for x in counts):
            raise ValueError("population counts must be non-negative")
        return counts

    def scaled(self, factor: int) -> "PopulationCounts":
        return PopulationCounts(counts=tuple(factor * x for x in self.counts))


class MarketModel(BaseModel):
    """
    The AS model: trader count, price unit, strategy set, increment rule and population law.

    For Bernoulli-subset populations ``m`` may be omitted and ``trader_count`` is then h,
    the largest possible number of traders; multinomial populations require it.
    """

    alpha: Rational
    strategies: tuple[Strategy, ...] = ()
    rule: PriceRule = PriceRule.FI
    population: PopulationDistribution = Field(default_factory=BernoulliSubset)
    m: int | None = Field(None, ge=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, alpha: Fraction) -> Fraction:
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        return alpha

    @model_validator(mode="after")
    def _check_population(self) -> "MarketModel":
        if isinstance(self.population, Multinomial):
            if len(self.population.p) != self.h:
                raise ValueError(
                    f"multinomial population has {len(self.population.p)} probabilities "
                    f"for {self.h} strategies"
                )
            if self.m is None:
                raise ValueError("multinomial populations need a trader count m")
        return self

    @property
    def h(self) -> int:
        return len(self.strategies)

    @property
    def trader_count(self) -> int:
        return self.m if self.m is not None else self.h
