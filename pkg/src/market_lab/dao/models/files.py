"""On-disk shapes of market specs, linear systems and compiled-market variable maps."""

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field

from market_lab.models.circuit import ColumnRole, CompiledMarket
from market_lab.models.market import (
    BernoulliSubset,
    MarketModel,
    Multinomial,
    PriceRule,
    PriceSeries,
    Strategy,
)
from market_lab.models.system import DayProvenance, LinearSystem, Row, RowTag
from market_lab.utils.rational import Rational


class BernoulliPopulationFile(BaseModel):
    mode: Literal["bernoulli-subset"] = "bernoulli-subset"
    m: int | None = Field(None, ge=0)


class MultinomialPopulationFile(BaseModel):
    mode: Literal["multinomial"] = "multinomial"
    m: int = Field(..., ge=0)
    p: tuple[Rational, ...] = Field(..., min_length=1)

    model_config = ConfigDict(arbitrary_types_allowed=True)


PopulationFile = Annotated[BernoulliPopulationFile | MultinomialPopulationFile, Field(discriminator="mode")]


class MarketSpecFile(BaseModel):
    """market.json: alpha, rule, population and tagged strategy records."""

    alpha: Rational
    rule: PriceRule = PriceRule.FI
    population: PopulationFile = Field(default_factory=BernoulliPopulationFile)
    strategies: tuple[Strategy, ...] = ()

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def to_market(self) -> MarketModel:
        if isinstance(self.population, MultinomialPopulationFile):
            population: BernoulliSubset | Multinomial = Multinomial(p=self.population.p)
        else:
            population = BernoulliSubset()
        return MarketModel(
            alpha=self.alpha,
            strategies=self.strategies,
            rule=self.rule,
            population=population,
            m=self.population.m,
        )

    @classmethod
    def from_market(cls, model: MarketModel) -> "MarketSpecFile":
        population: BernoulliPopulationFile | MultinomialPopulationFile
        if isinstance(model.population, Multinomial):
            population = MultinomialPopulationFile(m=model.trader_count, p=model.population.p)
        else:
            population = BernoulliPopulationFile(m=model.m)
        return cls(alpha=model.alpha, rule=model.rule, population=population, strategies=model.strategies)


class SystemFile(BaseModel):
    """system.json: the extracted constraints and the day behind each row."""

    columns: int = Field(..., ge=0)
    A: tuple[Row, ...] = ()
    B: tuple[Row, ...] = ()
    b: tuple[int, ...] = ()
    c: Row = ()
    provenance: tuple[RowTag, ...] = ()

    def to_system(self) -> tuple[LinearSystem, DayProvenance]:
        system = LinearSystem(columns=self.columns, A=self.A, B=self.B, b=self.b, c=self.c)
        return system, DayProvenance(rows=self.provenance)

    @classmethod
    def from_system(cls, system: LinearSystem, provenance: DayProvenance) -> "SystemFile":
        return cls(
            columns=system.columns, A=system.A, B=system.B, b=system.b, c=system.c, provenance=provenance.rows
        )


class VariableMapFile(BaseModel):
    """varmap.json: column roles and history row labels of a compiled market."""

    rule: PriceRule
    n_inputs: int = Field(..., ge=1)
    target_day: int
    conditioned: bool = False
    variable_map: tuple[ColumnRole, ...]
    row_labels: tuple[str, ...] = ()

    @classmethod
    def from_compiled(cls, cm: CompiledMarket) -> "VariableMapFile":
        return cls(
            rule=cm.rule,
            n_inputs=cm.n_inputs,
            target_day=cm.target_day,
            conditioned=cm.conditioned,
            variable_map=cm.variable_map,
            row_labels=cm.row_labels,
        )

    def to_compiled(self, market: MarketModel, history: PriceSeries) -> CompiledMarket:
        if market.rule is not self.rule:
            raise ValueError(f"variable map is for a {self.rule} market, market.json is {market.rule}")
        return CompiledMarket(
            market=market,
            history=history,
            target_day=self.target_day,
            n_inputs=self.n_inputs,
            variable_map=self.variable_map,
            row_labels=self.row_labels,
            conditioned=self.conditioned,
        )
