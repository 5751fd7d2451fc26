"""NOR netlists and the markets compiled from them."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from market_lab.models.market import MarketModel, PriceRule, PriceSeries
from market_lab.models.system import Row
from market_lab.utils.rational import Rational


class Operand(BaseModel):
    """Reference to input ``x<index>`` or earlier gate ``g<index>`` (both 1-based)."""

    source: Literal["input", "gate"]
    index: int = Field(..., ge=1)

    model_config = ConfigDict(frozen=True)

    @property
    def label(self) -> str:
        return f"{'x' if self.source == 'input' else 'g'}{self.index}"

    @classmethod
    def input(cls, index: int) -> "Operand":
        return cls(source="input", index=index)

    @classmethod
    def gate(cls, index: int) -> "Operand":
        return cls(source="gate", index=index)


class NorGate(BaseModel):
    left: Operand
    right: Operand

    model_config = ConfigDict(frozen=True)


class NorCircuit(BaseModel):
    """An n-input netlist of 2-input NOR gates; the last gate is the output."""

    n: int = Field(..., ge=1)
    gates: tuple[NorGate, ...] = Field(..., min_length=1)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_references(self) -> "NorCircuit":
        for position, gate in enumerate(self.gates, start=1):
            for operand in (gate.left, gate.right):
                if operand.source == "input" and operand.index > self.n:
                    raise ValueError(f"gate g{position} references x{operand.index} but n={self.n}")
                if operand.source == "gate" and operand.index >= position:
                    raise ValueError(f"gate g{position} references g{operand.index}, which is not earlier")
        return self

    @property
    def m(self) -> int:
        return len(self.gates)


ColumnKind = Literal["input", "gate", "dummy", "constant", "slack", "monotone_slack"]


class ColumnRole(BaseModel):
    """Name and role of one strategy column of a compiled market."""

    name: str
    kind: ColumnKind
    circuit: Literal["out", "cond"] | None = None
    index: tuple[int, ...] = ()

    model_config = ConfigDict(frozen=True)


class CompiledMarket(BaseModel):
    """A market whose next-day movement encodes a circuit's output on a random input."""

    market: MarketModel
    history: PriceSeries
    target_day: int
    n_inputs: int = Field(..., ge=1)
    variable_map: tuple[ColumnRole, ...]
    row_labels: tuple[str, ...] = ()
    conditioned: bool = False

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_columns(self) -> "CompiledMarket":
        if len(self.variable_map) != self.market.h:
            raise ValueError(
                f"variable map names {len(self.variable_map)} columns for {self.market.h} strategies"
            )
        names = [role.name for role in self.variable_map]
        if len(set(names)) != len(names):
            raise ValueError("variable map names must be unique")
        return self

    @property
    def rule(self) -> PriceRule:
        return self.market.rule

    def column_of(self, name: str) -> int:
        for position, role in enumerate(self.variable_map):
            if role.name == name:
                return position
        raise KeyError(name)


class InequalityEncoding(BaseModel):
    """Strict inequalities ``A y > 0`` whose 0-1 solutions are the circuits' consistent evaluations."""

    A: tuple[Row, ...]
    c: Row
    variable_map: tuple[ColumnRole, ...]
    row_labels: tuple[str, ...]

    model_config = ConfigDict(frozen=True)

    @property
    def columns(self) -> int:
        return len(self.variable_map)


class EquationEncoding(BaseModel):
    """Equations ``B y = b`` (every b_i = 1) in bijection with the 0-1 solutions of an inequality system."""

    B: tuple[Row, ...]
    b: tuple[int, ...]
    variable_map: tuple[ColumnRole, ...]
    row_labels: tuple[str, ...]

    model_config = ConfigDict(frozen=True)

    @property
    def columns(self) -> int:
        return len(self.variable_map)


AuditMode = Literal["exhaustive", "search", "skipped"]
CheckName = Literal["history", "uniqueness", "movement", "probability"]


class VerificationFailure(BaseModel):
    check: CheckName
    message: str
    inputs: tuple[int, ...] | None = None
    day: int | None = None

    model_config = ConfigDict(frozen=True)


class VerificationReport(BaseModel):
    """Outcome of checking a compiled market against its circuits by enumeration."""

    n_inputs: int
    conditioned_inputs: int = Field(0, ge=0)
    up_inputs: int = Field(0, ge=0)
    audit: AuditMode = "exhaustive"
    expected_p_up: Rational | None = None
    predicted_p_up: Rational | None = None
    probability_zero: bool = False
    failures: tuple[VerificationFailure, ...] = ()

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.probability_zero

    def failed_checks(self) -> set[str]:
        return {failure.check for failure in self.failures}

    def as_text(self) -> str:
        if self.probability_zero:
            return "history has probability zero: the condition circuit is unsatisfiable\n"
        failed = self.failed_checks()
        lines = [
            f"check uniqueness {'FAIL' if 'uniqueness' in failed or 'history' in failed else 'PASS'} "
            f"(audit {self.audit})",
            f"check movement {'FAIL' if 'movement' in failed else 'PASS'}",
            f"check probability {'FAIL' if 'probability' in failed else 'PASS'}",
        ]
        for failure in self.failures:
            where = f" day {failure.day}" if failure.day is not None else ""
            witness = f" inputs {''.join(map(str, failure.inputs))}" if failure.inputs is not None else ""
            lines.append(f"failure {failure.check}{where}{witness}: {failure.message}")
        if self.predicted_p_up is not None:
            lines.append(f"p_up {self.predicted_p_up}")
        elif self.expected_p_up is not None:
            lines.append(f"expected p_up {self.expected_p_up}")
        return "\n".join(lines) + "\n"
