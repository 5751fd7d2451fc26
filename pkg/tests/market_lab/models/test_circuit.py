"""Tests for circuit and compiled-market models."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from market_lab.models.circuit import (
    ColumnRole,
    CompiledMarket,
    NorCircuit,
    NorGate,
    Operand,
    VerificationFailure,
    VerificationReport,
)
from market_lab.models.market import MarketModel, PassiveStrategy, PriceSeries


def gate(left: str, right: str) -> NorGate:
    def operand(label: str) -> Operand:
        return Operand.input(int(label[1:])) if label[0] == "x" else Operand.gate(int(label[1:]))

    return NorGate(left=operand(left), right=operand(right))


@pytest.mark.unit
class TestNorCircuit:
    def test_valid_circuit(self):
        circuit = NorCircuit(n=2, gates=(gate("x1", "x2"), gate("g1", "g1")))

        assert circuit.m == 2
        assert circuit.gates[1].left.label == "g1"

    def test_rejects_input_beyond_n(self):
        with pytest.raises(ValidationError, match="references x3"):
            NorCircuit(n=2, gates=(gate("x1", "x3"),))

    def test_rejects_self_reference(self):
        with pytest.raises(ValidationError, match="not earlier"):
            NorCircuit(n=1, gates=(gate("x1", "g1"),))

    def test_needs_a_gate(self):
        with pytest.raises(ValidationError):
            NorCircuit(n=1, gates=())


@pytest.mark.unit
class TestCompiledMarket:
    def market(self, h: int) -> MarketModel:
        return MarketModel(alpha=1, strategies=tuple(PassiveStrategy() for _ in range(h)))

    def test_variable_map_must_cover_every_strategy(self):
        with pytest.raises(ValidationError, match="1 columns for 2 strategies"):
            CompiledMarket(
                market=self.market(2),
                history=PriceSeries(prices=(Fraction(100),)),
                target_day=1,
                n_inputs=1,
                variable_map=(ColumnRole(name="x1", kind="input"),),
            )

    def test_column_names_must_be_unique(self):
        with pytest.raises(ValidationError, match="unique"):
            CompiledMarket(
                market=self.market(2),
                history=PriceSeries(prices=(Fraction(100),)),
                target_day=1,
                n_inputs=1,
                variable_map=(ColumnRole(name="x1", kind="input"), ColumnRole(name="x1", kind="input")),
            )

    def test_column_lookup(self):
        cm = CompiledMarket(
            market=self.market(2),
            history=PriceSeries(prices=(Fraction(100),)),
            target_day=1,
            n_inputs=1,
            variable_map=(ColumnRole(name="x1", kind="input"), ColumnRole(name="d1", kind="dummy")),
        )

        assert cm.column_of("d1") == 1
        with pytest.raises(KeyError):
            cm.column_of("g1")


@pytest.mark.unit
class TestVerificationReport:
    def test_passing_report_text(self):
        report = VerificationReport(
            n_inputs=2, conditioned_inputs=4, up_inputs=3, expected_p_up="3/4", predicted_p_up="3/4"
        )

        assert report.passed
        assert report.as_text().splitlines() == [
            "check uniqueness PASS (audit exhaustive)",
            "check movement PASS",
            "check probability PASS",
            "p_up 3/4",
        ]

    def test_failures_are_listed_with_witnesses(self):
        report = VerificationReport(
            n_inputs=2,
            failures=(
                VerificationFailure(check="movement", message="moves up", inputs=(1, 0)),
                VerificationFailure(check="history", message="bad step", day=4),
            ),
        )

        text = report.as_text()
        assert not report.passed
        assert report.failed_checks() == {"movement", "history"}
        assert "check uniqueness FAIL" in text
        assert "check movement FAIL" in text
        assert "failure movement inputs 10: moves up" in text
        assert "failure history day 4: bad step" in text

    def test_probability_zero(self):
        report = VerificationReport(n_inputs=1, probability_zero=True)

        assert not report.passed
        assert "probability zero" in report.as_text()
