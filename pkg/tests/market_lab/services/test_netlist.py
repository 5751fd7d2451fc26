"""Tests for NOR netlist parsing, evaluation and generation."""

from itertools import product

import pytest

from market_lab.exceptions import NetlistParseError
from market_lab.services.netlist import (
    emit_netlist,
    eval_circuit,
    gate_values,
    parse_netlist,
    random_circuit,
)


def truth_table(circuit) -> list[int]:
    return [eval_circuit(circuit, bits) for bits in product((0, 1), repeat=circuit.n)]


@pytest.mark.unit
class TestParseNetlist:
    def test_parses_gates_and_comments(self, or_circuit):
        assert or_circuit.n == 2
        assert or_circuit.m == 2
        assert or_circuit.gates[1].left.label == "g1"

    def test_blank_lines_and_full_line_comments(self):
        circuit = parse_netlist("# header\n\ninputs 1\n  # note\ng1 = NOR(x1,x1)\n")

        assert circuit.m == 1

    def test_emit_then_parse_gives_the_same_circuit(self, xor_circuit):
        assert parse_netlist(emit_netlist(xor_circuit)) == xor_circuit

    def test_emitted_text(self, or_circuit):
        assert emit_netlist(or_circuit) == "inputs 2\ng1 = NOR(x1, x2)\ng2 = NOR(g1, g1)\n"

    @pytest.mark.parametrize(
        "text,line,message",
        [
            ("g1 = NOR(x1, x1)\n", 1, "expected 'inputs <n>'"),
            ("inputs 2\ng1 = NOR(x1, y1)\n", 2, "unknown identifier 'y1'"),
            ("inputs 2\ng1 = NOR(x1, x3)\n", 2, "outside x1..x2"),
            ("inputs 2\ng1 = NOR(x1, g1)\n", 2, "referenced before its definition"),
            ("inputs 2\ng1 = NOR(x1, x2)\ng3 = NOR(g1, g1)\n", 3, "expected gate g2"),
            ("inputs 2\ng1 = AND(x1, x2)\n", 2, "malformed gate line"),
            ("inputs 2\n", 1, "no gates"),
            ("", 1, "missing 'inputs <n>'"),
            ("inputs 0\n", 1, "at least one input"),
        ],
    )
    def test_errors_name_the_line(self, text, line, message):
        with pytest.raises(NetlistParseError, match=message) as exc_info:
            parse_netlist(text)

        assert exc_info.value.line_number == line
        assert str(exc_info.value).startswith(f"line {line}:")


@pytest.mark.unit
class TestEvaluation:
    def test_truth_tables(
        self,
        or_circuit,
        and_circuit,
        xor_circuit,
        constant_one_circuit,
        copy_x1_circuit,
        contradiction_circuit,
    ):
        assert truth_table(or_circuit) == [0, 1, 1, 1]
        assert truth_table(and_circuit) == [0, 0, 0, 1]
        assert truth_table(xor_circuit) == [0, 1, 1, 0]
        assert truth_table(constant_one_circuit) == [1, 1, 1, 1]
        assert truth_table(copy_x1_circuit) == [0, 0, 1, 1]
        assert truth_table(contradiction_circuit) == [0, 0, 0, 0]

    def test_gate_values(self, or_circuit):
        assert gate_values(or_circuit, (1, 0)) == [0, 1]

    def test_input_length_checked(self, or_circuit):
        with pytest.raises(ValueError, match="2 inputs, got 3 bits"):
            eval_circuit(or_circuit, (1, 0, 1))

    def test_inputs_must_be_bits(self, or_circuit):
        with pytest.raises(ValueError, match="0 or 1"):
            eval_circuit(or_circuit, (2, 0))


@pytest.mark.unit
class TestRandomCircuit:
    def test_shape_and_validity(self):
        circuit = random_circuit(3, 7, seed=12)

        assert circuit.n == 3
        assert circuit.m == 7
        assert parse_netlist(emit_netlist(circuit)) == circuit

    def test_reproducible(self):
        assert random_circuit(4, 5, seed=1) == random_circuit(4, 5, seed=1)

    def test_first_gate_reads_inputs_only(self):
        for seed in range(10):
            gate = random_circuit(2, 1, seed=seed).gates[0]
            assert gate.left.source == "input" and gate.right.source == "input"

    def test_needs_positive_sizes(self):
        with pytest.raises(ValueError):
            random_circuit(0, 3, seed=0)
