"""Tests for circuit encodings and the circuit-to-market compiler."""

from itertools import product

import pytest

from market_lab.models.market import BernoulliSubset, PriceRule
from market_lab.models.system import LinearSystem
from market_lab.services.circuit_compiler import (
    circuit_layout,
    circuit_to_inequalities,
    compile_market,
    expected_extension,
    inequalities_to_equations,
)
from market_lab.services.linear_bridge import market_to_system
from market_lab.services.netlist import eval_circuit, parse_netlist
from market_lab.services.solutions import count_solutions, find_solutions


@pytest.mark.unit
class TestCircuitToInequalities:
    def test_dimensions(self, xor_circuit):
        encoding = circuit_to_inequalities(xor_circuit)

        assert len(encoding.A) == 3 * 5 + 2
        assert encoding.columns == 2 + 5 + 2
        assert [role.name for role in encoding.variable_map][-2:] == ["d1", "d2"]

    @pytest.mark.parametrize("name", ["or_circuit", "and_circuit", "xor_circuit", "constant_one_circuit"])
    def test_unique_extension_carries_the_output(self, name, request):
        circuit = request.getfixturevalue(name)
        encoding = circuit_to_inequalities(circuit)
        system = LinearSystem(columns=encoding.columns, A=encoding.A, c=encoding.c)

        for bits in product((0, 1), repeat=circuit.n):
            solutions = find_solutions(system, fixed=dict(enumerate(bits)))
            assert len(solutions) == 1
            value = sum(a * y for a, y in zip(encoding.c, solutions[0], strict=True))
            assert (value > 0) == (eval_circuit(circuit, bits) == 1)

    def test_repeated_operand_row(self, or_circuit):
        encoding = circuit_to_inequalities(or_circuit)

        # g2 = NOR(g1, g1): third row of g2 is g1 + g2 > 0
        assert encoding.A[-1] == (0, 0, 1, 1, 0, 0)
        assert encoding.row_labels[-1] == "g2 either"


@pytest.mark.unit
class TestInequalitiesToEquations:
    def test_dimensions(self):
        equations = inequalities_to_equations(((1, 1, 1), (1, -1, 0)))

        assert len(equations.B) == 2 * 3 - 2 + 1
        assert equations.columns == 2 * 2 * 3 - 3 * 2 + 3 + 1
        assert set(equations.b) == {1}
        assert equations.row_labels[:3] == ("U", "B1", "B2")

    def test_solutions_are_in_bijection(self):
        A = ((1, 1, 1), (1, -1, 1), (0, 1, -1))
        inequalities = LinearSystem(columns=3, A=A)
        equations = inequalities_to_equations(A)
        system = LinearSystem(columns=equations.columns, B=equations.B, b=equations.b)

        projected = [solution[:3] for solution in find_solutions(system)]

        assert sorted(projected) == sorted(find_solutions(inequalities))
        assert len(set(projected)) == len(projected)

    def test_needs_three_columns(self):
        with pytest.raises(ValueError, match="at least 3 columns"):
            inequalities_to_equations(((1, 1),))

    def test_needs_rows(self):
        with pytest.raises(ValueError, match="at least one"):
            inequalities_to_equations(())

    def test_coefficients_checked(self):
        with pytest.raises(ValueError, match="coefficients"):
            inequalities_to_equations(((2, 0, 0),))

    @pytest.mark.slow
    def test_circuit_encoding_keeps_one_solution_per_input(self, or_circuit):
        encoding = circuit_to_inequalities(or_circuit)
        equations = inequalities_to_equations(encoding.A, encoding.columns, encoding.variable_map)
        system = LinearSystem(columns=equations.columns, B=equations.B, b=equations.b)

        assert len(equations.B) == 41
        assert equations.columns == 79
        assert count_solutions(system) == 4


@pytest.mark.unit
class TestCompileMarket:
    def test_fi_market(self, or_circuit):
        cm = compile_market(or_circuit)

        assert cm.rule is PriceRule.FI
        assert isinstance(cm.market.population, BernoulliSubset)
        assert cm.market.h == 6
        assert len(cm.history) == 9
        assert cm.target_day == 9
        assert cm.history.changes() == [1] * 8
        assert not cm.conditioned

    def test_pi_market(self, or_circuit):
        cm = compile_market(or_circuit, rule=PriceRule.PI)

        assert cm.rule is PriceRule.PI
        assert cm.market.h == 79
        assert len(cm.history) - 1 == 41
        assert cm.row_labels[1] == "B1 (dummy d1)"
        assert cm.variable_map[6].kind == "constant"

    def test_conditioned_layout(self, copy_x1_circuit, or_circuit):
        encoding = circuit_layout(copy_x1_circuit, or_circuit)
        cm = compile_market(copy_x1_circuit, or_circuit)

        assert encoding.columns == 8
        assert len(encoding.A) == 15
        assert encoding.row_labels[-1] == "condition output"
        assert cm.conditioned
        assert cm.column_of("cond.g2") == 3

    def test_input_counts_must_agree(self, or_circuit):
        three_inputs = parse_netlist("inputs 3\ng1 = NOR(x1, x3)\n")

        with pytest.raises(ValueError, match="2 inputs but condition circuit has 3"):
            compile_market(or_circuit, three_inputs)


@pytest.mark.unit
class TestExpectedExtension:
    def test_fi_extension_satisfies_the_history(self, or_circuit):
        cm = compile_market(or_circuit)
        system, _ = market_to_system(cm.market, cm.history)

        extension = expected_extension(cm, or_circuit, None, (1, 0))

        assert extension == (1, 0, 0, 1, 1, 1)
        assert system.is_satisfied_by(extension)

    def test_pi_extension_satisfies_the_equations(self, or_circuit):
        cm = compile_market(or_circuit, rule=PriceRule.PI)
        system, _ = market_to_system(cm.market, cm.history)

        for bits in product((0, 1), repeat=2):
            assert system.is_satisfied_by(expected_extension(cm, or_circuit, None, bits))
