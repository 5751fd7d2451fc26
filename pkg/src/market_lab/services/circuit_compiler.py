"""
Circuits to markets.

A NOR netlist becomes strict inequalities over 0-1 variables (inputs, gate outputs and two
dummies that are forced to 1); each gate g = NOR(a, b) contributes

    -a - g + d1 + d2 > 0,   -b - g + d1 + d2 > 0,   a + b + g > 0

so the only 0-1 solution extending an input assignment is the circuit's own evaluation.
Slack variables turn the inequalities into equations with right-hand side 1 for PI markets.
"""

from collections.abc import Sequence
from typing import Literal

from market_lab.models.circuit import (
    ColumnRole,
    CompiledMarket,
    EquationEncoding,
    InequalityEncoding,
    NorCircuit,
    Operand,
)
from market_lab.models.market import PriceRule
from market_lab.models.system import LinearSystem, Row
from market_lab.services.linear_bridge import system_to_fi_market, system_to_pi_market
from market_lab.services.netlist import gate_values
from market_lab.utils.logging import get_market_lab_logger

logger = get_market_lab_logger("services.circuit_compiler")

CircuitTag = Literal["out", "cond"]


class _Layout:
    """Column allocation for one or two circuits over shared inputs and shared dummies."""

    def __init__(self, n: int, circuits: Sequence[tuple[str, CircuitTag, NorCircuit]]):
        self.roles = [ColumnRole(name=f"x{i}", kind="input", index=(i,)) for i in range(1, n + 1)]
        self.gate_columns: dict[CircuitTag, list[int]] = {}
        for prefix, tag, circuit in circuits:
            self.gate_columns[tag] = []
            for k in range(1, circuit.m + 1):
                self.gate_columns[tag].append(len(self.roles))
                self.roles.append(ColumnRole(name=f"{prefix}g{k}", kind="gate", circuit=tag, index=(k,)))
        self.d1 = len(self.roles)
        self.d2 = self.d1 + 1
        self.roles += [ColumnRole(name=f"d{i}", kind="dummy", index=(i,)) for i in (1, 2)]

    @property
    def columns(self) -> int:
        return len(self.roles)

    def column(self, tag: CircuitTag, operand: Operand) -> int:
        if operand.source == "input":
            return operand.index - 1
        return self.gate_columns[tag][operand.index - 1]

    def row(self, terms: dict[int, int]) -> Row:
        values = [0] * self.columns
        for column, coefficient in terms.items():
            values[column] += coefficient
        return tuple(values)


def _gate_rows(
    layout: _Layout, tag: CircuitTag, prefix: str, circuit: NorCircuit
) -> tuple[list[Row], list[str]]:
    rows: list[Row] = []
    labels: list[str] = []
    for k, gate in enumerate(circuit.gates, start=1):
        g = layout.gate_columns[tag][k - 1]
        a, b = layout.column(tag, gate.left), layout.column(tag, gate.right)
        rows.append(layout.row({a: -1, g: -1, layout.d1: 1, layout.d2: 1}))
        rows.append(layout.row({b: -1, g: -1, layout.d1: 1, layout.d2: 1}))
        # NOR(a, a): 2a + g > 0 is a + g > 0 over 0-1 values
        rows.append(layout.row({a: 1, g: 1} if a == b else {a: 1, b: 1, g: 1}))
        labels += [f"{prefix}g{k} left", f"{prefix}g{k} right", f"{prefix}g{k} either"]
    return rows, labels


def _encode(circuits: Sequence[tuple[str, CircuitTag, NorCircuit]], condition: bool) -> InequalityEncoding:
    layout = _Layout(circuits[0][2].n, circuits)
    rows = [layout.row({layout.d1: 1}), layout.row({layout.d2: 1})]
    labels = ["dummy d1", "dummy d2"]
    for prefix, tag, circuit in circuits:
        gate_rows, gate_labels = _gate_rows(layout, tag, prefix, circuit)
        rows += gate_rows
        labels += gate_labels
    if condition:
        rows.append(layout.row({layout.gate_columns["cond"][-1]: 1}))
        labels.append("condition output")
    target = layout.row({layout.gate_columns["out"][-1]: 1})
    return InequalityEncoding(
        A=tuple(rows), c=target, variable_map=tuple(layout.roles), row_labels=tuple(labels)
    )


def circuit_to_inequalities(circuit: NorCircuit) -> InequalityEncoding:
    """
    Encode a circuit as 3m+2 strict inequalities in n+m+2 columns.

    Every input assignment has exactly one 0-1 extension satisfying ``A y > 0``, and for
    it ``c . y > 0`` iff the circuit outputs 1.
    """
    encoding = _encode([("", "out", circuit)], condition=False)
    logger.debug(f"Encoded {circuit.m} gates as {len(encoding.A)} inequalities in {encoding.columns} columns")
    return encoding


def _default_roles(columns: int) -> tuple[ColumnRole, ...]:
    return tuple(ColumnRole(name=f"x{j}", kind="input", index=(j,)) for j in range(1, columns + 1))


def inequalities_to_equations(
    A: Sequence[Row], columns: int | None = None, variable_map: Sequence[ColumnRole] | None = None
) -> EquationEncoding:
    """
    Replace ``A x > 0`` (m rows, n >= 3 columns) by mn - m + 1 equations in 2mn - 3m + n + 1 variables.

    Columns are x_1..x_n, the constant u, then s_ij (j < n) and t_ij (j < n - 1), both row-major.
    Equations, all with right-hand side 1, come in the order U, B_1..B_m, then S_ij row-major:

        U:    u = 1
        B_i:  sum_j A_ij x_j - sum_j s_ij = 1
        S_ij: s_ij - s_i,j+1 - t_ij + u = 1

    The s_ij of a solution are non-increasing in j and sum to A_i x - 1, which makes the
    completion of every x with A x > 0 unique.

    Raises:
        ValueError: If there are no rows, fewer than 3 columns, or a coefficient outside {-1, 0, +1}
    """
    if not A:
        raise ValueError("at least one inequality row is required")
    n = len(A[0]) if columns is None else columns
    if n < 3:
        raise ValueError(f"the slack construction needs at least 3 columns, got {n}")
    if any(len(row) != n for row in A):
        raise ValueError(f"every inequality row must have {n} entries")
    if any(a not in (-1, 0, 1) for row in A for a in row):
        raise ValueError("inequality coefficients must be in {-1, 0, +1}")
    m = len(A)

    roles = list(variable_map) if variable_map is not None else list(_default_roles(n))
    if len(roles) != n:
        raise ValueError(f"variable map names {len(roles)} columns, expected {n}")
    u = n
    roles.append(ColumnRole(name="u", kind="constant"))
    s_base = n + 1
    t_base = s_base + m * (n - 1)
    for i in range(1, m + 1):
        roles += [ColumnRole(name=f"s{i}_{j}", kind="slack", index=(i, j)) for j in range(1, n)]
    for i in range(1, m + 1):
        roles += [ColumnRole(name=f"t{i}_{j}", kind="monotone_slack", index=(i, j)) for j in range(1, n - 1)]
    width = len(roles)

    def s(i: int, j: int) -> int:
        return s_base + (i - 1) * (n - 1) + (j - 1)

    def t(i: int, j: int) -> int:
        return t_base + (i - 1) * (n - 2) + (j - 1)

    def row(terms: dict[int, int]) -> Row:
        values = [0] * width
        for column, coefficient in terms.items():
            values[column] = coefficient
        return tuple(values)

    equations = [row({u: 1})]
    labels = ["U"]
    for i, inequality in enumerate(A, start=1):
        terms = {j: a for j, a in enumerate(inequality) if a}
        terms.update({s(i, j): -1 for j in range(1, n)})
        equations.append(row(terms))
        labels.append(f"B{i}")
    for i in range(1, m + 1):
        for j in range(1, n - 1):
            equations.append(row({s(i, j): 1, s(i, j + 1): -1, t(i, j): -1, u: 1}))
            labels.append(f"S{i}_{j}")

    logger.debug(f"Converted {m} inequalities over {n} columns into {len(equations)} equations over {width}")
    return EquationEncoding(
        B=tuple(equations), b=(1,) * len(equations), variable_map=tuple(roles), row_labels=tuple(labels)
    )


def circuit_layout(c_out: NorCircuit, c_cond: NorCircuit | None = None) -> InequalityEncoding:
    """
    The joint inequality system of an output circuit and an optional condition circuit.

    Inputs and dummies are shared; the condition adds the row ``cond output > 0``.

    Raises:
        ValueError: If the circuits have different input counts
    """
    if c_cond is None:
        return _encode([("out.", "out", c_out)], condition=False)
    if c_cond.n != c_out.n:
        raise ValueError(f"output circuit has {c_out.n} inputs but condition circuit has {c_cond.n}")
    return _encode([("cond.", "cond", c_cond), ("out.", "out", c_out)], condition=True)


def compile_market(
    c_out: NorCircuit, c_cond: NorCircuit | None = None, rule: PriceRule = PriceRule.FI
) -> CompiledMarket:
    """
    Compile a circuit (optionally conditioned on a second one) into a bernoulli-subset market.

    The history enforces the joint inequality system (FI) or its slack equations (PI); the
    day after the history trades the output gate's column alone, so the price rises iff the
    circuit outputs 1 on the random input.

    Raises:
        ValueError: If the circuits have different input counts
    """
    encoding = circuit_layout(c_out, c_cond)

    if rule is PriceRule.FI:
        system = LinearSystem(columns=encoding.columns, A=encoding.A, c=encoding.c)
        market, history, _ = system_to_fi_market(system)
        roles, labels = encoding.variable_map, encoding.row_labels
    else:
        equations = inequalities_to_equations(encoding.A, encoding.columns, encoding.variable_map)
        # Slack columns hold on the target day
        target = encoding.c + (0,) * (equations.columns - encoding.columns)
        market, history, _ = system_to_pi_market(
            equations.B, equations.b, columns=equations.columns, c=target
        )
        roles = equations.variable_map
        # Append the source inequality to each B<j> label
        labels = tuple(
            f"{label} ({encoding.row_labels[int(label[1:]) - 1]})" if label.startswith("B") else label
            for label in equations.row_labels
        )

    compiled = CompiledMarket(
        market=market,
        history=history,
        target_day=history.last_day + 1,
        n_inputs=c_out.n,
        variable_map=roles,
        row_labels=labels,
        conditioned=c_cond is not None,
    )
    logger.info(
        f"Compiled {rule} market: {market.h} strategies, {len(history) - 1} history days, "
        f"{'conditioned' if c_cond is not None else 'unconditioned'}"
    )
    return compiled


def expected_extension(
    cm: CompiledMarket, c_out: NorCircuit, c_cond: NorCircuit | None, bits: Sequence[int]
) -> tuple[int, ...]:
    """
    The column assignment the construction intends for an input assignment.

    Gates take their evaluated values, dummies and u are 1, and each row's slacks are the
    monotone 0-1 sequence summing to A_i y - 1 (clamped at 0 for rows the input violates).
    """
    values: dict[CircuitTag, list[int]] = {"out": gate_values(c_out, bits)}
    if c_cond is not None:
        values["cond"] = gate_values(c_cond, bits)
    encoding = circuit_layout(c_out, c_cond)

    def base_value(role: ColumnRole) -> int:
        match role.kind:
            case "input":
                return bits[role.index[0] - 1]
            case "gate":
                return values[role.circuit or "out"][role.index[0] - 1]
            case _:
                return 1

    base = [base_value(role) for role in encoding.variable_map]
    excess = [max(sum(a * y for a, y in zip(row, base, strict=True)) - 1, 0) for row in encoding.A]

    def slack(i: int, j: int) -> int:
        return int(j <= excess[i - 1])

    extension: list[int] = []
    for role in cm.variable_map:
        match role.kind:
            case "slack":
                extension.append(slack(*role.index))
            case "monotone_slack":
                i, j = role.index
                extension.append(slack(i, j) - slack(i, j + 1))
            case _:
                extension.append(base_value(role))
    return tuple(extension)
