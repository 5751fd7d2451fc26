"""
NOR netlist text format, evaluation and random generation.

Format: an ``inputs <n>`` line, then one ``g<k> = NOR(<ref>, <ref>)`` line per gate in
order, with refs ``x<i>`` (1-based input) or ``g<j>`` (j < k). ``#`` starts a comment.
The last gate is the output.
"""

import re
from collections.abc import Sequence

import numpy as np

from market_lab.exceptions import NetlistParseError
from market_lab.models.circuit import NorCircuit, NorGate, Operand
from market_lab.utils.logging import get_market_lab_logger

logger = get_market_lab_logger("services.netlist")

INPUTS_LINE = re.compile(r"^inputs\s+(\d+)$")
GATE_LINE = re.compile(r"^g(\d+)\s*=\s*NOR\(\s*(\w+)\s*,\s*(\w+)\s*\)$")
REFERENCE = re.compile(r"^([xg])(\d+)$")


def _parse_operand(token: str, n: int, gate_index: int, line_number: int) -> Operand:
    match = REFERENCE.match(token)
    if match is None:
        raise NetlistParseError(line_number, f"unknown identifier '{token}'")
    index = int(match.group(2))
    if match.group(1) == "x":
        if not 1 <= index <= n:
            raise NetlistParseError(line_number, f"input '{token}' outside x1..x{n}")
        return Operand.input(index)
    if index < 1:
        raise NetlistParseError(line_number, f"unknown identifier '{token}'")
    if index >= gate_index:
        raise NetlistParseError(line_number, f"'{token}' is referenced before its definition")
    return Operand.gate(index)


def parse_netlist(text: str) -> NorCircuit:
    """
    Parse netlist text into a validated circuit.

    Raises:
        NetlistParseError: On a malformed line, an unknown identifier, a forward reference
            or a netlist without gates; the message names the line
    """
    n: int | None = None
    gates: list[NorGate] = []
    last_line = 0

    for line_number, raw in enumerate(text.splitlines(), start=1):
        last_line = line_number
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if n is None:
            header = INPUTS_LINE.match(line)
            if header is None:
                raise NetlistParseError(line_number, f"expected 'inputs <n>', got '{line}'")
            n = int(header.group(1))
            if n < 1:
                raise NetlistParseError(line_number, "a circuit needs at least one input")
            continue

        gate = GATE_LINE.match(line)
        if gate is None:
            raise NetlistParseError(line_number, f"malformed gate line '{line}'")
        gate_index = int(gate.group(1))
        if gate_index != len(gates) + 1:
            raise NetlistParseError(line_number, f"expected gate g{len(gates) + 1}, got g{gate_index}")
        gates.append(
            NorGate(
                left=_parse_operand(gate.group(2), n, gate_index, line_number),
                right=_parse_operand(gate.group(3), n, gate_index, line_number),
            )
        )

    if n is None:
        raise NetlistParseError(max(last_line, 1), "missing 'inputs <n>' line")
    if not gates:
        raise NetlistParseError(max(last_line, 1), "netlist has no gates")
    logger.debug(f"Parsed netlist with {n} inputs and {len(gates)} gates")
    return NorCircuit(n=n, gates=tuple(gates))


def emit_netlist(circuit: NorCircuit) -> str:
    lines = [f"inputs {circuit.n}"]
    lines += [
        f"g{k} = NOR({gate.left.label}, {gate.right.label})" for k, gate in enumerate(circuit.gates, start=1)
    ]
    return "\n".join(lines) + "\n"


def gate_values(circuit: NorCircuit, bits: Sequence[int]) -> list[int]:
    """
    Output of every gate, in gate order.

    Raises:
        ValueError: If the input length differs from n or an input is not 0/1
    """
    if len(bits) != circuit.n:
        raise ValueError(f"circuit has {circuit.n} inputs, got {len(bits)} bits")
    if any(bit not in (0, 1) for bit in bits):
        raise ValueError("circuit inputs must be 0 or 1")

    values: list[int] = []

    def read(operand: Operand) -> int:
        return bits[operand.index - 1] if operand.source == "input" else values[operand.index - 1]

    for gate in circuit.gates:
        values.append(int(not (read(gate.left) or read(gate.right))))
    return values


def eval_circuit(circuit: NorCircuit, bits: Sequence[int]) -> int:
    return gate_values(circuit, bits)[-1]


def random_circuit(n: int, m: int, seed: int) -> NorCircuit:
    """Draw m gates whose operands are uniform over the n inputs and all earlier gates."""
    if n < 1 or m < 1:
        raise ValueError("a random circuit needs n >= 1 and m >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))

    def draw(k: int) -> Operand:
        choice = int(rng.integers(0, n + k - 1))
        return Operand.input(choice + 1) if choice < n else Operand.gate(choice - n + 1)

    return NorCircuit(n=n, gates=tuple(NorGate(left=draw(k), right=draw(k)) for k in range(1, m + 1)))
