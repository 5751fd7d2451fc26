"""Pytest configuration and shared fixtures."""

from fractions import Fraction

import pytest

from market_lab.config.settings import LabSettings
from market_lab.models.circuit import NorCircuit
from market_lab.models.market import (
    HoldStrategy,
    MarketModel,
    Multinomial,
    PassiveStrategy,
    PriceRule,
    PriceSeries,
)
from market_lab.services.netlist import parse_netlist

OR_NETLIST = """\
inputs 2
g1 = NOR(x1, x2)
g2 = NOR(g1, g1)  # inverter
"""

AND_NETLIST = """\
inputs 2
g1 = NOR(x1, x1)
g2 = NOR(x2, x2)
g3 = NOR(g1, g2)
"""

XOR_NETLIST = """\
inputs 2
g1 = NOR(x1, x2)
g2 = NOR(x1, g1)
g3 = NOR(x2, g1)
g4 = NOR(g2, g3)
g5 = NOR(g4, g4)
"""

CONSTANT_ONE_NETLIST = """\
inputs 2
g1 = NOR(x1, x1)
g2 = NOR(x1, g1)
g3 = NOR(g2, g2)
"""

COPY_X1_NETLIST = """\
inputs 2
g1 = NOR(x1, x1)
g2 = NOR(g1, g1)
"""

CONTRADICTION_NETLIST = """\
inputs 2
g1 = NOR(x1, x1)
g2 = NOR(x1, g1)
"""


@pytest.fixture
def or_circuit() -> NorCircuit:
    """x1 OR x2 as a NOR followed by an inverter."""
    return parse_netlist(OR_NETLIST)


@pytest.fixture
def and_circuit() -> NorCircuit:
    return parse_netlist(AND_NETLIST)


@pytest.fixture
def xor_circuit() -> NorCircuit:
    return parse_netlist(XOR_NETLIST)


@pytest.fixture
def constant_one_circuit() -> NorCircuit:
    return parse_netlist(CONSTANT_ONE_NETLIST)


@pytest.fixture
def copy_x1_circuit() -> NorCircuit:
    return parse_netlist(COPY_X1_NETLIST)


@pytest.fixture
def contradiction_circuit() -> NorCircuit:
    """Always 0: NOR(x1, NOT x1)."""
    return parse_netlist(CONTRADICTION_NETLIST)


@pytest.fixture
def two_passive_market() -> MarketModel:
    """Two passive strategies whose day-1 actions are (+1, -1)."""
    return MarketModel(
        alpha=Fraction(1),
        strategies=(PassiveStrategy(actions=(1,)), PassiveStrategy(actions=(-1,))),
    )


@pytest.fixture
def hold_market() -> MarketModel:
    return MarketModel(alpha=Fraction(1), strategies=(HoldStrategy(), HoldStrategy(), HoldStrategy()))


@pytest.fixture
def pi_multinomial_market() -> MarketModel:
    """Three passive strategies under PI with p = (1/2, 1/3, 1/6) and m = 3."""
    return MarketModel(
        alpha=Fraction(1),
        strategies=(
            PassiveStrategy(actions=(1, 0)),
            PassiveStrategy(actions=(-1, 1)),
            PassiveStrategy(actions=(0, -1)),
        ),
        rule=PriceRule.PI,
        population=Multinomial(p=(Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))),
        m=3,
    )


@pytest.fixture
def start_history() -> PriceSeries:
    """Only P_0 = 100."""
    return PriceSeries(prices=(Fraction(100),))


@pytest.fixture
def search_settings() -> LabSettings:
    """Settings that send every enumeration with more than one free column to the search engine."""
    return LabSettings(dense_enumeration_max_columns=1)


@pytest.fixture
def small_cone_settings() -> LabSettings:
    return LabSettings(cone_batch_size=4096)
