"""Tests for the market, price, system and netlist file DAOs."""

import json
from fractions import Fraction

import pytest

from market_lab.dao.market_dao import MarketSpecDAO
from market_lab.dao.netlist_dao import NetlistDAO
from market_lab.dao.price_dao import PriceCsvDAO
from market_lab.dao.system_dao import SystemDAO
from market_lab.models.market import (
    MomentumStrategy,
    Multinomial,
    PassiveStrategy,
    PriceRule,
    PriceSeries,
    StrategyKind,
    SwitchingStrategy,
)
from market_lab.models.system import DayProvenance, LinearSystem, Movement, RowTag

MARKET_JSON = """
{
  "alpha": "0.25",
  "rule": "PI",
  "population": {"mode": "multinomial", "m": 3, "p": ["1/2", "1/3", "1/6"]},
  "strategies": [
    {"kind": "passive", "actions": [1, 0]},
    {"kind": "momentum", "k": 2},
    {"kind": "switching", "initial": "C", "period": 3, "k": 1, "start": 2}
  ]
}
"""


@pytest.mark.unit
class TestMarketSpecDAO:
    def test_loads_tagged_strategies(self, tmp_path):
        path = tmp_path / "market.json"
        path.write_text(MARKET_JSON)

        model = MarketSpecDAO().load(path)

        assert model.alpha == Fraction(1, 4)
        assert model.rule is PriceRule.PI
        assert model.trader_count == 3
        assert isinstance(model.population, Multinomial)
        assert model.strategies == (
            PassiveStrategy(actions=(1, 0)),
            MomentumStrategy(k=2),
            SwitchingStrategy(initial=StrategyKind.CONTRARIAN, period=3, k=1, start=2),
        )

    def test_save_and_load(self, tmp_path, pi_multinomial_market):
        dao = MarketSpecDAO()

        path = dao.save(pi_multinomial_market, tmp_path / "nested" / "market.json")

        assert dao.load(path) == pi_multinomial_market
        written = json.loads(path.read_text())
        assert written["population"]["p"] == ["1/2", "1/3", "1/6"]
        assert written["alpha"] == "1"

    def test_bernoulli_market_without_m(self, tmp_path, two_passive_market):
        dao = MarketSpecDAO()

        path = dao.save(two_passive_market, tmp_path / "market.json")

        assert "\"m\"" not in path.read_text()
        assert dao.load(path) == two_passive_market

    def test_invalid_market(self, tmp_path):
        path = tmp_path / "market.json"
        path.write_text('{"alpha": "0", "strategies": []}')

        with pytest.raises(ValueError, match="Invalid market spec"):
            MarketSpecDAO().load(path)

    def test_unknown_strategy_kind(self, tmp_path):
        path = tmp_path / "market.json"
        path.write_text('{"alpha": 1, "strategies": [{"kind": "oracle"}]}')

        with pytest.raises(ValueError, match="Invalid market spec"):
            MarketSpecDAO().load(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="market spec not found"):
            MarketSpecDAO().load(tmp_path / "missing.json")


@pytest.mark.unit
class TestPriceCsvDAO:
    def test_writes_exact_prices(self, tmp_path):
        series = PriceSeries(prices=(Fraction(80), Fraction(321, 4), Fraction(161, 2)), first_day=1)

        path = PriceCsvDAO().save(series, tmp_path / "prices.csv")

        assert path.read_text() == "day,price\n1,80\n2,321/4\n3,161/2\n"
        assert PriceCsvDAO().load(path) == series

    def test_reads_decimals(self, tmp_path):
        path = tmp_path / "prices.csv"
        path.write_text("day,price\n0,100\n1,100.25\n")

        assert PriceCsvDAO().load(path).prices == (Fraction(100), Fraction(401, 4))

    @pytest.mark.parametrize(
        "text,message",
        [
            ("time,value\n0,1\n", "expected header"),
            ("day,price\n0,1\n2,3\n", "line 3: day 2 does not follow day 0"),
            ("day,price\n0,abc\n", "line 2"),
            ("day,price\n", "no rows"),
        ],
    )
    def test_invalid_files(self, tmp_path, text, message):
        path = tmp_path / "prices.csv"
        path.write_text(text)

        with pytest.raises(ValueError, match=message):
            PriceCsvDAO().load(path)


@pytest.mark.unit
class TestSystemDAO:
    def test_save_and_load(self, tmp_path):
        system = LinearSystem(columns=3, A=((1, -1, 0),), B=((0, 1, 1),), b=(0,), c=(1, 0, 0))
        provenance = DayProvenance(
            rows=(
                RowTag(day=1, movement=Movement.UP, matrix="A", row=0),
                RowTag(day=2, movement=Movement.FLAT, matrix="B", row=0),
            )
        )
        dao = SystemDAO()

        path = dao.save_system(system, provenance, tmp_path / "system.json")
        loaded_system, loaded_provenance = dao.load(path).to_system()

        assert loaded_system == system
        assert loaded_provenance == provenance
        assert json.loads(path.read_text())["provenance"][1]["movement"] == "flat"

    def test_rejects_inconsistent_rows(self, tmp_path):
        path = tmp_path / "system.json"
        path.write_text('{"columns": 2, "A": [[1, 0, 1]]}')

        with pytest.raises(ValueError, match="expected 2"):
            SystemDAO().load(path).to_system()


@pytest.mark.unit
class TestNetlistDAO:
    def test_save_and_load(self, tmp_path, xor_circuit):
        dao = NetlistDAO()

        path = dao.save(xor_circuit, tmp_path / "xor.net")

        assert dao.load(path) == xor_circuit

    def test_parse_errors_carry_the_path(self, tmp_path):
        path = tmp_path / "bad.net"
        path.write_text("inputs 1\ng1 = NOR(x1, x2)\n")

        with pytest.raises(ValueError, match="Invalid netlist in .*bad.net: line 2"):
            NetlistDAO().load(path)
