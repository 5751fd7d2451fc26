"""Tests for the market-lab command line."""

import json

import pytest

from market_lab.cli.main import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, main

OR_NETLIST = "inputs 2\ng1 = NOR(x1, x2)\ng2 = NOR(g1, g1)\n"
AND_NETLIST = "inputs 2\ng1 = NOR(x1, x1)\ng2 = NOR(x2, x2)\ng3 = NOR(g1, g2)\n"
CONTRADICTION_NETLIST = "inputs 2\ng1 = NOR(x1, x1)\ng2 = NOR(x1, g1)\n"


def run(argv: list[str]) -> int:
    with pytest.raises(SystemExit) as exc_info:
        main(argv)
    return exc_info.value.code


@pytest.fixture
def netlists(tmp_path):
    paths = {}
    for name, text in (("or", OR_NETLIST), ("and", AND_NETLIST), ("never", CONTRADICTION_NETLIST)):
        paths[name] = tmp_path / f"{name}.net"
        paths[name].write_text(text)
    return paths


@pytest.fixture
def two_passive_files(tmp_path):
    market = tmp_path / "market.json"
    market.write_text(
        json.dumps(
            {
                "alpha": 1,
                "strategies": [{"kind": "passive", "actions": [1]}, {"kind": "passive", "actions": [-1]}],
            }
        )
    )
    prices = tmp_path / "prices.csv"
    prices.write_text("day,price\n0,100\n")
    return market, prices


@pytest.fixture
def buy_hold_files(tmp_path):
    market = tmp_path / "limit.json"
    market.write_text(
        json.dumps(
            {
                "alpha": 1,
                "population": {"mode": "multinomial", "m": 10, "p": ["1/2", "1/2"]},
                "strategies": [{"kind": "passive", "actions": [1]}, {"kind": "hold"}],
            }
        )
    )
    prices = tmp_path / "start.csv"
    prices.write_text("day,price\n0,100\n")
    return market, prices


@pytest.mark.unit
class TestArguments:
    def test_unknown_command_is_a_usage_error(self):
        assert run(["fly"]) == EXIT_USAGE

    def test_limit_mode_needs_a_seed(self, two_passive_files):
        market, prices = two_passive_files

        assert run(["predict", str(market), str(prices), "--mode", "limit"]) == EXIT_USAGE

    def test_bad_rational(self, tmp_path):
        argv = ["simulate-dsmc", "--traders", "3", "--memory", "1", "--max-period", "3"]
        argv += ["--alpha", "half", "--days", "5", "--seed", "1", "--out", str(tmp_path / "x.csv")]

        assert run(argv) == EXIT_USAGE

    def test_missing_input_file(self, tmp_path, capsys):
        code = run(["predict", str(tmp_path / "nope.json"), str(tmp_path / "nope.csv")])

        assert code == EXIT_USAGE
        assert "not found" in capsys.readouterr().err


@pytest.mark.integration
class TestSimulation:
    def test_simulate_dsmc(self, tmp_path, capsys):
        out, plot = tmp_path / "runs" / "dsmc.csv", tmp_path / "runs" / "dsmc.svg"
        argv = ["simulate-dsmc", "--traders", "20", "--memory", "2", "--max-period", "8", "--alpha", "0.25"]
        argv += ["--days", "50", "--seed", "1", "--out", str(out), "--plot", str(plot)]

        assert run(argv) == EXIT_OK

        assert len(out.read_text().splitlines()) == 1 + 3 + 50
        assert "<svg" in plot.read_text()
        assert "longest_monotone_run" in capsys.readouterr().out

    def test_simulate_with_initial_prices(self, tmp_path):
        initial = tmp_path / "init.csv"
        initial.write_text("day,price\n1,80\n2,81\n")
        out = tmp_path / "dsmc.csv"
        argv = ["simulate-dsmc", "--traders", "5", "--memory", "1", "--max-period", "3", "--alpha", "1"]
        argv += ["--days", "4", "--seed", "2", "--init-prices", str(initial), "--out", str(out)]

        assert run(argv) == EXIT_OK
        assert out.read_text().splitlines()[1:3] == ["1,80", "2,81"]

    def test_dsmc_batch(self, tmp_path, capsys):
        config = tmp_path / "batch.yaml"
        config.write_text(
            "runs:\n"
            "  - {name: small, m: 4, L: 3, k: 1, alpha: 1, days: 6, seed: 1, initial_prices: ['80', '81']}\n"
        )

        code = run(["dsmc-batch", "--config", str(config), "--out-dir", str(tmp_path / "out"), "--plot"])

        assert code == EXIT_OK
        assert (tmp_path / "out" / "small.csv").exists()
        assert (tmp_path / "out" / "small.svg").exists()
        assert "DSMC Batch Summary:" in capsys.readouterr().out


@pytest.mark.integration
class TestExtractAndPredict:
    def test_extract(self, tmp_path, two_passive_files, capsys):
        market, _ = two_passive_files
        prices = tmp_path / "up.csv"
        prices.write_text("day,price\n0,100\n1,101\n")
        out = tmp_path / "system.json"

        assert run(["extract", str(market), str(prices), "--out", str(out)]) == EXIT_OK

        assert capsys.readouterr().out.strip() == "columns 2 A_rows 1 B_rows 0"
        assert json.loads(out.read_text())["A"] == [[1, -1]]

    def test_predict_exact(self, two_passive_files, capsys):
        market, prices = two_passive_files

        assert run(["predict", str(market), str(prices)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "p_up 1/4 p_down 1/4 p_same 1/2"

    def test_infeasible_history_exit_code(self, tmp_path, two_passive_files, capsys):
        market, _ = two_passive_files
        prices = tmp_path / "jump.csv"
        prices.write_text("day,price\n0,100\n1,103\n")

        assert run(["predict", str(market), str(prices)]) == EXIT_INFEASIBLE
        assert "Infeasible" in capsys.readouterr().err

    def test_predict_limit(self, buy_hold_files, capsys):
        market, prices = buy_hold_files

        code = run(["predict", str(market), str(prices), "--mode", "limit", "--seed", "3"])

        assert code == EXIT_OK
        assert capsys.readouterr().out.splitlines() == ["1"]

    def test_predict_limit_verbose_adds_the_bound(self, buy_hold_files, capsys):
        market, prices = buy_hold_files

        code = run(["-v", "predict", str(market), str(prices), "--mode", "limit", "--seed", "3"])

        assert code == EXIT_OK
        assert capsys.readouterr().out.splitlines() == ["1", "half_width 0", "verdict AlwaysUp"]

    def test_limit_frequency(self, buy_hold_files, capsys):
        market, prices = buy_hold_files

        argv = ["limit-frequency", str(market), str(prices), "--traders", "30"]
        argv += ["--trials", "200", "--seed", "1"]

        code = run(argv)

        assert code == EXIT_OK
        assert capsys.readouterr().out.strip() == "1.000000"


@pytest.mark.integration
class TestCircuitCommands:
    def test_compile_and_verify(self, tmp_path, netlists, capsys):
        out_dir = tmp_path / "or"

        assert run(["circuit", "compile", str(netlists["or"]), "--out-dir", str(out_dir)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "strategies 6 history_days 8 target_day 9"

        assert run(["circuit", "verify", str(out_dir)]) == EXIT_OK
        assert "p_up 3/4" in capsys.readouterr().out

    def test_conditioned_compile(self, tmp_path, netlists, capsys):
        out_dir = tmp_path / "cond"

        argv = ["circuit", "compile", str(netlists["and"]), "--cond", str(netlists["or"])]
        assert run([*argv, "--out-dir", str(out_dir)]) == EXIT_OK
        assert run(["circuit", "verify", str(out_dir)]) == EXIT_OK
        assert "p_up 1/3" in capsys.readouterr().out

    def test_unsatisfiable_condition_exit_code(self, tmp_path, netlists):
        out_dir = tmp_path / "never"
        argv = ["circuit", "compile", str(netlists["or"]), "--cond", str(netlists["never"])]

        assert run([*argv, "--out-dir", str(out_dir)]) == EXIT_OK
        assert run(["circuit", "verify", str(out_dir)]) == EXIT_INFEASIBLE

    def test_tampered_directory_fails_verification(self, tmp_path, netlists, capsys):
        out_dir = tmp_path / "or"
        run(["circuit", "compile", str(netlists["or"]), "--out-dir", str(out_dir)])
        (out_dir / "out.net").write_text(AND_NETLIST)

        assert run(["circuit", "verify", str(out_dir)]) == EXIT_VERIFICATION
        captured = capsys.readouterr()
        assert "check movement FAIL" in captured.out
        assert "Verification failed" in captured.err
