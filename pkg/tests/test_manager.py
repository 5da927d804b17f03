# -*- coding: utf-8 -*-

import csv
import io
import json
import time

import pytest

from miniminimax import helpers, manager
from miniminimax.__version__ import __version__
from miniminimax.constants import THREADS_ENV
from miniminimax.dataset import save_csv, synthesize


@pytest.fixture(autouse=True)
def no_thread_env(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)


@pytest.fixture
def write_csv(tmp_path):
    def write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


@pytest.fixture
def cli(tmp_path, capsys):
    """ run one invocation, returning (exit code, stdout) """
    missing = str(tmp_path / "no-config.ini")

    def run(*args):
        capsys.readouterr()
        parser = helpers.setup_parser()
        code = manager.start(parser.parse_args(list(args) + ["--config", missing]))
        return code, capsys.readouterr().out

    return run


@pytest.fixture
def determined(write_csv):
    return write_csv("x,y\n0,0\n1,1\n", "determined.csv")


@pytest.fixture
def spike(write_csv):
    return write_csv("x,y\n0,0\n0.5,17.34\n", "spike.csv")


@pytest.fixture
def wide(tmp_path):
    dataset, _ = synthesize("random-lipschitz", 12, 60, seed=4)
    path = str(tmp_path / "wide.csv")
    save_csv(dataset, path)
    return path


class TestSubcommands:
    def test_cover(self, cli):
        code, out = cli("cover", "--kplus", "1", "--epsilon", "0.05", "--dim", "2", "--output", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["count"] == 100
        assert doc["per_axis"] == 10
        assert doc["notes"] == []

    def test_cover_overflow(self, cli):
        code, out = cli("cover", "--kplus", "34.68", "--epsilon", "0.3468", "--dim", "21", "--output", "json")
        doc = json.loads(out)
        assert doc["count"] is None
        assert doc["log10_count"] == pytest.approx(35.68, abs=0.01)

    def test_lipschitz_text(self, cli, spike):
        code, out = cli("lipschitz", "--data", spike)
        assert code == 0
        assert f"miniminimax {__version__}: lipschitz" in out
        assert "khat" in out
        assert "34.68" in out

    def test_lipschitz_both_metrics(self, cli, spike):
        code, out = cli("lipschitz", "--data", spike, "--metric", "both", "--output", "json")
        doc = json.loads(out)
        assert set(doc["by_metric"]) == {"l2", "linf"}
        assert doc["by_metric"]["l2"]["khat"] == pytest.approx(34.68)

    def test_envelope_csv(self, cli, spike, write_csv):
        query = write_csv("x\n1\n0.25\n", "query.csv")
        code, out = cli("envelope", "--data", spike, "--query", query, "--output", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert list(rows[0]) == ["x", "e_plus", "e_minus", "e_star", "f_star", "f_bar"]
        assert float(rows[0]["e_star"]) == pytest.approx(17.34)
        assert float(rows[0]["f_star"]) == pytest.approx(17.34)

    def test_envelope_below_khat(self, cli, spike, write_csv):
        query = write_csv("x\n0\n", "query.csv")
        code, out = cli("envelope", "--data", spike, "--query", query, "--kappa", "1", "--output", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["points"][0]["f_star"] is None
        assert doc["points"][0]["e_star"] < 0
        assert any("f* is undefined" in note for note in doc["notes"])

    def test_burden(self, cli, write_csv):
        data = write_csv("x,y\n0,0\n0.01,0.001\n1,0\n")
        code, out = cli("burden", "--data", data, "--metric", "l2", "--epsilon", "0.005,0.05:khat", "--output", "json")
        assert code == 0
        doc = json.loads(out)
        assert [entry["bound"] for entry in doc["burden"]] == [10, 10]
        assert doc["burden"][1]["epsilon_spec"] == "0.05:khat"

    def test_corners(self, cli, spike):
        code, out = cli("corners", "--data", spike, "--output", "json", "--constant")
        assert code == 0
        doc = json.loads(out)
        assert doc["sup_estar_lower"] == pytest.approx(17.34)
        assert doc["certified"] is True
        assert doc["argmax_corner"] == "1"
        assert doc["global_f"]["max_certified"] is True
        assert doc["constant"]["sup_estar_lower"] >= doc["sup_estar_lower"] - 1e-9

    def test_verdict(self, cli, spike):
        code, out = cli("verdict", "--data", spike, "--khyp", "69.36", "--output", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"]["triggered"] is True
        assert doc["scaled_error_bounds"][0]["bound"] == pytest.approx(34.68)

    def test_verdict_uses_khat(self, cli, spike):
        code, out = cli("verdict", "--data", spike, "--kappa", "100", "--output", "json")
        doc = json.loads(out)
        assert doc["verdict"]["triggered"] is True
        assert any("kappa = khat" in note for note in doc["notes"])

    def test_mc_csv(self, cli, wide):
        code, out = cli(
            "mc", "--data", wide, "--metric", "both", "--units", "abs,khat2", "--samples", "500", "--output", "csv"
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 4
        assert [(r["metric"], r["unit"]) for r in rows] == [
            ("l2", "abs"),
            ("l2", "khat2"),
            ("linf", "abs"),
            ("linf", "khat2"),
        ]
        assert {"q0.25_lcb", "q0.5_lcb", "q0.75_lcb", "mean_lcb"} <= set(rows[0])

    def test_mc_khat2_with_larger_kappa(self, cli, determined):
        code, out = cli(
            "mc", "--data", determined, "--kappa", "4", "--units", "abs,khat2,kappa2", "--samples", "400", "--output", "json"
        )
        assert code == 0
        absolute, khat2, kappa2 = json.loads(out)["error_distribution"]
        assert absolute["max_observed"] > 0
        assert khat2["max_observed"] * 0.5 == pytest.approx(absolute["max_observed"])
        assert kappa2["max_observed"] * 2.0 == pytest.approx(absolute["max_observed"])

    def test_report_determined(self, cli, determined):
        code, out = cli("report", "--data", determined, "--samples", "500", "--output", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["khat"] == 1.0
        assert doc["sup_estar_lower"] == pytest.approx(0.0, abs=1e-12)
        assert doc["verdict"]["triggered"] is False
        assert doc["global_f"]["max_upper"] == 1.0
        assert doc["global_f"]["min_lower"] == 0.0
        assert len(doc["burden"]) == 3
        assert doc["empirical_error_bound"] == pytest.approx(0.0, abs=1e-12)

    def test_report_both_metrics(self, cli, spike):
        code, out = cli("report", "--data", spike, "--metric", "both", "--samples", "200", "--output", "json")
        assert code == 0
        doc = json.loads(out)
        l2, linf = doc["by_metric"]["l2"], doc["by_metric"]["linf"]
        assert l2["mode"] == "montecarlo"
        assert l2["verdict"] is None
        assert l2["global_f"] is None
        assert linf["mode"] == "exhaustive"
        assert any("need linf" in note for note in doc["notes"])

    def test_out_file(self, cli, spike, tmp_path):
        target = tmp_path / "out.json"
        code, out = cli("lipschitz", "--data", spike, "--output", "json", "--out", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["khat"] == pytest.approx(34.68)


class TestDeterminism:
    def test_json_is_stable(self, cli, wide):
        args = ("report", "--data", wide, "--samples", "300", "--seed", "5", "--output", "json")
        first = cli(*args)[1]
        second = cli(*args)[1]
        assert first == second
        assert json.dumps(json.loads(first), indent=2) + "\n" == first

    def test_mc_threads(self, cli, wide):
        args = ("mc", "--data", wide, "--samples", "9000", "--seed", "2", "--output", "json")
        assert cli(*args, "--threads", "1")[1] == cli(*args, "--threads", "8")[1]

    def test_heuristic_threads(self, cli, wide):
        args = ("corners", "--data", wide, "--mode", "heuristic", "--budget", "9000", "--seed", "2", "--output", "json")
        one = cli(*args, "--threads", "1")[1]
        assert one == cli(*args, "--threads", "8")[1]
        assert json.loads(one)["certified"] is False


class TestExitCodes:
    def test_missing_data(self, cli, tmp_path):
        assert cli("lipschitz", "--data", str(tmp_path / "absent.csv"))[0] == 2

    def test_conflicting_duplicates(self, cli, write_csv):
        data = write_csv("x,y\n0.5,1\n0.5,2\n")
        assert cli("lipschitz", "--data", data)[0] == 2

    def test_outside_cube(self, cli, write_csv):
        data = write_csv("x,y\n0.5,1\n1.5,2\n")
        assert cli("lipschitz", "--data", data)[0] == 2

    def test_constant_burden(self, cli, write_csv):
        data = write_csv("x,y\n0.2,1\n0.7,1\n")
        assert cli("burden", "--data", data, "--epsilon", "0.1")[0] == 3

    def test_budget_exceeded(self, cli, wide):
        assert cli("corners", "--data", wide, "--mode", "exhaustive", "--budget", "100")[0] == 2

    def test_corners_need_linf(self, cli, spike):
        assert cli("corners", "--data", spike, "--metric", "l2")[0] == 2

    def test_strict_requires_seed(self, cli, spike):
        assert cli("mc", "--data", spike, "--strict")[0] == 2
        assert cli("mc", "--data", spike, "--strict", "--seed", "1", "--samples", "50")[0] == 0

    def test_strict_auto_heuristic(self, cli, write_csv):
        header = ",".join(f"x{k}" for k in range(25)) + ",y\n"
        row = ",".join(["0.5"] * 25)
        data = write_csv(header + row + ",1\n")
        assert cli("corners", "--data", data, "--strict")[0] == 2


@pytest.mark.slow
def test_scale(cli, tmp_path):
    dataset, _ = synthesize("product-sine", 21, 1154, seed=0)
    path = str(tmp_path / "scale.csv")
    save_csv(dataset, path)
    start = time.perf_counter()
    code, out = cli(
        "report", "--data", path, "--mode", "heuristic", "--budget", "100000", "--seed", "0", "--output", "json"
    )
    assert code == 0
    assert time.perf_counter() - start < 60
    doc = json.loads(out)
    assert doc["mode"] == "heuristic"
    assert doc["burden"][0]["bound"] is None
