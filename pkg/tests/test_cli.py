import csv
import json
import math

import pytest

from hypermetric.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestMetricCommand:
    def test_caratheodory_offcenter(self, capsys):
        doc = run_json(
            capsys,
            "metric",
            "--domain", "disk:0,1",
            "--point", "0.5",
            "--vector", "1",
            "--metric", "caratheodory",
        )
        assert doc["result"]["value"] == pytest.approx(1.333333, abs=1e-6)
        assert doc["result"]["kind"] == "exact"

    def test_poincare_shortcut(self, capsys):
        doc = run_json(
            capsys, "metric", "--point", "0", "--vector", "1", "--metric", "poincare"
        )
        assert doc["result"]["value"] == pytest.approx(1.0)

    def test_polydisc_literal(self, capsys):
        doc = run_json(
            capsys,
            "metric",
            "--domain", "polydisc:0,0;1,2",
            "--point", "0,0",
            "--vector", "0,1",
            "--metric", "kobayashi",
        )
        assert doc["result"]["value"] == pytest.approx(0.5)

    def test_inline_json_domain(self, capsys):
        doc = run_json(
            capsys,
            "metric",
            "--domain", '{"kind": "disk", "centers": [[0, 0]], "radii": [2]}',
            "--point", "0",
            "--vector", "1",
            "--metric", "caratheodory",
        )
        assert doc["result"]["value"] == pytest.approx(0.5)


class TestDistanceCommand:
    def test_disk_distance(self, capsys):
        doc = run_json(
            capsys,
            "distance",
            "--domain", "disk:0,1",
            "--a", "0",
            "--b", "0.5",
            "--kind", "caratheodory",
        )
        assert doc["result"]["value"] == pytest.approx(math.atanh(0.5))

    def test_integrated_matches_closed_form(self, capsys):
        doc = run_json(
            capsys,
            "distance",
            "--domain", "disk:0,1",
            "--a", "0",
            "--b", "0.5",
            "--kind", "integrated-kobayashi",
        )
        assert doc["result"]["value"] == pytest.approx(math.atanh(0.5), abs=1e-4)
        assert doc["result"]["kind"] == "upper"


class TestDiameterCommand:
    def test_concentric(self, capsys):
        doc = run_json(capsys, "diameter", "--X", "disk:0,1", "--U", "disk:0,0.5")
        assert doc["result"]["value"] == pytest.approx(math.log(3))
        assert doc["result"]["kind"] == "exact"


class TestContractionCommand:
    def test_dilation_example(self, capsys):
        doc = run_json(
            capsys,
            "contraction",
            "--X", "disk:0,1",
            "--U", "disk:0,0.5",
            "--method", "dilation",
        )
        assert doc["result"]["k"] == pytest.approx(2 / 3)
        assert doc["result"]["rigorous"] is True

    def test_tanh_example(self, capsys):
        doc = run_json(
            capsys,
            "contraction",
            "--X", "disk:0,1",
            "--U", "disk:0,0.5",
            "--method", "tanh_diameter",
        )
        assert doc["result"]["k"] == pytest.approx(0.8)


class TestVerifyCommand:
    def test_holds(self, capsys):
        doc = run_json(
            capsys,
            "verify",
            "--X", "disk:0,1",
            "--U", "disk:0,0.5",
            "--k", "0.8",
            "--samples", "64",
        )
        assert doc["result"]["verdict"] == "holds"
        assert doc["result"]["violated"] == 0


class TestFixpointCommand:
    def test_quadratic(self, capsys):
        doc = run_json(
            capsys,
            "fixpoint",
            "--X", "disk:0,1",
            "--U", "disk:0,0.6",
            "--map", "(z1^2 + 1)/4",
            "--x0", "0",
        )
        c = doc["result"]["fixed_point"][0]
        assert c[0] == pytest.approx(2 - math.sqrt(3), abs=1e-7)
        assert c[1] == pytest.approx(0.0, abs=1e-12)
        assert doc["result"]["residual"] < 1e-10
        assert doc["result"]["certificate"]["rigorous"] is True

    def test_trace_csv(self, capsys, tmp_path):
        path = tmp_path / "trace.csv"
        run_json(
            capsys,
            "fixpoint",
            "--X", "disk:0,1",
            "--U", "disk:0,0.6",
            "--map", "z1/2",
            "--x0", "0.5",
            "--trace", str(path),
        )
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "iter"
        assert float(rows[2][1]) == pytest.approx(0.25)

    def test_nonconvergence_exit_code(self, capsys):
        code, out, err = run_cli(
            capsys,
            "fixpoint",
            "--X", "disk:0,1",
            "--U", "disk:0,0.6",
            "--map", "z1/2",
            "--x0", "0.5",
            "--max-iter", "2",
        )
        assert code == 3
        assert "non-convergence" in err


class TestConfigAndOutput:
    def test_deterministic_bytes(self, capsys):
        argv = ["verify", "--X", "disk:0,1", "--U", "disk:0,0.5", "--k", "0.9",
                "--samples", "32"]
        _, out1, _ = run_cli(capsys, *argv)
        _, out2, _ = run_cli(capsys, *argv)
        assert out1 == out2

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "result.json"
        code, out, _ = run_cli(
            capsys,
            "metric",
            "--domain", "disk:0,1",
            "--point", "0",
            "--vector", "1",
            "--metric", "caratheodory",
            "--out", str(path),
        )
        assert code == 0 and out == ""
        doc = json.loads(path.read_text())
        assert doc["result"]["value"] == pytest.approx(1.0)

    def test_config_file_supplies_options(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"domain": "disk:0,1", "point": "0.5", "vector": "1"}))
        doc = run_json(
            capsys, "metric", "--metric", "caratheodory", "--config", str(cfg)
        )
        assert doc["result"]["value"] == pytest.approx(4 / 3)

    def test_flag_overrides_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"domain": "disk:0,1", "point": "0.5", "vector": "1"}))
        doc = run_json(
            capsys,
            "metric",
            "--metric", "caratheodory",
            "--point", "0",
            "--config", str(cfg),
        )
        assert doc["result"]["value"] == pytest.approx(1.0)

    def test_config_stdin(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr(
            "sys.stdin",
            io.StringIO(json.dumps({"domain": "disk:0,1", "point": "0", "vector": "1"})),
        )
        doc = run_json(capsys, "metric", "--metric", "caratheodory", "--config", "-")
        assert doc["result"]["value"] == pytest.approx(1.0)

    def test_semianalytic_via_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {
                    "domain": {
                        "kind": "semianalytic",
                        "constraints": [{"map": "z1", "threshold": 1.0}],
                        "box": [[-1, 1, -1, 1]],
                    },
                    "point": "0",
                    "vector": "1",
                }
            )
        )
        doc = run_json(
            capsys, "metric", "--metric", "caratheodory", "--config", str(cfg)
        )
        assert doc["result"]["kind"] == "lower"
        assert doc["result"]["value"] >= 0.95


class TestExitCodes:
    def test_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "metric", "--point", "0", "--vector", "1")
        assert code == 1 and "usage error" in err

    def test_bad_domain_literal(self, capsys):
        code, _, err = run_cli(
            capsys, "metric", "--domain", "annulus:0,1,2", "--point", "0",
            "--vector", "1", "--metric", "caratheodory",
        )
        assert code == 1

    def test_precondition_error(self, capsys):
        # point outside the domain
        code, _, err = run_cli(
            capsys, "metric", "--domain", "disk:0,1", "--point", "2",
            "--vector", "1", "--metric", "caratheodory",
        )
        assert code == 2

    def test_range_precondition(self, capsys):
        code, _, err = run_cli(
            capsys,
            "fixpoint",
            "--X", "disk:0,1",
            "--U", "disk:0,0.5",
            "--map", "z1",
            "--x0", "0.1",
        )
        assert code == 2
