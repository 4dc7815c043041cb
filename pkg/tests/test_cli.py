import textwrap

import pytest

from banditlab.cli import main
from banditlab.reporting import COLUMNS, parse_csv, render_csv

BASE_CONFIG = textwrap.dedent(
    """
    # two-armed known-gap experiment
    id = demo
    policy = ts-two-point
    environment = two-point
    mu_star = 0.0
    delta = 0.5
    horizon = 400
    episodes = 8
    seed = 7
    checkpoints = 100, 200, 400
    """
).strip()


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text + "\n", encoding="utf-8")
    return str(path)


class TestSimulate:
    def test_writes_csv_with_expected_schema(self, tmp_path, capsys):
        config = write(tmp_path, "demo.cfg", BASE_CONFIG)
        assert main(["simulate", config]) == 0
        out = capsys.readouterr().out
        rows = parse_csv(out)
        assert len(rows) == 3
        assert rows[0]["experiment_id"] == "demo"
        assert rows[0]["policy"] == "ts-two-point"
        assert [int(r["checkpoint"]) for r in rows] == [100, 200, 400]
        assert all(r["master_seed"] == "7" for r in rows)

    def test_byte_identical_reruns_and_workers(self, tmp_path):
        config = write(tmp_path, "demo.cfg", BASE_CONFIG)
        outputs = []
        for i, workers in enumerate(("1", "4", "1")):
            out = tmp_path / f"run{i}.csv"
            assert main(["simulate", config, "--out", str(out), "--workers", workers]) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]

    def test_missing_horizon_is_a_config_error(self, tmp_path, capsys):
        broken = BASE_CONFIG.replace("horizon = 400\n", "")
        config = write(tmp_path, "broken.cfg", broken)
        assert main(["simulate", config]) == 2
        assert "horizon" in capsys.readouterr().err

    def test_unknown_field_is_reported_with_line(self, tmp_path, capsys):
        config = write(tmp_path, "extra.cfg", BASE_CONFIG + "\nwat = 3")
        assert main(["simulate", config]) == 2
        err = capsys.readouterr().err
        assert "wat" in err and "line" in err

    def test_delta_list_requires_sweep(self, tmp_path, capsys):
        config = write(
            tmp_path, "multi.cfg", BASE_CONFIG.replace("delta = 0.5", "delta = 0.5, 1.0")
        )
        assert main(["simulate", config]) == 2
        assert "sweep" in capsys.readouterr().err

    def test_seed_override_changes_output(self, tmp_path):
        config = write(tmp_path, "demo.cfg", BASE_CONFIG)
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        main(["simulate", config, "--out", str(a)])
        main(["simulate", config, "--out", str(b), "--seed", "8"])
        main(["simulate", config, "--out", str(c), "--seed", "7"])
        assert a.read_bytes() == c.read_bytes()
        assert a.read_bytes() != b.read_bytes()


    def test_unwritable_output_is_a_runtime_error(self, tmp_path, capsys):
        config = write(tmp_path, "demo.cfg", BASE_CONFIG)
        bad_out = tmp_path / "missing" / "dir" / "out.csv"
        assert main(["simulate", config, "--out", str(bad_out)]) == 1
        assert "runtime error" in capsys.readouterr().err


class TestSweep:
    def test_sweep_emits_one_series_per_delta(self, tmp_path, capsys):
        config = write(
            tmp_path,
            "sweep.cfg",
            BASE_CONFIG.replace("delta = 0.5", "delta = 0.5, 1.0").replace(
                "id = demo\n", ""
            ),
        )
        assert main(["sweep", config]) == 0
        rows = parse_csv(capsys.readouterr().out)
        ids = {r["experiment_id"] for r in rows}
        assert ids == {"ts-two-point-delta0.5", "ts-two-point-delta1"}
        assert len(rows) == 6


class TestBounds:
    def test_thm1_two_decimals(self, capsys):
        assert main(["bounds", "thm1", "--n", "2000", "--K", "10"]) == 0
        assert "1979.90" in capsys.readouterr().out

    def test_thm2(self, capsys):
        assert main(["bounds", "thm2", "--delta", "0.2"]) == 0
        assert "2890.20" in capsys.readouterr().out

    def test_thm3(self, capsys):
        assert main(["bounds", "thm3", "--gaps", "0,0.5", "--epsilon", "0.5"]) == 0
        assert "160.50" in capsys.readouterr().out

    def test_unknown_theorem_is_usage_error(self, capsys):
        assert main(["bounds", "thm9", "--n", "10", "--K", "2"]) == 2

    def test_missing_parameter_is_config_error(self, capsys):
        assert main(["bounds", "thm1", "--n", "2000"]) == 2
        assert "--K" in capsys.readouterr().err

    def test_verify_proofs(self, capsys):
        assert main(["bounds", "verify-proofs", "--n", "400", "--K", "4"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out
        assert "prior-free-integrals" in out
        assert "pull-threshold" in out

    def test_compare_against_results(self, tmp_path, capsys):
        config = write(tmp_path, "demo.cfg", BASE_CONFIG)
        out = tmp_path / "results.csv"
        main(["simulate", config, "--out", str(out)])
        assert main(["bounds", "thm2", "--delta", "0.5", "--compare", str(out)]) == 0
        text = capsys.readouterr().out
        assert "demo" in text and "empirical" in text and "empirical <= bound" in text


class TestPlot:
    def test_single_experiment_polyline(self, tmp_path):
        rows = [
            ["e1", "ucb", "gaussian[0.0;-1.0]", "100", t, m, "0.1", "0.196", "5", "1"]
            for t, m in (("10", "1.0"), ("50", "2.0"), ("100", "2.5"))
        ]
        csv_path = tmp_path / "r.csv"
        csv_path.write_text(render_csv(rows), encoding="utf-8")
        svg_path = tmp_path / "out.svg"
        assert main(["plot", str(csv_path), "--out", str(svg_path)]) == 0
        svg = svg_path.read_text()
        assert svg.startswith("<svg xmlns=")
        assert svg.count("<polyline") == 1
        assert svg.count("<polygon") == 1
        assert "e1" in svg and "href" not in svg

    def test_two_experiments_get_a_legend(self, tmp_path):
        rows = []
        for exp in ("first", "second"):
            for t, m in (("10", "1.0"), ("100", "3.0")):
                rows.append(
                    [exp, "ucb", "gaussian[0.0;-1.0]", "100", t, m, "0.1", "0.196", "5", "1"]
                )
        csv_path = tmp_path / "r.csv"
        csv_path.write_text(render_csv(rows), encoding="utf-8")
        svg_path = tmp_path / "out.svg"
        assert main(["plot", str(csv_path), "--out", str(svg_path)]) == 0
        svg = svg_path.read_text()
        assert svg.count("<polyline") == 2
        assert "first" in svg and "second" in svg

    def test_empty_csv_is_rejected(self, tmp_path, capsys):
        csv_path = tmp_path / "empty.csv"
        csv_path.write_text(render_csv([]), encoding="utf-8")
        assert main(["plot", str(csv_path), "--out", str(tmp_path / "x.svg")]) == 2
        assert "no data rows" in capsys.readouterr().err

    def test_schema_mismatch_is_rejected(self, tmp_path, capsys):
        csv_path = tmp_path / "bad.csv"
        csv_path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
        assert main(["plot", str(csv_path), "--out", str(tmp_path / "x.svg")]) == 2


class TestCsvRoundTrip:
    def test_parse_then_render_is_identity(self, tmp_path):
        config = write(tmp_path, "demo.cfg", BASE_CONFIG)
        out = tmp_path / "results.csv"
        main(["simulate", config, "--out", str(out)])
        text = out.read_text(encoding="utf-8")
        rows = parse_csv(text)
        rerendered = render_csv([[row[c] for c in COLUMNS] for row in rows])
        assert rerendered == text
        assert "\r" not in text and text.endswith("\n")
