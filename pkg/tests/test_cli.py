import json
import math
import os

import numpy as np
import pytest

import voi.cli as cli
from voi import ValueCurve, ValuePoint
from voi.cli import main

IDENT2 = os.path.join(os.path.dirname(__file__), os.pardir, "problems", "ident2.json")
RESOURCE3 = os.path.join(os.path.dirname(__file__), os.pardir, "problems",
                         "resource3.json")
FORECAST23 = os.path.join(os.path.dirname(__file__), os.pardir, "problems",
                          "forecast23.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_problem(tmp_path, payload, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestCurveCommand:
    def test_csv_to_stdout(self, capsys):
        code, out, _ = run(capsys, "curve", "--problem", IDENT2,
                           "--type", "shannon", "--branch", "upper",
                           "--lambda", "0:0.4:3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "lambda,value,beta,converged"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[1]) == 0.5
        assert first[3] == "true"

    def test_csv_numbers_round_trip(self, capsys):
        code, out, _ = run(capsys, "curve", "--problem", IDENT2,
                           "--type", "shannon", "--branch", "upper",
                           "--lambda", "0:0.3:4")
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        from voi.shannon import upper_value
        from voi.cli import load_problem
        problem = load_problem(IDENT2).problem
        for cells in rows:
            lam = float(cells[0])
            assert float(cells[1]) == upper_value(problem, lam).value

    def test_json_output_with_inf_beta(self, tmp_path, capsys):
        out_path = tmp_path / "curve.json"
        code, _, _ = run(capsys, "curve", "--problem", IDENT2,
                         "--type", "shannon", "--branch", "upper",
                         "--lambda", "0:1.0:3", "--out", str(out_path))
        assert code == 0
        payload = json.loads(out_path.read_text())  # inf encoded as a string
        assert payload["branch"] == "upper"
        assert payload["points"][-1]["beta"] == "inf"
        assert payload["points"][-1]["value"] == 1.0

    def test_s_branch_includes_both_origins(self, capsys):
        code, out, _ = run(capsys, "curve", "--problem", IDENT2,
                           "--type", "shannon", "--branch", "s",
                           "--lambda", "0.2:0.4:2")
        lams = [float(line.split(",")[0]) for line in out.strip().splitlines()[1:]]
        assert lams.count(0.0) == 2
        assert lams == sorted(lams)
        assert lams[0] == -0.4 and lams[-1] == 0.4

    def test_deterministic_types(self, capsys):
        for kind in ("boltzmann", "hartley"):
            code, out, _ = run(capsys, "curve", "--problem", IDENT2,
                               "--type", kind, "--branch", "upper",
                               "--lambda", f"0:{math.log(2)}:3")
            assert code == 0
            values = [float(l.split(",")[1]) for l in out.strip().splitlines()[1:]]
            assert values[0] == 0.5
            assert values[-1] == 1.0

    def test_bregman_requires_generator_block(self, capsys):
        code, _, err = run(capsys, "curve", "--problem", IDENT2,
                           "--type", "bregman", "--branch", "upper",
                           "--lambda", "0:0.2:3")
        assert code == 2
        assert "generator" in err

    def test_bregman_lower_branch_via_reflection(self, capsys):
        code, out, _ = run(capsys, "curve", "--problem", RESOURCE3,
                           "--type", "bregman", "--branch", "lower",
                           "--lambda", "0:0.2:3")
        assert code == 0
        values = [float(l.split(",")[1]) for l in out.strip().splitlines()[1:]]
        assert values == sorted(values, reverse=True)

    def test_plot_file_created(self, tmp_path, capsys):
        plot = tmp_path / "curve.png"
        code, _, _ = run(capsys, "curve", "--problem", IDENT2,
                         "--type", "shannon", "--branch", "s",
                         "--lambda", "0:0.5:5", "--plot", str(plot))
        assert code == 0
        assert plot.stat().st_size > 0

    def test_degenerate_grid_rejected(self, capsys):
        code, _, err = run(capsys, "curve", "--problem", IDENT2,
                           "--type", "shannon", "--branch", "upper",
                           "--lambda", "0:0:1")
        assert code == 2
        assert err

    def test_missing_file_is_input_error(self, capsys):
        code, _, err = run(capsys, "curve", "--problem", "no_such.json",
                           "--type", "shannon", "--branch", "upper",
                           "--lambda", "0:0.2:3")
        assert code == 2

    def test_solver_failure_exits_three(self, capsys, monkeypatch):
        def fake_trace(problem, branch, lambdas, max_iterations=None):
            points = tuple(ValuePoint(lam=float(l), value=0.0, beta=1.0,
                                      info=float(l), converged=False)
                           for l in lambdas)
            return ValueCurve(points=points, branch=branch)

        monkeypatch.setattr(cli, "trace_curve", fake_trace)
        code, _, err = run(capsys, "curve", "--problem", IDENT2,
                           "--type", "shannon", "--branch", "upper",
                           "--lambda", "0.1:0.3:3")
        assert code == 3
        assert "converge" in err.lower()

    def test_enum_cap_env_exits_four(self, capsys, monkeypatch):
        monkeypatch.setenv("VOI_ENUM_CAP", "3")
        code, _, err = run(capsys, "curve", "--problem", IDENT2,
                           "--type", "boltzmann", "--branch", "upper",
                           "--lambda", "0:0.5:3")
        assert code == 4

    def test_bad_enum_cap_env_is_input_error(self, capsys, monkeypatch):
        monkeypatch.setenv("VOI_ENUM_CAP", "many")
        code, _, _ = run(capsys, "curve", "--problem", IDENT2,
                         "--type", "boltzmann", "--branch", "upper",
                         "--lambda", "0:0.5:3")
        assert code == 2


class TestProblemFiles:
    def test_unknown_key_rejected(self, tmp_path, capsys):
        path = write_problem(tmp_path, {
            "prior": [0.5, 0.5], "utilities": [[1, 0], [0, 1]],
            "utilties": [[1, 0], [0, 1]]})
        code, _, err = run(capsys, "validate", "--problem", path)
        assert code == 2
        assert "utilties" in err

    def test_missing_utilities_rejected(self, tmp_path, capsys):
        path = write_problem(tmp_path, {"prior": [0.5, 0.5]})
        assert run(capsys, "validate", "--problem", path)[0] == 2

    def test_invalid_json_rejected(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert run(capsys, "validate", "--problem", str(path))[0] == 2

    def test_shape_mismatch_rejected(self, tmp_path, capsys):
        path = write_problem(tmp_path, {
            "prior": [0.5, 0.5], "utilities": [[1, 0]]})
        assert run(capsys, "validate", "--problem", path)[0] == 2

    def test_validate_summary(self, capsys):
        code, out, _ = run(capsys, "validate", "--problem", FORECAST23)
        assert code == 0
        assert "states: 2" in out and "actions: 3" in out

    def test_save_load_round_trip(self, tmp_path):
        spec = cli.load_problem(RESOURCE3)
        out = tmp_path / "copy.json"
        cli.save_problem(str(out), spec.problem, spec.generator, spec.reference)
        back = cli.load_problem(str(out))
        assert np.array_equal(back.problem.utilities, spec.problem.utilities)
        assert back.generator.kind == spec.generator.kind
        assert np.array_equal(back.reference.probs, spec.reference.probs)


class TestParadoxCommand:
    def test_text_report(self, capsys):
        code, out, _ = run(capsys, "paradox", "ellsberg")
        assert code == 0
        assert "EU(P) = 50.0" in out
        assert "indifferent" in out

    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "paradox", "allais_gain", "--json")
        payload = json.loads(out)
        assert payload["name"] == "allais_gain"
        by_label = {row["label"]: row for row in payload["lotteries"]}
        assert by_label["P"]["expected_utility"] == pytest.approx(100.0)
        assert payload["verdicts"][0]["relation"] == "indifferent"

    def test_unknown_name(self, capsys):
        assert run(capsys, "paradox", "biribi")[0] == 2

    def test_truncation_flag(self, capsys):
        _, out10, _ = run(capsys, "paradox", "st_petersburg", "--n", "10")
        _, out20, _ = run(capsys, "paradox", "st_petersburg", "--n", "20")
        assert out10 != out20


class TestOracleCommand:
    def test_shannon_check_passes(self, capsys):
        code, out, _ = run(capsys, "oracle", "--problem", IDENT2,
                           "--check", "shannon", "--lambda", "0.2",
                           "--resolution", "300")
        assert code == 0
        header, row = out.strip().splitlines()
        assert header.startswith("target,oracle_value")
        cells = row.split(",")
        assert cells[0] == "shannon_upper_vs_grid"
        assert float(cells[3]) <= 1e-3

    def test_boltzmann_check_exact(self, capsys):
        code, out, _ = run(capsys, "oracle", "--problem", IDENT2,
                           "--check", "boltzmann", "--lambda", "0.3")
        assert code == 0
        assert float(out.strip().splitlines()[1].split(",")[3]) <= 1e-12

    def test_entropy_check_ignores_lambda(self, capsys):
        code, out, _ = run(capsys, "oracle", "--problem", IDENT2,
                           "--check", "entropy")
        assert code == 0

    def test_bregman_check(self, capsys):
        code, out, _ = run(capsys, "oracle", "--problem", RESOURCE3,
                           "--check", "bregman", "--lambda", "0.1")
        assert code == 0
        assert float(out.strip().splitlines()[1].split(",")[3]) <= 2e-3

    def test_mismatch_exits_five(self, capsys):
        code, _, err = run(capsys, "oracle", "--problem", IDENT2,
                           "--check", "shannon", "--lambda", "0.2",
                           "--resolution", "50", "--tolerance", "1e-9")
        assert code == 5
        assert "tolerance" in err

    def test_missing_lambda_is_input_error(self, capsys):
        code, _, _ = run(capsys, "oracle", "--problem", IDENT2,
                         "--check", "shannon")
        assert code == 2

    def test_report_written_to_file(self, tmp_path, capsys):
        out_path = tmp_path / "report.csv"
        code, _, _ = run(capsys, "oracle", "--problem", IDENT2,
                         "--check", "hartley", "--lambda", "0.5",
                         "--out", str(out_path))
        assert code == 0
        assert out_path.read_text().startswith("target,")


class TestLevelsetsCommand:
    def test_csv_output(self, capsys):
        code, out, _ = run(capsys, "levelsets", "--payoffs", "0,0.5,1",
                           "--values", "0.25,0.75")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "value,a1,b1,c1,a2,b2,c2"
        assert len(lines) == 3

    def test_default_values_are_interior(self, capsys):
        code, out, _ = run(capsys, "levelsets", "--payoffs", "0,2,4")
        rows = out.strip().splitlines()[1:]
        assert len(rows) == 5
        for row in rows:
            v = float(row.split(",")[0])
            assert 0.0 < v < 4.0

    def test_out_of_range_value_blank_cells(self, capsys):
        _, out, _ = run(capsys, "levelsets", "--payoffs", "0,0.5,1",
                        "--values", "9")
        row = out.strip().splitlines()[1]
        assert row == "9.0,,,,,,"

    def test_risk_transform_moves_segments(self, capsys):
        _, plain, _ = run(capsys, "levelsets", "--payoffs", "1,4,9",
                          "--values", "3")
        _, curved, _ = run(capsys, "levelsets", "--payoffs", "1,4,9",
                           "--values", "3", "--risk", "sqrt")
        assert plain != curved

    def test_flat_payoffs_rejected(self, capsys):
        assert run(capsys, "levelsets", "--payoffs", "1,1,1")[0] == 2

    def test_plot_created(self, tmp_path, capsys):
        plot = tmp_path / "levels.png"
        code, _, _ = run(capsys, "levelsets", "--payoffs", "1,4,9",
                         "--risk", "log", "--plot", str(plot))
        assert code == 0
        assert plot.stat().st_size > 0

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "levelsets", "--payoffs", "0,1,2",
                           "--values", "0.5", "--format", "json")
        payload = json.loads(out)
        assert payload["segments"][0]["value"] == 0.5
        assert len(payload["segments"][0]["endpoints"]) == 2
