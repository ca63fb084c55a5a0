"""CLI subcommands, exit codes, and file outputs."""

import json
import subprocess
import sys

import pytest

from cosadmit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBounds:
    def test_normal_prints_uniform_bound(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--density", "normal",
                               "--L", "4", "--p", "2")
        assert code == 0
        data = json.loads(out)
        assert data["uniform_bound"] == pytest.approx(0.0580034166, rel=1e-7)

    def test_student_t_out_of_range_names_threshold(self, capsys):
        code, _, err = run_cli(capsys, "bounds", "--density",
                               "student_t(nu=0.4)", "--L", "4", "--p", "2")
        assert code == 1
        assert "p must be < 1.8" in err

    def test_d2_bounds(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--density", "cauchy",
                               "--L", "4", "--p", "2.5", "--dim", "2")
        assert code == 0
        data = json.loads(out)
        assert data["dim"] == 2
        assert data["moment_upper_estimate"] is True


class TestTailEnergy:
    def test_uniform_inside_interval_is_zero(self, capsys):
        code, out, _ = run_cli(capsys, "tail-energy", "--density", "uniform",
                               "--L", "1.5", "--kmax", "64")
        assert code == 0
        assert json.loads(out)["value"] == 0.0

    def test_kmax_validation(self, capsys):
        code, _, err = run_cli(capsys, "tail-energy", "--density", "normal",
                               "--L", "2", "--kmax", "4")
        assert code == 1
        assert "k_max" in err

    def test_d2_tail_energy(self, capsys):
        code, out, _ = run_cli(capsys, "tail-energy", "--density", "uniform",
                               "--L", "2", "--kmax", "16", "--dim", "2")
        assert code == 0
        assert json.loads(out)["value"] == 0.0


class TestCoeffsAndRecover:
    def test_coeffs_to_file_and_stdout_agree(self, capsys, tmp_path):
        path = tmp_path / "c.csv"
        code, _, _ = run_cli(capsys, "coeffs", "--density", "normal",
                             "--L", "8", "--N", "8", "--out", str(path))
        assert code == 0
        file_text = path.read_text()
        code, out, _ = run_cli(capsys, "coeffs", "--density", "normal",
                               "--L", "8", "--N", "8")
        assert code == 0
        assert out.rstrip("\n") == file_text.rstrip("\n")
        lines = file_text.strip().split("\n")
        assert lines[0] == "k,F_k"
        assert float(lines[1].split(",")[1]) == 0.125

    def test_recover_csv_schema(self, capsys):
        code, out, _ = run_cli(capsys, "recover", "--density", "normal",
                               "--L", "4", "--N", "32", "--grid", "11")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "x,f_cos,f_exact,abs_error"
        assert len(lines) == 12


class TestValidation:
    def test_unknown_subcommand(self, capsys):
        assert run_cli(capsys, "frobnicate")[0] == 1

    def test_unknown_flag(self, capsys):
        code, _, err = run_cli(capsys, "bounds", "--density", "normal",
                               "--L", "4", "--p", "2", "--frob", "1")
        assert code == 1
        assert "frob" in err

    def test_unknown_density(self, capsys):
        code, _, err = run_cli(capsys, "coeffs", "--density", "levy",
                               "--L", "4", "--N", "8")
        assert code == 1
        assert "unknown density" in err

    def test_list_densities(self, capsys):
        code, out, _ = run_cli(capsys, "list-densities")
        assert code == 0
        assert "student_t(nu=0.4)" in out


class TestStudyCommand:
    def _config(self, tmp_path, **over):
        data = dict(density="normal", L_values=[4.0, 8.0], N_values=[16, 64],
                    kind="convergence", grid_points=51)
        data.update(over)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(data))
        return path

    def test_study_writes_json_and_csv(self, capsys, tmp_path):
        cfg = self._config(tmp_path, output_path=str(tmp_path / "report.json"))
        code, out, err = run_cli(capsys, "study", "--config", str(cfg))
        assert code == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["kind"] == "convergence"
        assert (tmp_path / "report.csv").read_text().startswith("density,")
        assert "flags" in report

    def test_study_to_stdout_without_output_path(self, capsys, tmp_path):
        cfg = self._config(tmp_path)
        code, out, _ = run_cli(capsys, "study", "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["kind"] == "convergence"

    def test_flag_overrides_config(self, capsys, tmp_path):
        cfg = self._config(tmp_path)
        out_path = tmp_path / "o.json"
        code, _, _ = run_cli(capsys, "study", "--config", str(cfg),
                             "--output-path", str(out_path),
                             "--parallelism", "2")
        assert code == 0
        report = json.loads(out_path.read_text())
        assert report["config"]["parallelism"] == 2

    def test_malformed_config_names_field(self, capsys, tmp_path):
        cfg = self._config(tmp_path, N_values=[64, 16])
        code, _, err = run_cli(capsys, "study", "--config", str(cfg))
        assert code == 1
        assert "N_values" in err

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "study", "--config",
                               str(tmp_path / "nope.json"))
        assert code == 1

    def test_invalid_json_config(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run_cli(capsys, "study", "--config", str(path))
        assert code == 1
        assert "JSON" in err


class TestDeterministicOutput:
    def test_repeated_invocations_byte_identical(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(dict(
            density="laplace", L_values=[2.0, 4.0], p_values=[1.5],
            kind="admissibility", k_max=64)))
        out = tmp_path / "report.json"
        outs = []
        for _ in range(2):
            proc = subprocess.run(
                [sys.executable, "-m", "cosadmit.cli", "study",
                 "--config", str(cfg), "--output-path", str(out)],
                capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
