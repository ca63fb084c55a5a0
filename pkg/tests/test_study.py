"""Study orchestration: sweeps, flags, determinism, serialization."""

import json
import math

import pytest

import cosadmit.study as study_mod
from cosadmit.errors import AccuracyError, DomainError
from cosadmit.study import (
    StudyConfig,
    run_admissibility_study,
    run_convergence_study,
    run_study,
    write_report,
)


def make_conv_config(**over):
    base = dict(density="normal", L_values=[4.0, 8.0], N_values=[32, 128],
                kind="convergence", grid_points=101)
    base.update(over)
    return StudyConfig(**base)


def make_adm_config(**over):
    base = dict(density="normal", L_values=[2.0, 4.0, 8.0], p_values=[2.0],
                kind="admissibility", k_max=256)
    base.update(over)
    return StudyConfig(**base)


class TestConfigValidation:
    def test_unknown_fields_rejected(self):
        with pytest.raises(DomainError, match="unknown study config fields"):
            StudyConfig.from_dict({"density": "normal", "L_values": [2.0],
                                   "seed": 7})

    def test_missing_required_fields(self):
        with pytest.raises(DomainError, match="density"):
            StudyConfig.from_dict({"L_values": [2.0]})
        with pytest.raises(DomainError, match="L_values"):
            StudyConfig.from_dict({"density": "normal"})

    def test_grids_must_increase(self):
        with pytest.raises(DomainError, match="strictly increasing"):
            make_conv_config(L_values=[4.0, 4.0]).validated()
        with pytest.raises(DomainError, match="strictly increasing"):
            make_conv_config(N_values=[128, 32]).validated()

    def test_grids_must_be_non_empty(self):
        with pytest.raises(DomainError, match="non-empty"):
            make_conv_config(N_values=[]).validated()

    def test_p_validity_checked_before_execution(self):
        cfg = make_adm_config(density="student_t(nu=0.4)", p_values=[1.2, 2.0])
        with pytest.raises(DomainError, match="p must be < 1.8"):
            cfg.validated()

    def test_bad_kind(self):
        with pytest.raises(DomainError, match="kind"):
            make_conv_config(kind="other").validated()


class TestConvergenceStudy:
    def test_floor_decreases_with_L(self):
        rep = run_convergence_study(make_conv_config())
        assert rep.kind == "convergence"
        assert len(rep.cells) == 4
        assert all(c["ok"] for c in rep.cells)
        assert len(rep.flags) == 1
        assert rep.flags[0]["passed"]
        floors = rep.aggregates["error_floors"]
        assert floors[repr(8.0)] < floors[repr(4.0)]

    def test_single_L_emits_no_trend_flag(self):
        rep = run_convergence_study(make_conv_config(L_values=[2.0],
                                                     density="uniform"))
        assert rep.flags == []
        assert len(rep.cells) == 2

    def test_failed_cell_does_not_abort_sweep(self, monkeypatch):
        real = study_mod.measure_error
        calls = {"n": 0}

        def flaky(f, e, grid_points):
            calls["n"] += 1
            if e.N == 32 and e.L == 4.0:
                raise AccuracyError("synthetic cell failure", 0.0, 1.0)
            return real(f, e, grid_points)

        monkeypatch.setattr(study_mod, "measure_error", flaky)
        rep = run_convergence_study(make_conv_config())
        failed = [c for c in rep.cells if not c["ok"]]
        assert len(failed) == 1
        assert failed[0]["N"] == 32 and failed[0]["L"] == 4.0
        assert "synthetic" in failed[0]["error"]
        assert sum(1 for c in rep.cells if c["ok"]) == 3


class TestAdmissibilityStudy:
    def test_normal_dominance_all_pass(self):
        rep = run_admissibility_study(make_adm_config())
        assert all(c["ok"] for c in rep.cells)
        dom = [fl for fl in rep.flags if fl["check"] == "dominance"]
        assert len(dom) == 3
        assert all(fl["passed"] for fl in dom)

    def test_rate_fit_recorded_with_slope_flags(self):
        rep = run_admissibility_study(
            make_adm_config(density="student_t(nu=0.4)",
                            L_values=[4.0, 8.0, 16.0], p_values=[1.2, 1.5]))
        fit = rep.aggregates["rate_fit"]
        assert -1.95 <= fit["slope"] <= -1.65
        assert rep.aggregates["theoretical_decay_exponent"] == pytest.approx(-1.8)
        slope_flags = [fl for fl in rep.flags
                       if fl["check"] == "decay_rate_at_least_p"]
        assert {fl["p"] for fl in slope_flags} == {1.2, 1.5}
        assert all(fl["passed"] for fl in slope_flags)

    def test_report_is_self_contained(self):
        rep = run_admissibility_study(make_adm_config())
        for c in rep.cells:
            recomputed = c["B_value"] <= c["main_bound"] + c["slack"]
            assert recomputed == c["dominance_ok"]


class TestDeterminism:
    def test_byte_identical_at_parallelism_1(self):
        r1 = run_study(make_adm_config(parallelism=1))
        r2 = run_study(make_adm_config(parallelism=1))
        assert r1.to_json() == r2.to_json()

    def test_value_identical_across_parallelism(self):
        # The config echo differs by the parallelism field itself; cells,
        # aggregates, and flags must be exactly equal.
        r1 = run_study(make_conv_config(parallelism=1))
        r4 = run_study(make_conv_config(parallelism=4))
        assert r1.aggregates == r4.aggregates
        assert r1.cells == r4.cells
        assert r1.flags == r4.flags

    def test_timings_kept_out_of_canonical_json(self):
        rep = run_study(make_conv_config())
        assert "timings" not in json.loads(rep.to_json())
        assert "timings" in json.loads(rep.to_json(include_timings=True))
        assert rep.timings["total_seconds"] > 0


class TestSerialization:
    def test_csv_schema(self):
        rep = run_admissibility_study(make_adm_config())
        lines = rep.to_csv().strip().split("\r\n")
        header = lines[0].split(",")
        assert header[:4] == ["density", "L", "N", "p"]
        assert "B_value" in header and "dominance_ok" in header
        assert len(lines) == 1 + len(rep.cells)

    def test_write_report_produces_both_files(self, tmp_path):
        rep = run_study(make_conv_config())
        json_path, csv_path = write_report(rep, str(tmp_path / "out.json"))
        data = json.loads(open(json_path).read())
        assert data["kind"] == "convergence"
        text = open(csv_path).read()
        assert text.startswith("density,")

    def test_json_floats_roundtrip(self):
        rep = run_study(make_adm_config())
        data = json.loads(rep.to_json())
        for cell, parsed in zip(rep.cells, data["cells"]):
            assert parsed["B_value"] == cell["B_value"]
            assert math.isfinite(parsed["B_value"])
