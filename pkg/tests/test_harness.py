"""Sweep harness: determinism, failure accumulation, budgets."""

import numpy as np
import pytest

from polar_olct import ExperimentConfig, SweepResult, emit_report
from polar_olct.harness import (
    run_complexity_sweep,
    run_offset_investigation,
    run_reduction_suite,
)

# small but complete configuration, a few seconds end to end
FAST = ExperimentConfig(k_max=1, j_spec=2, n_values=(2, 6), probe_grid=10,
                        draws=1, r_max=40.0, support_radius=150.0)


def test_config_from_text_and_overrides():
    cfg = ExperimentConfig.from_text(
        "seed = 7\nk_max = 1\nn_values = 4, 8\ntau1 = 0.1\ntau2 = 0.2\n"
        "tol_reconstruction = 1e-4\n")
    assert cfg.seed == 7
    assert cfg.n_values == (4, 8)
    assert cfg.tau == (0.1, 0.2)
    assert cfg.tolerance("reconstruction") == 1e-4
    assert cfg.tolerance("roundtrip") == 1e-5
    with pytest.raises(ValueError):
        ExperimentConfig.from_text("bogus_key = 1\n")


def test_empty_range_gives_empty_sweeps():
    cfg = ExperimentConfig(n_values=())
    assert run_reduction_suite(cfg).rows == []
    assert run_complexity_sweep(cfg).rows == []
    assert run_offset_investigation(cfg).rows == []


def test_complexity_sweep_counts():
    cfg = ExperimentConfig(n_values=(10,))
    sweep = run_complexity_sweep(cfg)
    assert sweep.all_passed
    by_name = {r["check"]: r for r in sweep.rows}
    assert by_name["count_ratio_K2_N10"]["value"] == 5.0
    assert "2500/500" in by_name["count_ratio_K2_N10"]["note"]
    assert by_name["count_ratio_K1_N10"]["note"].startswith("counts 900/300")
    assert by_name["count_ratio_K0_N10"]["value"] == 1.0


def test_reduction_suite_default_passes():
    sweep = run_reduction_suite(FAST)
    failing = [r["check"] for r in sweep.failures()]
    assert failing == []
    names = [r["check"] for r in sweep.rows]
    assert "series_adjudication" in names
    adjudication = next(r for r in sweep.rows if r["check"] == "series_adjudication")
    assert "order_n" in adjudication["note"]
    chirp = next(r for r in sweep.rows if r["check"] == "corollary1_chirp_adjudication")
    assert "spectral" in chirp["note"]


def test_under_resolved_config_is_flagged_not_fatal():
    cfg = ExperimentConfig(k_max=1, j_spec=2, n_values=(3,), probe_grid=10,
                           draws=1, r_max=40.0, support_radius=150.0)
    sweep = run_reduction_suite(cfg)
    flagged = [r["check"] for r in sweep.failures()]
    # the non-terminating-spectrum rows blow their tolerance at N=3
    assert any(name.startswith("theorem") and "sonine" in name for name in flagged)
    # but the suite still ran to completion and reported everything else
    assert len(sweep.rows) > len(flagged) > 0


def test_offset_investigation_reports_without_asserting():
    sweep = run_offset_investigation(FAST)
    assert sweep.all_passed  # informational rows never fail
    names = {r["check"] for r in sweep.rows}
    assert {"offset_series_reduced", "offset_series_strict",
            "offset_reconstruction_unit", "offset_reconstruction_alternating"} <= names
    strict = next(r for r in sweep.rows if r["check"] == "offset_series_strict")
    reduced = next(r for r in sweep.rows if r["check"] == "offset_series_reduced")
    assert strict["value"] < 1e-6 < reduced["value"]


def test_emit_report_deterministic(tmp_path):
    sweep1 = run_offset_investigation(FAST)
    sweep2 = run_offset_investigation(FAST)
    p1, p2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    emit_report(sweep1, p1)
    emit_report(sweep2, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert (tmp_path / "r1.csv.summary.txt").read_bytes() == \
        (tmp_path / "r2.csv.summary.txt").read_bytes()
    assert (tmp_path / "r1.csv.timings.csv").exists()


def test_emit_report_empty(tmp_path):
    path = tmp_path / "empty.csv"
    emit_report(SweepResult(seed=1), path)
    assert path.read_text() == "check,value,tolerance,passed,note\n"
    rows = SweepResult(seed=1)
    for i in range(9):
        rows.add(f"row{i}", float(i), 10.0)
    out = tmp_path / "nine.csv"
    emit_report(rows, out)
    assert len(out.read_text().strip().splitlines()) == 10
