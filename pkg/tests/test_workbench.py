"""Workbench orchestration: verification reports, runs, table reproduction."""

import json
import os

from srm3.config import RunConfig
from srm3.simulate import Method
from srm3.workbench import (
    run_simulation,
    run_tables,
    verify_ergodic_identities,
)

from _targets import collision_free_univariate, coupled_third_order


def _config(grid, S, B, method, **kw):
    defaults = dict(
        grid=grid,
        method=method,
        seed=1,
        realizations=2,
        target_kind="tabulated",
        spectrum=S,
        bispectrum=B,
    )
    defaults.update(kw)
    return RunConfig(**defaults)


def test_verify_passes_with_tight_rows_on_collision_free_target():
    grid, S, B = collision_free_univariate()
    report = verify_ergodic_identities(
        _config(grid, S, B, Method.THIRD_ORDER_UV), seeds=[0, 1]
    )
    assert report.passed
    assert report.metadata["resonant_collisions"] == 0
    assert not any(r.informational for r in report.rows)


def test_verify_marks_collision_targets_informational():
    grid, S, B = coupled_third_order(m=2, N=16)
    report = verify_ergodic_identities(
        _config(grid, S, B, Method.THIRD_ORDER_MV), seeds=[3]
    )
    assert report.metadata["resonant_collisions"] > 0
    moment_rows = [r for r in report.rows if "<f" in r.label and "f1 f" in r.label]
    assert moment_rows and all(
        r.informational for r in report.rows if "lag" in r.label
    )
    assert report.passed  # means still close; closures are informational


def test_run_simulation_artifacts_and_informational_third_moments(tmp_path):
    grid, S, B = collision_free_univariate()
    config = _config(
        grid,
        S,
        B,
        Method.SECOND_ORDER,
        out_dir=str(tmp_path / "out"),
        realizations=3,
        blocks=2,
    )
    report = run_simulation(config, write_plot_data=True)
    names = sorted(os.listdir(config.out_dir))
    assert names == [
        "moments.csv",
        "report.json",
        "sample_0000.srm3",
        "sample_0001.srm3",
        "sample_0002.srm3",
    ]
    third_rows = [r for r in report.rows if r.label.count("f") == 3]
    assert third_rows and all(r.informational for r in third_rows)
    data = json.loads((tmp_path / "out" / "report.json").read_text())
    assert data["metadata"]["realizations"] == 3


def test_run_tables_structure_and_infeasibility_record():
    report, infeasible = run_tables(seed=0, realizations=4, blocks=2)
    assert infeasible is not None  # published amplitude is unrealizable
    assert "infeasible" in report.metadata
    target_rows = [r for r in report.rows if r.label.startswith("target ")]
    assert len(target_rows) == 16
    assert all(r.passed for r in target_rows)


def test_run_tables_with_scaled_bispectrum_runs_third_order():
    report, infeasible = run_tables(
        seed=0, realizations=3, bispectrum_scale=0.03, blocks=2
    )
    assert infeasible is None
    third_rows = [r for r in report.rows if r.label.startswith("third-order")]
    assert third_rows
