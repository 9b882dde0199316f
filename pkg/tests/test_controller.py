#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from pathlib import Path

import pandas as pd
import pytest

from app.lab.api_models import ExperimentKind
from app.lab.controller import LabController, refinement_checks, refinement_study
from app.lab.exceptions import UnknownExperimentException
from app.lab.utils.config_loader import load_config
from app.main import build_parser, main


@pytest.fixture()
def controller():
    return LabController()


def test_experiments_are_registered(controller):
    assert set(controller.get_experiment_keys()) == {kind.value for kind in ExperimentKind}
    assert controller.get_experiment("ks-compare").id == ExperimentKind.ks_compare

    with pytest.raises(UnknownExperimentException) as e:
        controller.get_experiment("tsunami")
    assert e.value.exit_code == 2


def test_wave_run(controller, weak_config, tmp_path):
    result = controller.run_experiment(weak_config, tmp_path)
    assert result.exit_status == 0, result.detail
    assert result.passed
    assert result.checks["strictly_monotone"]

    run_dir = Path(result.run_dir)
    assert run_dir.parent == tmp_path.resolve()
    files = {path.name for path in run_dir.iterdir()}
    assert {
        "config.ini",
        "profile.csv",
        "diagnostics.csv",
        "rankine_hugoniot_sweep.csv",
        "residual_refinement.csv",
        "summary.csv",
        "plot.py",
    } <= files

    summary = pd.read_csv(run_dir / "summary.csv")
    assert summary["passed"].all()
    profile = pd.read_csv(run_dir / "profile.csv")
    assert list(profile.columns) == ["xi", "n_tilde", "q_tilde", "n_tilde_prime", "a", "n_exact"]


def test_failed_runs_leave_a_summary(controller, weak_config, tmp_path):
    # TEST 1: An explicit step above the stability bound
    config = weak_config.with_overrides(kind=ExperimentKind.evolve)
    config = config.model_copy(update={"time": config.time.model_copy(update={"dt": 100.0})})
    result = controller.run_experiment(config, tmp_path)
    assert result.exit_status == 6
    assert result.detail.startswith("StabilityException")
    summary = pd.read_csv(Path(result.run_dir) / "summary.csv")
    assert list(summary["check"]) == ["completed"]
    assert not summary["passed"].any()

    # TEST 2: Too few refinement levels
    result = controller.run_refinement(weak_config, 2, tmp_path)
    assert result.exit_status == 3
    assert Path(result.run_dir).name.startswith("refine-")


def test_command_line(tmp_path, write_config, weak_config_text):
    args = build_parser().parse_args(["refine", "--config", "a.ini", "--levels", "4"])
    assert args.command == "refine"
    assert args.levels == 4
    args = build_parser().parse_args(["ks-compare", "--config", "a.ini", "--seed", "2"])
    assert args.seed == 2
    assert args.out is None

    # a configuration error becomes exit status 2
    bad = write_config(weak_config_text.replace("n_plus = 1.95", "n_plus 1.95"), "bad.ini")
    assert main(["wave", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_refinement_checks():
    table = pd.DataFrame(
        {
            "stationary_drift_order": [float("nan"), 2.0, 1.99],
            "entropy_residual_order": [float("nan"), 2.1, 2.0],
            "w_residual_order": [float("nan"), 1.95, 2.0],
            "ks_residual_order": [float("nan"), 1.9, 1.7],
        }
    )
    checks = refinement_checks(table)
    assert checks == {
        "stationary_drift_order": True,
        "entropy_residual_order": True,
        "w_residual_order": True,
        "ks_residual_order": False,
    }


def test_refinement_study_reaches_second_order():
    config = load_config(Path(__file__).parents[1] / "configs" / "c06_refinement.ini")
    table = refinement_study(config, 3)
    assert list(table["n_points"]) == [2049, 4097, 8193]
    assert list(table["dt"]) == pytest.approx([table["dt"].iloc[0] / 4**level for level in range(3)])
    for name in ("stationary_drift", "entropy_residual", "w_residual", "ks_residual"):
        assert (table[name].diff().dropna() < 0.0).all(), name
    assert all(refinement_checks(table).values())
