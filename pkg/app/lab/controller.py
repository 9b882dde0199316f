#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Entry point to the laboratory."""
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
import structlog

from app.core.errors.exceptions import WaveLabException
from app.core.initializers.error_handling import handle_lab_exception
from app.core.initializers.logging import bind_run_context
from app.lab.api_models import ExperimentConfig, ExperimentKind, RunResult
from app.lab.base_models.experiment import ExperimentBase, RunContext
from app.lab.exceptions import DomainException, UnknownExperimentException
from app.lab.experiments.contraction import ContractionExperiment
from app.lab.experiments.degiorgi import DeGiorgiExperiment
from app.lab.experiments.evolve import EvolveExperiment
from app.lab.experiments.ks_compare import KellerSegelExperiment, fixed_frame_data
from app.lab.experiments.lemmas import LemmaExperiment
from app.lab.experiments.picard import PicardExperiment
from app.lab.experiments.wave import WaveExperiment
from app.lab.physics.kellersegel import ks_compare, refinement_time_step
from app.lab.physics.solver import (
    aligned_time_step,
    evolve,
    relative_entropy_residual,
    stable_time_step,
    stationary_drift,
    w_residual,
)
from app.lab.physics.wave import build_profile
from app.lab.utils.config_loader import dump_config, validate_config
from app.lab.utils.file_helpers import RunDirectory
from app.lab.utils.grid_helpers import observed_order
from app.lab.utils.perturbations import perturbed_state
from app.lab.utils.plot_script import plot_script
from app.lab.utils.serializers import checks_to_frame
from app_config import get_setting

MIN_ORDER = 1.8
REFINEMENT_HORIZON = 0.5
REFINED_DIAGNOSTICS = ("stationary_drift", "entropy_residual", "w_residual", "ks_residual")

logger = structlog.get_logger(__name__)


class LabController(object):
    """
    A Controller Object that runs any of the hooked up experiments and owns the layout of their run directories
    """

    def __init__(self):
        experiment_instances = [
            WaveExperiment(),
            EvolveExperiment(),
            ContractionExperiment(),
            PicardExperiment(),
            DeGiorgiExperiment(),
            KellerSegelExperiment(),
            LemmaExperiment(),
        ]
        self.experiments = {experiment.id: experiment for experiment in experiment_instances}

    def get_experiment_keys(self) -> List[str]:
        return [kind.value for kind in self.experiments]

    def get_experiment(self, kind: Union[str, ExperimentKind]) -> ExperimentBase:
        try:
            kind = ExperimentKind(kind)
        except ValueError:
            raise UnknownExperimentException(f"unknown experiment kind '{kind}'")
        if kind not in self.experiments:
            raise UnknownExperimentException(f"no experiment registered for '{kind.value}'")
        return self.experiments[kind]

    def run_experiment(self, config: ExperimentConfig, out_root: Optional[Union[str, Path]] = None) -> RunResult:
        """
            Run the configured experiment in a fresh run directory
        Args:
            config:     Experiment configuration; derived defaults are filled in if missing
            out_root:   Parent of the run directory (default: the WAVELAB_OUT setting)

        Returns:
            The run directory, the exit status (0 iff every check passed) and the checks themselves
        """
        kind = config.experiment.kind
        experiment = self.get_experiment(kind)
        directory = RunDirectory(out_root or get_setting("WAVELAB_OUT"), kind.value, config.perturbation.seed)
        bind_run_context(directory.run_id, kind.value)
        logger.info("Starting experiment", datetime=datetime.utcnow(), name=experiment.name)

        try:
            config = validate_config(config)
            directory.write_text("config.ini", dump_config(config))
            checks = experiment.run(RunContext(config=config, directory=directory))
        except WaveLabException as exc:
            status = handle_lab_exception(exc)
            directory.write_csv("summary.csv", checks_to_frame({"completed": False}))
            return RunResult(
                kind=kind, run_dir=str(directory.path), exit_status=status, detail=f"{type(exc).__name__}: {exc.detail}"
            )

        return self._finish(kind, directory, {name: bool(value) for name, value in checks.items()})

    def run_refinement(
        self, config: ExperimentConfig, levels: int, out_root: Optional[Union[str, Path]] = None
    ) -> RunResult:
        directory = RunDirectory(out_root or get_setting("WAVELAB_OUT"), "refine", config.perturbation.seed)
        bind_run_context(directory.run_id, "refine")
        try:
            config = validate_config(config)
            directory.write_text("config.ini", dump_config(config))
            table = refinement_study(config, levels)
        except WaveLabException as exc:
            status = handle_lab_exception(exc)
            directory.write_csv("summary.csv", checks_to_frame({"completed": False}))
            return RunResult(
                kind=config.experiment.kind,
                run_dir=str(directory.path),
                exit_status=status,
                detail=f"{type(exc).__name__}: {exc.detail}",
            )
        directory.write_csv("refinement.csv", table)
        return self._finish(config.experiment.kind, directory, refinement_checks(table))

    @staticmethod
    def _finish(kind: ExperimentKind, directory: RunDirectory, checks: Dict[str, bool]) -> RunResult:
        directory.write_csv("summary.csv", checks_to_frame(checks))
        directory.write_text("plot.py", plot_script(directory.run_id, directory.files()))
        failed = [name for name, passed in checks.items() if not passed]
        logger.info("Finished experiment", datetime=datetime.utcnow(), failed=failed, run_dir=str(directory.path))
        return RunResult(
            kind=kind,
            run_dir=str(directory.path),
            exit_status=0 if not failed else 1,
            checks=checks,
            detail=f"failed checks: {', '.join(failed)}" if failed else None,
        )


def run_experiment(config: ExperimentConfig, out_root: Optional[Union[str, Path]] = None) -> RunResult:
    return LabController().run_experiment(config, out_root)


def refinement_study(config: ExperimentConfig, levels: int) -> pd.DataFrame:
    """Residual-type diagnostics at (dx, dt), (dx/2, dt/4), ... with their observed orders.

    Args:
        config:     Validated configuration; its grid is the coarsest level
        levels:     Number of levels, at least 3

    Returns:
        One row per level with every diagnostic, plus an ``<name>_order`` column per diagnostic
        (NaN on the coarsest row)
    """
    if levels < 3:
        raise DomainException(f"a refinement study needs at least 3 levels, got {levels}")
    context = RunContext(config=config)
    coarse = context.profile
    horizon = min(config.time.t_end, REFINEMENT_HORIZON)
    initial = context.initial_state()
    dt = config.time.dt or min(
        stable_time_step(state, coarse, config.time.dt_safety) for state in (initial, coarse.as_state())
    )
    # every level takes an integer number of steps to the horizon
    dt, _ = aligned_time_step(dt, horizon)
    ks_dt = refinement_time_step(dt, fixed_frame_data(context, coarse.grid.as_fixed())[0], horizon)

    rows = []
    for level in range(levels):
        grid = coarse.grid.refined(2**level)
        level_dt = dt / 4**level
        profile = build_profile(context.end, context.constants, grid)
        evolution = evolve(
            perturbed_state(profile, config.perturbation), profile, horizon, level_dt, dt=level_dt, track_shift=False
        )
        states = evolution.states()
        entropy = relative_entropy_residual(states, profile)["residual"].abs().max()
        w = w_residual(states, context.end.sigma)["residual"].max()

        n0, q0 = fixed_frame_data(context, grid.as_fixed())
        _, _, equivalence = ks_compare(n0, q0, grid.as_fixed(), context.end.nu, horizon, horizon, ks_dt / 4**level)

        rows.append(
            {
                "level": level,
                "n_points": grid.n_points,
                "dx": grid.dx,
                "dt": level_dt,
                "ks_dt": ks_dt / 4**level,
                "stationary_drift": stationary_drift(profile, horizon, level_dt),
                "entropy_residual": float(entropy),
                "w_residual": float(w),
                "ks_residual": float(equivalence["residual"].max()),
            }
        )
        logger.debug("Refinement level done", **rows[-1])

    table = pd.DataFrame(rows)
    for name in REFINED_DIAGNOSTICS:
        table[f"{name}_order"] = [np.nan, *observed_order(table[name])]
    return table


def refinement_checks(table: pd.DataFrame) -> Dict[str, bool]:
    """Every consecutive pair of levels reaches the minimum order for every diagnostic."""
    checks = {}
    for name in REFINED_DIAGNOSTICS:
        orders = table[f"{name}_order"].dropna()
        checks[f"{name}_order"] = bool(len(orders) > 0 and (orders >= MIN_ORDER).all())
    return checks


def run_sweep(
    configs: Sequence[ExperimentConfig], out_root: Optional[Union[str, Path]] = None, max_workers: Optional[int] = None
) -> List[RunResult]:
    """Independent runs dispatched to a process pool; each one writes its own directory."""
    out_root = out_root or get_setting("WAVELAB_OUT")
    max_workers = max_workers or get_setting("WAVELAB_MAX_WORKERS")
    logger.info("Starting sweep", runs=len(configs), max_workers=max_workers)
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(run_experiment, configs, [out_root] * len(configs)))
    logger.info("Finished sweep", failed=sum(not result.passed for result in results))
    return results
