#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Keller-Segel against the transformed (n, q) system.
"""
from datetime import datetime
from typing import Dict, Tuple

import numpy as np
import pandas as pd
import structlog

from app.lab.api_models import ExperimentKind
from app.lab.base_models.experiment import ExperimentBase, RunContext
from app.lab.physics.fields import Grid
from app.lab.physics.kellersegel import ks_compare, matched_states, refinement_time_step, summarize_equivalence
from app.lab.physics.solver import ImexStepper
from app.lab.physics.wave import build_profile
from app.lab.utils.grid_helpers import observed_order
from app.lab.utils.perturbations import perturbed_state

MIN_ORDER = 1.8
ROUND_OFF_TOLERANCE = 1e-10


def fixed_frame_data(context: RunContext, grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    """The configured perturbed wave sampled on ``grid``, read as fixed-frame data at t = 0."""
    state = perturbed_state(build_profile(context.end, context.constants, grid), context.config.perturbation)
    return state.n, state.q


def refinement_residuals(context: RunContext, levels: int = 3) -> pd.DataFrame:
    """Cross-model residual at (dx, dt), (dx/2, dt/4), ... with the step fixed by the coarsest data."""
    config = context.config
    grid = context.profile.grid.as_fixed()
    t_end, output_every = config.time.t_end, config.time.output_every
    nu = context.end.nu

    n0, q0 = fixed_frame_data(context, grid)
    _, nq_initial = matched_states(n0, q0, grid)
    dt = config.time.dt or config.time.dt_safety * ImexStepper.fixed_frame(nq_initial, nu).max_stable_dt(
        nq_initial
    )
    dt = refinement_time_step(dt, n0, output_every)

    rows = []
    for level in range(levels):
        fine = grid.refined(2**level)
        n0, q0 = fixed_frame_data(context, fine)
        _, _, frame = ks_compare(n0, q0, fine, nu, t_end, output_every, dt / 4**level)
        summary = summarize_equivalence(frame)
        rows.append({"level": level, "n_points": fine.n_points, "dt": dt / 4**level, **summary.as_row()})
    table = pd.DataFrame(rows)
    table["order"] = [np.nan, *observed_order(table["max_residual"])]
    return table


def homogeneous_residual(context: RunContext) -> float:
    """Residual for the constant solution n = n_minus, c = 1 (q = 0), which both models keep exactly."""
    grid = context.profile.grid.as_fixed()
    n0 = np.full(grid.n_points, context.end.n_minus)
    _, _, frame = ks_compare(n0, np.zeros(grid.n_points), grid, context.end.nu, context.config.time.t_end)
    return float(frame["residual"].max())


class KellerSegelExperiment(ExperimentBase):
    """
    Runs both models on matched data and measures the gap under joint refinement
    """

    def __init__(self):
        super().__init__()
        self.id = ExperimentKind.ks_compare
        self.logger = structlog.get_logger(__name__)
        self.logger.debug(f"Initializing experiment [{self.id.value}]", datetime=datetime.utcnow())

        self.name = "Keller-Segel comparison"
        self.description = (
            "Face-flux Keller-Segel scheme against the IMEX (n, q) scheme on data related by "
            "q = -(log c)_x, refined jointly in space and time."
        )

    def run(self, context: RunContext) -> Dict[str, bool]:
        table = refinement_residuals(context, context.config.experiment.refinement_levels)
        homogeneous = homogeneous_residual(context)
        self.logger.info(
            "Models compared",
            datetime=datetime.utcnow(),
            residuals=table["max_residual"].tolist(),
            homogeneous=homogeneous,
        )

        context.directory.write_csv("ks_refinement.csv", table)
        context.directory.write_csv("ks_homogeneous.csv", pd.DataFrame([{"max_residual": homogeneous}]))

        orders = table["order"].dropna()
        return {
            "equivalence_order": bool(len(orders) > 0 and (orders >= MIN_ORDER).all()),
            "homogeneous_round_off": homogeneous < ROUND_OFF_TOLERANCE,
            "concentration_positive": bool((table["min_c"] > 0.0).all()),
        }
