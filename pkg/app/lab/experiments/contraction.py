#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Contraction of the shifted weighted relative entropy.
"""
from datetime import datetime
from typing import Dict

import numpy as np
import pandas as pd
import structlog

from app.lab.api_models import ExperimentKind
from app.lab.base_models.experiment import ExperimentBase, RunContext
from app.lab.physics.entropy import unweighted_bound_check
from app.lab.physics.fields import VACUUM_FLOOR
from app.lab.physics.solver import (
    calibrate_tolerance,
    contraction_check,
    evolve,
    shift_envelope_check,
    stable_time_step,
    uniqueness_check,
)

UNIQUENESS_HORIZON = 1.0


class ContractionExperiment(ExperimentBase):
    """
    Compares a perturbed run against the unperturbed one that calibrates the discretisation tolerance
    """

    def __init__(self):
        super().__init__()
        self.id = ExperimentKind.contraction
        self.logger = structlog.get_logger(__name__)
        self.logger.debug(f"Initializing experiment [{self.id.value}]", datetime=datetime.utcnow())

        self.name = "Weighted entropy contraction"
        self.description = (
            "Checks that the shifted weighted relative entropy plus sqrt(kappa) times the cumulative "
            "dissipation never exceeds its initial value, up to c (dx^2 + dt) t."
        )

    def run(self, context: RunContext) -> Dict[str, bool]:
        config = context.config
        profile = context.profile
        t_end, output_every = config.time.t_end, config.time.output_every

        initial = context.initial_state()
        unperturbed = profile.as_state()
        # both runs share one step so they carry the same discretisation error
        dt = config.time.dt or min(
            stable_time_step(state, profile, config.time.dt_safety) for state in (initial, unperturbed)
        )
        perturbed = evolve(initial, profile, t_end, output_every, dt=dt)
        reference = evolve(unperturbed, profile, t_end, output_every, dt=dt)

        dx, dt = profile.grid.dx, perturbed.dt
        c = calibrate_tolerance(reference.reports, dx, dt)
        contraction = contraction_check(perturbed.reports, dx, dt, c)
        envelope = shift_envelope_check(perturbed.reports, dx)
        horizon = min(t_end, UNIQUENESS_HORIZON)
        uniqueness = uniqueness_check(initial, profile, horizon, horizon, dt=perturbed.dt)
        self.logger.info(
            "Contraction measured",
            datetime=datetime.utcnow(),
            tolerance_constant=c,
            worst_margin=contraction.worst_margin,
            max_abs_shift=envelope.max_abs_shift,
        )

        directory = context.directory
        directory.write_csv("evolution.csv", perturbed.reports)
        directory.write_csv("reference.csv", reference.reports)
        directory.write_csv(
            "contraction.csv",
            pd.DataFrame([{**contraction.as_row(), **{f"shift_{k}": v for k, v in envelope.as_row().items()}}]),
        )
        directory.write_csv("uniqueness.csv", pd.DataFrame([uniqueness.as_row()]))

        return {
            "monotone_contraction": contraction.passed,
            "shift_linear_envelope": envelope.passed,
            "unweighted_bound": unweighted_bound_check(perturbed.reports),
            "no_vacuum": perturbed.min_n > VACUUM_FLOOR,
            "h1_finite": bool(np.isfinite(perturbed.reports["h1_norm"]).all()),
            "uniqueness": uniqueness.passed,
        }
