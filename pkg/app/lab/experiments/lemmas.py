#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Randomised and example-based checks of the auxiliary inequalities.
"""
from datetime import datetime
from typing import Dict, Tuple

import numpy as np
import pandas as pd
import structlog

from app.lab.api_models import ExperimentKind
from app.lab.base_models.experiment import ExperimentBase, RunContext
from app.lab.physics.entropy import (
    LinftyBoundReport,
    pi_inequality_check,
    linfty_decomposition_bound,
    local_mass_bound,
    perturbation_decomposition,
)
from app.lab.physics.fields import Grid
from app.lab.utils.grid_helpers import centered_gradient
from app.lab.utils.perturbations import gaussian_bump, square_bump

EXAMPLE_GRID = Grid(xi_min=-20.0, xi_max=20.0, n_points=2001)


def _decomposed(f1: np.ndarray, f2: np.ndarray, dx: float) -> LinftyBoundReport:
    # slopes of the two parts bound the slope of the sum by the triangle inequality
    g1 = np.abs(centered_gradient(f1, dx))
    g2 = np.abs(centered_gradient(f2, dx))
    return linfty_decomposition_bound(f1, f2, g1, g2, dx)


def linfty_examples(context: RunContext) -> Dict[str, LinftyBoundReport]:
    xi, dx = EXAMPLE_GRID.xi, EXAMPLE_GRID.dx
    examples: Dict[str, Tuple[np.ndarray, np.ndarray]] = {
        "narrow_peak_on_broad_bump": (gaussian_bump(xi, 3.0, 0.7, 0.0), gaussian_bump(xi, 0.5, 5.0, 0.0)),
        "plateau_on_wave_packet": (
            square_bump(xi, 1.0, 4.0, 0.0),
            0.2 * np.cos(xi) * gaussian_bump(xi, 1.0, 7.0, 0.0),
        ),
    }
    reports = {name: _decomposed(f1, f2, dx) for name, (f1, f2) in examples.items()}

    split = perturbation_decomposition(context.initial_state(), context.profile)
    reports["configured_perturbation"] = _decomposed(split.m1, split.m2, context.profile.grid.dx)
    return reports


class LemmaExperiment(ExperimentBase):
    """
    Sweeps the relative potential over random pairs and triples and evaluates the pointwise bounds
    """

    def __init__(self):
        super().__init__()
        self.id = ExperimentKind.check_lemmas
        self.logger = structlog.get_logger(__name__)
        self.logger.debug(f"Initializing experiment [{self.id.value}]", datetime=datetime.utcnow())

        self.name = "Inequality suite"
        self.description = (
            "Ratio bands of Pi(n1|n2) in the local and global regimes, monotonicity along ordered "
            "triples, a counterexample to the reversed quadratic bound and the sup-norm decomposition bounds."
        )

    def run(self, context: RunContext) -> Dict[str, bool]:
        block = context.config.experiment
        sweep = pi_inequality_check(
            context.end.n_minus, block.lemma_delta, block.lemma_samples, context.config.perturbation.seed
        )
        linfty = linfty_examples(context)
        mass = local_mass_bound(context.initial_state())
        self.logger.info(
            "Inequalities swept",
            datetime=datetime.utcnow(),
            samples=sweep.samples,
            monotonicity_violations=sweep.monotonicity_violations,
            counterexample_ratio=sweep.reverse_counterexample_ratio,
        )

        directory = context.directory
        directory.write_csv("lemmas.csv", pd.DataFrame([sweep.as_row()]))
        directory.write_csv(
            "linfty.csv",
            pd.DataFrame([{"example": name, **report.as_row()} for name, report in linfty.items()]),
        )
        directory.write_csv("local_mass.csv", pd.DataFrame([mass.as_row()]))

        return {
            "ratio_bands_finite": sweep.bands_finite,
            "monotonicity": sweep.monotonicity_violations == 0,
            "reverse_counterexample": sweep.reverse_bound_violated,
            "linfty_bound": all(report.holds for report in linfty.values()),
            "linfty_sharp_bound": all(report.sharp_holds for report in linfty.values()),
            "linfty_preconditions": all(report.precondition_holds for report in linfty.values()),
            "local_mass_bound": mass.holds,
        }
