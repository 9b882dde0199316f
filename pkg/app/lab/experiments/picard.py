#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Picard iteration for short-time existence.
"""
from datetime import datetime
from typing import Dict

import numpy as np
import pandas as pd
import structlog

from app.lab.api_models import ExperimentKind, PerturbationBlock, PerturbationKind, PerturbationTarget
from app.lab.base_models.experiment import ExperimentBase, RunContext
from app.lab.physics.fields import FieldState
from app.lab.physics.picard import envelope_fit, lower_bound_check, picard_run, picard_vs_evolve_gap
from app.lab.physics.solver import evolve
from app.lab.utils.perturbations import perturbation_shape

PROBE_FRACTIONS = (0.1, 0.2, 0.5, 1.0)


def lower_bound_probe(context: RunContext) -> FieldState:
    """Constant density n_plus with the configured bump on q (a Gaussian when none is configured).

    A flat density isolates the deficit that the q gradient drains in short time.
    """
    grid = context.grid.as_fixed()
    block = context.config.perturbation
    if block.kind == PerturbationKind.none:
        block = PerturbationBlock(kind=PerturbationKind.gaussian)
    block = block.model_copy(update={"target": PerturbationTarget.q})
    bump = perturbation_shape(grid.xi, block)
    bump[0] = bump[-1] = 0.0
    r0 = context.end.n_plus
    return FieldState(t=0.0, grid=grid, n=np.full(grid.n_points, r0), q=context.end.q_plus + bump)


class PicardExperiment(ExperimentBase):
    """
    Iterates the frozen-coefficient map from the configured data and checks the factorial envelope
    """

    def __init__(self):
        super().__init__()
        self.id = ExperimentKind.picard
        self.logger = structlog.get_logger(__name__)
        self.logger.debug(f"Initializing experiment [{self.id.value}]", datetime=datetime.utcnow())

        self.name = "Picard iteration"
        self.description = (
            "Successive Picard differences against the t^k/k! envelope, the limit against the IMEX "
            "evolution and the short-time lower bound on the density."
        )

    def run(self, context: RunContext) -> Dict[str, bool]:
        block = context.config.experiment
        t_span, k_max = block.picard_t_span, block.picard_k_max

        moving = context.initial_state()
        fixed = FieldState(t=0.0, grid=moving.grid.as_fixed(), n=moving.n.copy(), q=moving.q.copy())
        trace = picard_run(fixed, t_span, k_max)
        fit = envelope_fit(trace)

        evolved = evolve(moving, context.profile, t_span, t_span, track_shift=False)
        gap = picard_vs_evolve_gap(trace, evolved.final, context.end.sigma, evolved.dt)

        probe = lower_bound_probe(context)
        probes = [picard_run(probe, fraction * t_span, k_max) for fraction in PROBE_FRACTIONS]
        lower = lower_bound_check(probes, context.end.n_plus)
        self.logger.info(
            "Picard iteration finished",
            datetime=datetime.utcnow(),
            iterations=len(trace.norms),
            diverged=trace.diverged,
            gap=gap.gap,
            deficit_slope=lower.deficit_slope,
        )

        directory = context.directory
        directory.write_csv("picard.csv", trace.norms)
        directory.write_csv("envelope.csv", pd.DataFrame([fit.as_row()]))
        directory.write_csv("picard_gap.csv", pd.DataFrame([gap.as_row()]))
        directory.write_csv(
            "lower_bound.csv",
            pd.DataFrame(
                {
                    "t_span": lower.t_spans,
                    "min_n": lower.min_n,
                    "deficit": [lower.r0 - value for value in lower.min_n],
                }
            ),
        )

        checks = {
            "converged": not trace.diverged,
            "factorial_envelope": fit.consistent,
            "limit_matches_evolution": gap.passed,
            "lower_bound_half": lower.half_bound_holds,
        }
        if lower.slope_evaluated:
            checks["lower_bound_slope"] = lower.slope_holds
        else:
            self.logger.warning(
                "Deficit slope not evaluated",
                positive_deficits=sum(value < lower.r0 for value in lower.min_n),
            )
        return checks
