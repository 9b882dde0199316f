#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Truncation-energy certificates for the sup of n and of 1/n.
"""
import math
from datetime import datetime
from typing import Dict

import numpy as np
import pandas as pd
import structlog

from app.lab.api_models import ExperimentKind
from app.lab.base_models.experiment import ExperimentBase, RunContext
from app.lab.physics.degiorgi import (
    assembled_bound,
    degiorgi_report,
    density_series,
    reciprocal_series,
    reports_to_frame,
    sequence_lemma_closed_form,
    sequence_lemma_iterate,
    sequence_lemma_threshold,
    smallest_passing_cap,
)
from app.lab.physics.solver import evolve

SEQUENCE_C = 2.0
SEQUENCE_BETA = 2.0
CONVERGENT_SEED = 0.125
DIVERGENT_SEED = 1.0
THRESHOLD_RTOL = 1e-6


class DeGiorgiExperiment(ExperimentBase):
    """
    Certifies caps on n and 1/n along an evolution and exercises the extremal recursion
    """

    def __init__(self):
        super().__init__()
        self.id = ExperimentKind.degiorgi
        self.logger = structlog.get_logger(__name__)
        self.logger.debug(f"Initializing experiment [{self.id.value}]", datetime=datetime.utcnow())

        self.name = "De Giorgi truncation"
        self.description = (
            "Truncation energies at levels approaching a cap M for the density and its reciprocal, "
            "plus the convergence threshold of W_{k+1} = C^k W_k^beta."
        )

    def run(self, context: RunContext) -> Dict[str, bool]:
        config = context.config
        k_max = config.experiment.degiorgi_k_max
        evolution = evolve(
            context.initial_state(),
            context.profile,
            config.time.t_end,
            config.time.output_every,
            dt=config.time.dt,
            safety=config.time.dt_safety,
            track_shift=False,
        )
        states = evolution.states()
        times = np.array([state.t for state in states])
        dx = context.profile.grid.dx

        checks = {}
        frames, bounds = [], []
        for field, series in (("n", density_series(states)), ("inverse_n", reciprocal_series(states))):
            reports = degiorgi_report(series, times, dx, k_max=k_max)
            cap = smallest_passing_cap(reports)
            frames.append(reports_to_frame(reports).assign(field=field))
            bound = assembled_bound(states, context.profile, series)
            bounds.append({"field": field, "certified_M": cap, "sup": float(series.max()), **bound.as_row()})
            checks[f"{field}_certified"] = cap is not None and float(series.max()) <= cap

        threshold = sequence_lemma_threshold(SEQUENCE_C, SEQUENCE_BETA, k_max)
        closed_form = sequence_lemma_closed_form(SEQUENCE_C, SEQUENCE_BETA)
        seeds = {
            "converges": sequence_lemma_iterate(SEQUENCE_C, SEQUENCE_BETA, CONVERGENT_SEED, k_max),
            "diverges": sequence_lemma_iterate(SEQUENCE_C, SEQUENCE_BETA, DIVERGENT_SEED, k_max),
        }
        self.logger.info(
            "Caps certified",
            datetime=datetime.utcnow(),
            caps=[row["certified_M"] for row in bounds],
            threshold=threshold,
        )

        directory = context.directory
        directory.write_csv("degiorgi.csv", pd.concat(frames, ignore_index=True))
        directory.write_csv("degiorgi_bounds.csv", pd.DataFrame(bounds))
        directory.write_csv(
            "sequence.csv",
            pd.DataFrame(
                [
                    {"case": case, "W0": report.W0, "log_w_last": report.log_w[-1]}
                    for case, report in seeds.items()
                ]
                + [
                    {"case": "bisected_threshold", "W0": threshold, "log_w_last": np.nan},
                    {"case": "closed_form_threshold", "W0": closed_form, "log_w_last": np.nan},
                ]
            ),
        )

        checks["sequence_small_seed_converges"] = seeds["converges"].converged
        checks["sequence_large_seed_diverges"] = not seeds["diverges"].converged
        checks["sequence_threshold"] = math.isclose(threshold, closed_form, rel_tol=THRESHOLD_RTOL)
        return checks
