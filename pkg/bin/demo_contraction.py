#!/usr/bin/env python

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

# -*- coding: utf-8 -*-
import tempfile

from app.core.initializers.logging import initialize_logging
from app.lab.api_models import (
    EndStatesBlock,
    ExperimentBlock,
    ExperimentConfig,
    ExperimentKind,
    GridBlock,
    PerturbationBlock,
    PerturbationKind,
    TimeBlock,
)
from app.lab.controller import run_experiment

"""
    This is a DEMO for the contraction experiment on a short horizon

    The purpose of this demo is to show how an experiment can be configured in code and run through the
    controller; the run directory is created under the system temporary directory.
"""

if __name__ == "__main__":
    initialize_logging("WARNING")
    config = ExperimentConfig(
        end_states=EndStatesBlock(n_minus=2.0, n_plus=1.95, q_minus=0.0),
        grid=GridBlock(xi_min=-480.0, xi_max=480.0, n_points=2049),
        time=TimeBlock(t_end=2.0, output_every=0.5),
        perturbation=PerturbationBlock(kind=PerturbationKind.gaussian, amplitude=0.5, width=2.0),
        experiment=ExperimentBlock(kind=ExperimentKind.contraction),
    )

    result = run_experiment(config, tempfile.mkdtemp(prefix="wavelab-"))
    print(result.run_dir)
    for name, passed in result.checks.items():
        print(f"{name:>24}: {'pass' if passed else 'FAIL'}")
