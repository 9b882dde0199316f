#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional

from app.lab.api_models import ExperimentConfig, ExperimentKind
from app.lab.physics.fields import FieldState, Grid
from app.lab.physics.params import EndStates, TheoremConstants, canonicalize, make_end_states
from app.lab.physics.wave import WaveProfile, build_profile
from app.lab.utils.file_helpers import RunDirectory
from app.lab.utils.perturbations import perturbed_state


@dataclass
class RunContext:
    """Everything an experiment derives from its configuration, computed on first use."""

    config: ExperimentConfig
    directory: Optional[RunDirectory] = None

    @cached_property
    def canonical(self):
        block = self.config.end_states
        return canonicalize(make_end_states(block.n_minus, block.n_plus, block.q_minus, block.nu))

    @property
    def end(self) -> EndStates:
        return self.canonical[0]

    @property
    def reflected(self) -> bool:
        return self.canonical[1]

    @property
    def constants(self) -> TheoremConstants:
        return TheoremConstants(kappa=self.config.constants.kappa, lambda_=self.config.constants.lambda_)

    @property
    def grid(self) -> Grid:
        block = self.config.grid
        return Grid(xi_min=block.xi_min, xi_max=block.xi_max, n_points=block.n_points)

    @cached_property
    def profile(self) -> WaveProfile:
        return build_profile(self.end, self.constants, self.grid)

    def initial_state(self) -> FieldState:
        return perturbed_state(self.profile, self.config.perturbation)


class ExperimentBase(metaclass=ABCMeta):
    """
    Base class for all experiments. Every experiment kind of the command line has one subclass.
    """

    def __init__(self):
        self.id: Optional[ExperimentKind] = None
        self.name = None
        self.description = None

    @abstractmethod
    def run(self, context: RunContext) -> Dict[str, bool]:  # pragma: no cover
        """Write the experiment's CSVs into the run directory and return pass/fail per checked invariant."""
        print("This method is abstract and should be overridden.")
