#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from enum import Enum
from typing import Dict, Optional

from pydantic import ConfigDict, Field

from app.core.base_model import BaseModel

"""
    Experiment configuration models and run results.
"""


class ExperimentKind(str, Enum):
    # Valid experiment kinds, one command line subcommand each
    wave = "wave"
    evolve = "evolve"
    contraction = "contraction"
    picard = "picard"
    degiorgi = "degiorgi"
    ks_compare = "ks-compare"
    check_lemmas = "check-lemmas"


class PerturbationKind(str, Enum):
    none = "none"
    gaussian = "gaussian"
    square = "square"
    random = "random"


class PerturbationTarget(str, Enum):
    n = "n"
    q = "q"


class EndStatesBlock(BaseModel):
    n_minus: float = Field(..., gt=0.0, description="Density at minus infinity")
    n_plus: float = Field(..., gt=0.0, description="Density at plus infinity")
    q_minus: float = Field(..., description="Flux variable at minus infinity")
    nu: float = Field(1.0, gt=0.0, description="Viscosity")


class ConstantsBlock(BaseModel):
    kappa: Optional[float] = Field(None, description="Smallness constant; default 0.9 min(n_minus/15, 1/8)")
    lambda_: Optional[float] = Field(None, alias="lambda", description="Weight amplitude; default sqrt(epsilon)")

    model_config = ConfigDict(populate_by_name=True)


class GridBlock(BaseModel):
    xi_min: float = Field(-60.0, lt=0.0)
    xi_max: float = Field(60.0, gt=0.0)
    n_points: int = Field(4097, ge=3)


class TimeBlock(BaseModel):
    dt_safety: float = Field(0.9, gt=0.0, le=1.0, description="Fraction of the stability bound")
    t_end: float = Field(20.0, gt=0.0)
    output_every: float = Field(0.5, gt=0.0)
    dt: Optional[float] = Field(None, gt=0.0, description="Explicit time step, checked against the bound")


class PerturbationBlock(BaseModel):
    kind: PerturbationKind = PerturbationKind.none
    amplitude: float = 0.5
    width: float = Field(1.0, gt=0.0)
    center: float = 0.0
    seed: int = Field(0, ge=0)
    modes: int = Field(8, ge=1, description="Fourier modes of the random perturbation")
    target: PerturbationTarget = PerturbationTarget.n


class ExperimentBlock(BaseModel):
    kind: ExperimentKind = ExperimentKind.wave
    refinement_levels: int = Field(3, ge=3)
    picard_k_max: int = Field(12, ge=1)
    picard_t_span: float = Field(0.1, gt=0.0)
    degiorgi_k_max: int = Field(40, ge=1)
    lemma_samples: int = Field(1_000_000, ge=10)
    lemma_delta: float = Field(0.5, gt=0.0, le=0.5)


class ExperimentConfig(BaseModel):
    end_states: EndStatesBlock
    constants: ConstantsBlock = ConstantsBlock()
    grid: GridBlock = GridBlock()
    time: TimeBlock = TimeBlock()
    perturbation: PerturbationBlock = PerturbationBlock()
    experiment: ExperimentBlock = ExperimentBlock()

    def with_overrides(self, kind: Optional[ExperimentKind] = None, seed: Optional[int] = None) -> "ExperimentConfig":
        config = self
        if kind is not None:
            config = config.model_copy(update={"experiment": config.experiment.model_copy(update={"kind": kind})})
        if seed is not None:
            config = config.model_copy(
                update={"perturbation": config.perturbation.model_copy(update={"seed": seed})}
            )
        return config


class RunResult(BaseModel):
    kind: ExperimentKind
    run_dir: str
    exit_status: int
    checks: Dict[str, bool] = {}
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.exit_status == 0
