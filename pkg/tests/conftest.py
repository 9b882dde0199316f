#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from pathlib import Path

import pytest

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
from app.lab.physics.fields import Grid
from app.lab.physics.params import TheoremConstants, default_theorem_constants, make_end_states
from app.lab.physics.wave import build_profile
from app.lab.utils.perturbations import perturbed_state


# A weak shock (epsilon = 0.05) inside the theorem window, coarse enough to evolve in a test:
# wave width 4 sigma / epsilon ~ 112, tails below 1e-8 at |xi| = 480.
@pytest.fixture(scope="session")
def weak_end_states():
    return make_end_states(2.0, 1.95, 0.0)


@pytest.fixture(scope="session")
def weak_grid():
    return Grid(xi_min=-480.0, xi_max=480.0, n_points=241)


@pytest.fixture(scope="session")
def weak_profile(weak_end_states, weak_grid):
    return build_profile(weak_end_states, default_theorem_constants(weak_end_states), weak_grid)


@pytest.fixture(scope="session")
def small_bump():
    return PerturbationBlock(kind=PerturbationKind.gaussian, amplitude=0.02, width=10.0, center=0.0)


@pytest.fixture(scope="session")
def weak_perturbed(weak_profile, small_bump):
    return perturbed_state(weak_profile, small_bump)


# A strong shock (sigma = 1, q_plus = 1, width 4) for profile and entropy checks on a fine grid.
@pytest.fixture(scope="session")
def strong_end_states():
    return make_end_states(2.0, 1.0, 0.0)


@pytest.fixture(scope="session")
def strong_profile(strong_end_states):
    grid = Grid(xi_min=-30.0, xi_max=30.0, n_points=601)
    return build_profile(strong_end_states, TheoremConstants(kappa=0.1, lambda_=0.2), grid)


@pytest.fixture()
def weak_config():
    return ExperimentConfig(
        end_states=EndStatesBlock(n_minus=2.0, n_plus=1.95, q_minus=0.0),
        grid=GridBlock(xi_min=-480.0, xi_max=480.0, n_points=241),
        time=TimeBlock(t_end=2.0, output_every=1.0),
        perturbation=PerturbationBlock(kind=PerturbationKind.gaussian, amplitude=0.02, width=10.0),
        experiment=ExperimentBlock(kind=ExperimentKind.wave, lemma_samples=20_000),
    )


@pytest.fixture()
def write_config(tmp_path):
    """Writes configuration text to a file and returns its path."""

    def _write(text: str, name: str = "experiment.ini") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture()
def weak_config_text():
    return (
        "# weak shock, coarse grid\n"
        "[end_states]\n"
        "n_minus = 2.0\n"
        "n_plus = 1.95\n"
        "q_minus = 0.0\n"
        "\n"
        "[grid]\n"
        "xi_min = -480\n"
        "xi_max = 480\n"
        "n_points = 241\n"
        "\n"
        "[time]\n"
        "t_end = 2.0\n"
        "output_every = 1.0\n"
        "\n"
        "[perturbation]\n"
        "kind = gaussian  # on n\n"
        "amplitude = 0.02\n"
        "width = 10\n"
        "\n"
        "[experiment]\n"
        "kind = wave\n"
    )
