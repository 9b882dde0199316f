#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Initial perturbations of the traveling wave.

Gaussian and square bumps carry mass (no mean-zero condition); the random kind is a seeded sum of
Fourier modes under a Gaussian envelope. Every shape is smooth and negligible at the grid boundary.
"""

import numpy as np

from app.lab.api_models import PerturbationBlock, PerturbationKind, PerturbationTarget
from app.lab.exceptions import DomainException
from app.lab.physics.fields import FieldState
from app.lab.physics.wave import WaveProfile

EDGE_FRACTION = 0.1
ENVELOPE_FACTOR = 4.0


def gaussian_bump(xi: np.ndarray, amplitude: float, width: float, center: float) -> np.ndarray:
    return amplitude * np.exp(-0.5 * ((xi - center) / width) ** 2)


def square_bump(xi: np.ndarray, amplitude: float, width: float, center: float) -> np.ndarray:
    """Plateau of the given width with tanh edges one tenth of the width wide."""
    edge = EDGE_FRACTION * width
    left, right = center - 0.5 * width, center + 0.5 * width
    return 0.5 * amplitude * (np.tanh((xi - left) / edge) - np.tanh((xi - right) / edge))


def random_bump(
    xi: np.ndarray, amplitude: float, width: float, center: float, seed: int, modes: int = 8
) -> np.ndarray:
    """Seeded smooth noise scaled so that its sup equals |amplitude|."""
    rng = np.random.default_rng(seed)
    wavenumbers = np.arange(1, modes + 1) / width
    cosines = rng.standard_normal(modes)
    sines = rng.standard_normal(modes)
    phase = np.outer(xi - center, wavenumbers)
    noise = (np.cos(phase) @ cosines + np.sin(phase) @ sines) / np.sqrt(modes)
    shaped = noise * np.exp(-0.5 * ((xi - center) / (ENVELOPE_FACTOR * width)) ** 2)
    peak = np.max(np.abs(shaped))
    return abs(amplitude) * shaped / peak if peak > 0.0 else shaped


def perturbation_shape(xi: np.ndarray, block: PerturbationBlock) -> np.ndarray:
    if block.kind == PerturbationKind.none:
        return np.zeros_like(xi)
    if block.kind == PerturbationKind.gaussian:
        return gaussian_bump(xi, block.amplitude, block.width, block.center)
    if block.kind == PerturbationKind.square:
        return square_bump(xi, block.amplitude, block.width, block.center)
    return random_bump(xi, block.amplitude, block.width, block.center, block.seed, block.modes)


def perturbed_state(profile: WaveProfile, block: PerturbationBlock) -> FieldState:
    """Profile plus the perturbation on n or q, boundary nodes kept on the end states."""
    state = profile.as_state()
    bump = perturbation_shape(profile.grid.xi, block)
    bump[0] = bump[-1] = 0.0
    n, q = state.n.copy(), state.q.copy()
    if block.target == PerturbationTarget.n:
        n = n + bump
    else:
        q = q + bump
    if np.min(n) <= 0.0:
        raise DomainException(
            f"perturbation of amplitude {block.amplitude} makes the initial density nonpositive"
        )
    return state.evolved(0.0, n, q)
