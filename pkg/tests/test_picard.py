#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import numpy as np
import pytest

from app.lab.exceptions import DomainException
from app.lab.physics.fields import FieldState, Frame, Grid
from app.lab.physics.picard import (
    heat_kernel_convolve,
    lower_bound_check,
    picard_iterate,
    picard_run,
    picard_vs_evolve_gap,
)
from app.lab.physics.solver import ImexStepper
from app.lab.utils.grid_helpers import integrate
from app.lab.utils.perturbations import gaussian_bump


@pytest.fixture()
def fixed_grid():
    return Grid(xi_min=-20.0, xi_max=20.0, n_points=161, frame=Frame.fixed)


@pytest.fixture()
def bumped_density(fixed_grid):
    n = 1.0 + gaussian_bump(fixed_grid.xi, 0.1, 2.0, 0.0)
    return FieldState(t=0.0, grid=fixed_grid, n=n, q=np.zeros(fixed_grid.n_points))


def test_heat_kernel_convolve(fixed_grid):
    xi, dx = fixed_grid.xi, fixed_grid.dx

    # TEST 1: Constants are reproduced
    assert np.allclose(heat_kernel_convolve(np.full(xi.shape, 2.5), 0.3, dx), 2.5, rtol=0.0, atol=1e-13)

    # TEST 2: Mass is kept and the peak drops
    bump = gaussian_bump(xi, 1.0, 1.0, 0.0)
    smoothed = heat_kernel_convolve(bump, 0.5, dx)
    assert smoothed.shape == bump.shape
    assert integrate(smoothed, dx) == pytest.approx(integrate(bump, dx), rel=1e-6)
    assert smoothed.max() < bump.max()

    # TEST 3: Only positive times
    with pytest.raises(DomainException):
        heat_kernel_convolve(bump, 0.0, dx)


def test_picard_iterate_rejects_bad_shapes(bumped_density):
    with pytest.raises(DomainException):
        picard_iterate(np.ones((1, 161)), np.ones((1, 161)), bumped_density, 0.1)
    with pytest.raises(DomainException):
        picard_iterate(np.ones((5, 160)), np.ones((5, 160)), bumped_density, 0.1)


def test_picard_run_differences_shrink(bumped_density):
    trace = picard_run(bumped_density, 0.5, 8)
    norms = trace.norms
    assert not trace.diverged
    assert list(norms["k"]) == list(range(1, 9))
    assert norms["diff_n_l2"].iloc[-1] < 0.05 * norms["diff_n_l2"].iloc[0]
    assert trace.min_n > 0.0
    assert trace.t_span == pytest.approx(0.5)

    with pytest.raises(DomainException):
        picard_run(bumped_density, 0.0, 8)


def test_picard_limit_is_the_fixed_frame_step(bumped_density):
    trace = picard_run(bumped_density, 0.5, 30)
    dt = float(trace.times[1] - trace.times[0])
    stepper = ImexStepper.fixed_frame(bumped_density)
    state = bumped_density
    for _ in range(len(trace.times) - 1):
        state = stepper.step(state, dt)

    report = picard_vs_evolve_gap(trace, state, 0.0, dt)
    assert report.gap < 1e-8
    assert report.passed

    # TEST 1: The times must agree
    with pytest.raises(DomainException):
        picard_vs_evolve_gap(trace, state.evolved(1.0, state.n, state.q), 0.0)


def test_lower_bound_on_a_flat_density(fixed_grid):
    q = gaussian_bump(fixed_grid.xi, 0.5, 2.0, 0.0)
    q[0] = q[-1] = 0.0
    probe = FieldState(t=0.0, grid=fixed_grid, n=np.ones(fixed_grid.n_points), q=q)
    traces = [picard_run(probe, t_span, 4) for t_span in (0.05, 0.1, 0.2)]

    report = lower_bound_check(traces, 1.0)
    assert report.half_bound_holds
    assert all(value < 1.0 for value in report.min_n)
    assert report.deficit_slope is not None
    assert report.slope_holds
    assert report.slope_evaluated
    assert report.passed

    # a single run leaves the slope unevaluated
    single = lower_bound_check(traces[0], 1.0)
    assert single.deficit_slope is None
    assert single.slope_holds is None
    assert not single.slope_evaluated
    assert single.half_bound_holds
    assert not single.passed

    # runs without a deficit leave it unevaluated too
    untouched = lower_bound_check(traces, 0.5)
    assert untouched.slope_holds is None
    assert not untouched.passed
