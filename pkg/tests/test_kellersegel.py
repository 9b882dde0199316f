#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import numpy as np
import pytest

from app.lab.exceptions import DomainException, VacuumException
from app.lab.physics.fields import Frame, Grid, KSState
from app.lab.physics.kellersegel import (
    cole_hopf_forward,
    cole_hopf_inverse,
    equivalence_check,
    ks_compare,
    ks_evolve,
    matched_states,
    refinement_time_step,
    summarize_equivalence,
)
from app.lab.utils.grid_helpers import observed_order
from app.lab.utils.perturbations import gaussian_bump


@pytest.fixture()
def fixed_grid():
    return Grid(xi_min=-20.0, xi_max=20.0, n_points=161, frame=Frame.fixed)


def test_cole_hopf_forward(fixed_grid):
    xi, dx = fixed_grid.xi, fixed_grid.dx

    # TEST 1: c = exp(-x) gives q = 1
    assert np.allclose(cole_hopf_forward(np.exp(-xi), dx), 1.0, rtol=0.0, atol=1e-12)

    # TEST 2: A constant concentration carries no flux
    assert np.allclose(cole_hopf_forward(np.full(xi.shape, 3.0), dx), 0.0, rtol=0.0, atol=1e-15)

    # TEST 3: Nonpositive concentrations
    c = np.ones_like(xi)
    c[10] = 0.0
    with pytest.raises(DomainException):
        cole_hopf_forward(c, dx)


def test_cole_hopf_inverse(fixed_grid):
    xi, dx = fixed_grid.xi, fixed_grid.dx
    c = cole_hopf_inverse(np.ones_like(xi), 2.0, 5, dx)
    assert c[5] == 2.0
    assert np.allclose(c, 2.0 * np.exp(-(xi - xi[5])), rtol=1e-12, atol=0.0)

    with pytest.raises(DomainException):
        cole_hopf_inverse(np.ones_like(xi), 0.0, 5, dx)


def test_matched_states_anchor_at_the_centre(fixed_grid):
    n0 = np.full(fixed_grid.n_points, 1.5)
    q0 = gaussian_bump(fixed_grid.xi, 0.3, 2.0, 0.0)
    ks, nq = matched_states(n0, q0, fixed_grid)
    assert ks.c[fixed_grid.n_points // 2] == 1.0
    assert np.array_equal(ks.n, nq.n)
    assert np.allclose(cole_hopf_forward(ks.c, fixed_grid.dx), nq.q, rtol=0.0, atol=1e-15)


def test_homogeneous_state_is_shared(fixed_grid):
    n0 = np.full(fixed_grid.n_points, 2.0)
    ks_series, nq_series, frame = ks_compare(n0, np.zeros(fixed_grid.n_points), fixed_grid, 1.0, 1.0, 0.5)
    assert len(ks_series) == len(nq_series) == 3
    assert list(frame["t"]) == pytest.approx([0.0, 0.5, 1.0])
    summary = summarize_equivalence(frame)
    assert summary.max_residual < 1e-10
    # c decays like exp(-n t)
    assert summary.min_c == pytest.approx(np.exp(-2.0), rel=1e-2)


def test_equivalence_converges_under_refinement(fixed_grid):
    residuals = []
    for level in range(3):
        grid = fixed_grid.refined(2**level)
        n0 = 1.0 + gaussian_bump(grid.xi, 0.2, 2.0, 0.0)
        q0 = gaussian_bump(grid.xi, 0.3, 2.0, 0.0)
        _, _, frame = ks_compare(n0, q0, grid, 1.0, 0.5, dt=0.01 / 4**level)
        residuals.append(frame["residual"].iloc[-1])
    assert residuals[0] > residuals[1] > residuals[2]
    assert np.all(observed_order(residuals) > 1.6)


def test_ks_evolve_rejections(fixed_grid):
    state = KSState(t=0.0, grid=fixed_grid, n=np.ones(fixed_grid.n_points), c=np.ones(fixed_grid.n_points))
    with pytest.raises(DomainException):
        ks_evolve(state, 0.0, 1.0)
    with pytest.raises(DomainException):
        ks_evolve(state, 1.0, -1.0)
    with pytest.raises(DomainException):
        equivalence_check([state], [])


def test_refinement_time_step():
    n0 = np.array([1.0, 2.5, 1.0])

    # TEST 1: the step is capped by the largest density
    assert refinement_time_step(0.1, n0, 0.5) == pytest.approx(0.025)

    # TEST 2: A smaller step is only aligned to the interval
    assert refinement_time_step(0.01, n0, 0.5) == pytest.approx(0.01)
    assert refinement_time_step(0.3, np.ones(3), 0.5) == pytest.approx(0.0625)

    # TEST 3: Nonpositive steps and intervals
    with pytest.raises(DomainException):
        refinement_time_step(0.0, n0, 0.5)
    with pytest.raises(DomainException):
        refinement_time_step(0.1, n0, -1.0)


def test_ks_evolve_stops_at_the_vacuum_floor(fixed_grid):
    state = KSState(t=0.0, grid=fixed_grid, n=np.full(fixed_grid.n_points, 1e-13), c=np.ones(fixed_grid.n_points))
    with pytest.raises(VacuumException) as e:
        ks_evolve(state, 1.0, 1.0, dt=0.1)
    assert e.value.snapshot is state
