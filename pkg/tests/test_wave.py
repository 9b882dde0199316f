#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import numpy as np
import pytest

from app.lab.exceptions import DomainException, ResolutionException, TailException
from app.lab.physics.fields import Grid
from app.lab.physics.params import TheoremConstants, make_end_states, reflect_problem
from app.lab.physics.wave import (
    build_profile,
    exact_profile,
    profile_diagnostics,
    profile_pde_residual,
    profile_rhs,
    residual_ladder,
    wave_width,
    weight_function,
)
from app.lab.utils.grid_helpers import observed_order


def test_profile_rhs(strong_end_states):
    # TEST 1: Both end states are fixed points
    assert profile_rhs(2.0, strong_end_states) == 0.0
    assert profile_rhs(1.0, strong_end_states) == pytest.approx(0.0, abs=1e-15)

    # TEST 2: Steepest descent at the midpoint density
    assert profile_rhs(1.5, strong_end_states) == pytest.approx(-0.25)
    assert wave_width(strong_end_states) == pytest.approx(4.0)

    # TEST 3: Densities outside the shock range are rejected
    with pytest.raises(DomainException):
        profile_rhs(2.5, strong_end_states)


def test_build_profile_matches_closed_form(strong_profile):
    end = strong_profile.end
    assert strong_profile.grid.n_points == 601
    assert np.max(np.abs(strong_profile.n_tilde - exact_profile(strong_profile.grid.xi, end))) < 1e-7
    assert abs(strong_profile.n_tilde[0] - end.n_minus) < 1e-8
    assert abs(strong_profile.n_tilde[-1] - end.n_plus) < 1e-8
    assert strong_profile.q_tilde[0] == pytest.approx(end.q_minus, abs=1e-8)
    assert strong_profile.q_tilde[-1] == pytest.approx(end.q_plus, abs=1e-8)


def test_weight(strong_profile):
    xi = strong_profile.grid.xi
    assert weight_function(strong_profile, xi[0]) == pytest.approx(1.0, abs=1e-8)
    assert weight_function(strong_profile, xi[-1]) == pytest.approx(1.2, abs=1e-8)
    # the profile passes through the midpoint density at xi = 0
    assert weight_function(strong_profile, 0.0) == pytest.approx(1.1, abs=1e-12)
    # clamped outside the grid
    assert weight_function(strong_profile, 1e3) == weight_function(strong_profile, xi[-1])
    assert np.all(np.diff(strong_profile.a) >= 0.0)


def test_profile_diagnostics(strong_profile):
    diagnostics = profile_diagnostics(strong_profile)
    assert diagnostics.passed
    assert diagnostics.monotonicity_violations == 0
    assert diagnostics.weight_violations == 0
    assert diagnostics.min_n_tilde > 0.0
    # |n_tilde'| integrates to the shock strength
    assert diagnostics.n_tilde_prime_l1 == pytest.approx(1.0, rel=1e-3)


def test_build_profile_extends_the_domain(weak_end_states):
    constants = TheoremConstants(kappa=0.1, lambda_=0.2)
    profile = build_profile(weak_end_states, constants, Grid(xi_min=-120.0, xi_max=120.0, n_points=241))
    assert profile.grid.xi_max == pytest.approx(480.0)
    assert profile.grid.dx == pytest.approx(1.0)
    assert abs(profile.n_tilde[-1] - weak_end_states.n_plus) <= 1e-8


def test_build_profile_errors(weak_end_states):
    constants = TheoremConstants(kappa=0.1, lambda_=0.2)

    # TEST 1: Under-resolved wave
    with pytest.raises(ResolutionException):
        build_profile(weak_end_states, constants, Grid(xi_min=-480.0, xi_max=480.0, n_points=31))

    # TEST 2: Tails not reached without extensions
    with pytest.raises(TailException):
        build_profile(weak_end_states, constants, Grid(xi_min=-30.0, xi_max=30.0, n_points=61), max_extensions=0)

    # TEST 3: Non-canonical end states
    with pytest.raises(DomainException):
        build_profile(make_end_states(1.0, 2.0, 0.0), constants, Grid(xi_min=-30.0, xi_max=30.0, n_points=601))


def test_reflected_profile_mirrors_the_original():
    original = make_end_states(1.0, 2.0, 0.0)
    reflected = reflect_problem(original)
    grid = Grid(xi_min=-40.0, xi_max=40.0, n_points=801)
    profile = build_profile(reflected, TheoremConstants(kappa=0.1, lambda_=0.2), grid)
    # in the original orientation the profile rises from 1 to 2 as n_tilde(-xi)
    mirrored = profile.n_tilde[::-1]
    assert mirrored[0] == pytest.approx(original.n_minus, abs=1e-8)
    assert mirrored[-1] == pytest.approx(original.n_plus, abs=1e-8)
    assert np.max(np.abs(mirrored - exact_profile(-grid.xi, reflected))) < 1e-7


def test_pde_residual_is_second_order(strong_end_states):
    constants = TheoremConstants(kappa=0.1, lambda_=0.2)
    residuals = [
        profile_pde_residual(build_profile(strong_end_states, constants, Grid(xi_min=-30.0, xi_max=30.0, n_points=n)))
        for n in (301, 601, 1201)
    ]
    assert residuals[0] > residuals[1] > residuals[2]
    assert np.all(observed_order(residuals) > 1.8)


def test_residual_ladder_ends_at_a_fine_grid():
    # width 4 sigma / epsilon = 310, so the coarsest level keeps 40 points per width
    end = make_end_states(1.0, 0.99, 0.5)
    grid = Grid(xi_min=-2000.0, xi_max=2000.0, n_points=2049)
    ladder = residual_ladder(end, TheoremConstants(kappa=0.009, lambda_=0.1), grid)
    assert list(ladder["n_points"]) == [513, 1025, 2049]
    assert list(ladder.columns) == ["n_points", "dx", "residual", "order"]
    assert np.isnan(ladder["order"].iloc[0])
    assert (ladder["order"].iloc[1:] > 1.8).all()
    # well above the round-off level of the differences on the finest level
    assert ladder["residual"].iloc[-1] > 1e-12


def test_residual_ladder_starts_at_a_coarse_grid(strong_end_states):
    constants = TheoremConstants(kappa=0.1, lambda_=0.2)
    ladder = residual_ladder(strong_end_states, constants, Grid(xi_min=-30.0, xi_max=30.0, n_points=301))
    assert list(ladder["n_points"]) == [301, 601, 1201]
    assert (ladder["order"].iloc[1:] > 1.8).all()

    with pytest.raises(DomainException):
        residual_ladder(strong_end_states, constants, Grid(xi_min=-30.0, xi_max=30.0, n_points=301), levels=1)


def test_grid_coarsened():
    grid = Grid(xi_min=-10.0, xi_max=10.0, n_points=401)
    assert grid.coarsened(4).n_points == 101
    assert grid.coarsened(4).dx == pytest.approx(4.0 * grid.dx)
    assert grid.coarsened(1) == grid

    # TEST 1: Spacing that does not divide
    with pytest.raises(DomainException):
        grid.coarsened(3)

    # TEST 2: Fewer than three points left
    with pytest.raises(DomainException):
        Grid(xi_min=-1.0, xi_max=1.0, n_points=5).coarsened(4)
