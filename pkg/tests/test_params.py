#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import math

import numpy as np
import pytest

from app.lab.exceptions import DomainException
from app.lab.physics.fields import FieldState, Grid
from app.lab.physics.params import (
    TheoremConstants,
    assess_end_states,
    canonicalize,
    check_theorem_constants,
    compute_q_plus,
    compute_sigma,
    default_theorem_constants,
    make_end_states,
    rankine_hugoniot_residuals,
    rankine_hugoniot_sweep,
    reflect_problem,
    reflect_state,
    scale_solution,
    validate_end_states,
)


@pytest.mark.parametrize(
    "n_minus, n_plus, q_minus, expected",
    [(2.0, 1.0, 0.0, 1.0), (1.0, 2.0, 0.0, -math.sqrt(2.0)), (1.0, 0.99, 0.5, 0.775914)],
)
def test_compute_sigma(n_minus, n_plus, q_minus, expected):
    sigma = compute_sigma(n_minus, n_plus, q_minus)
    assert sigma == pytest.approx(expected, rel=1e-6)
    # sigma is a root of sigma^2 + q_minus sigma - n_plus
    assert sigma**2 + q_minus * sigma - n_plus == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("q_minus", [-5.0, -0.3, 0.0, 0.3, 5.0])
def test_compute_sigma_sign_follows_density_order(q_minus):
    assert compute_sigma(3.0, 0.5, q_minus) > 0.0
    assert compute_sigma(0.5, 3.0, q_minus) < 0.0


def test_compute_sigma_rejects_bad_densities():
    # TEST 1: Degenerate end states
    with pytest.raises(DomainException) as e:
        compute_sigma(1.0, 1.0, 0.0)
    assert "degenerate" in e.value.detail

    # TEST 2: Nonpositive density
    with pytest.raises(DomainException):
        compute_sigma(-1.0, 1.0, 0.0)


def test_compute_q_plus():
    assert compute_q_plus(2.0, 1.0, 0.0, 1.0) == pytest.approx(1.0)

    sigma = compute_sigma(1.0, 0.99, 0.5)
    q_plus = compute_q_plus(1.0, 0.99, 0.5, sigma)
    assert q_plus == pytest.approx(0.5 + 0.01 / sigma, rel=1e-12)
    assert q_plus == pytest.approx(0.512892, abs=1e-5)

    with pytest.raises(DomainException):
        compute_q_plus(1.0, 1.0, 0.0, 1.0)
    with pytest.raises(DomainException):
        compute_q_plus(2.0, 1.0, 0.0, 0.0)


def test_make_end_states():
    end = make_end_states(2.0, 1.0, 0.0)
    assert end.sigma == pytest.approx(1.0)
    assert end.q_plus == pytest.approx(1.0)
    assert end.epsilon == pytest.approx(1.0)
    assert end.is_canonical
    assert max(rankine_hugoniot_residuals(end)) < 1e-12

    with pytest.raises(DomainException):
        make_end_states(2.0, 1.0, 0.0, nu=0.0)


def test_validate_end_states():
    # TEST 1: Canonical case
    report = validate_end_states(make_end_states(2.0, 1.0, 0.0))
    assert report.passed
    assert report.case == "n_minus>n_plus"

    # TEST 2: Reversed densities are admissible and flagged for reflection
    report = validate_end_states(make_end_states(1.0, 2.0, 0.0))
    assert report.passed
    assert report.case == "n_minus<n_plus"
    assert any("reflection" in message for message in report.messages)

    # TEST 3: Degenerate input gives a failing report instead of an exception
    report = assess_end_states(2.0, 2.0, 0.0)
    assert not report.passed
    assert "distinct_densities" in report.failed


def test_theorem_window_flag():
    # epsilon = 0.5 leaves no room below min(n_minus/15, 1/8)
    report = validate_end_states(make_end_states(2.0, 1.5, 0.0))
    assert report.passed
    assert report.theorem_window_satisfiable is False
    assert validate_end_states(make_end_states(2.0, 1.95, 0.0)).theorem_window_satisfiable


def test_check_theorem_constants():
    constants = TheoremConstants(kappa=0.1, lambda_=0.2)

    # TEST 1: Inside the window
    assert check_theorem_constants(make_end_states(2.0, 1.95, 0.0), constants).passed

    # TEST 2: kappa above 1/8
    report = check_theorem_constants(make_end_states(2.0, 1.95, 0.0), TheoremConstants(kappa=0.2, lambda_=0.2))
    assert not report.passed
    assert "kappa < min(n_minus/15, 1/8)" in report.failed

    # TEST 3: epsilon / sqrt(kappa) ~ 0.285 above lambda
    report = check_theorem_constants(make_end_states(2.0, 1.91, 0.0), constants)
    assert report.failed == ["epsilon/sqrt(kappa) < lambda"]


def test_default_theorem_constants_fill_the_window():
    end = make_end_states(2.0, 1.95, 0.0)
    constants = default_theorem_constants(end)
    assert constants.kappa == pytest.approx(0.9 / 8.0)
    assert constants.lambda_ == pytest.approx(math.sqrt(0.05))
    assert check_theorem_constants(end, constants).passed


def test_reflect_problem():
    end = make_end_states(1.0, 2.0, 0.0)
    reflected = reflect_problem(end)
    assert reflected.is_canonical
    assert reflected.sigma == pytest.approx(math.sqrt(2.0))
    assert reflected.n_minus == 2.0
    assert max(rankine_hugoniot_residuals(reflected)) < 1e-12

    # Involution
    assert reflect_problem(reflected, inverse=True) == end

    with pytest.raises(DomainException):
        reflect_problem(make_end_states(2.0, 1.0, 0.0))
    with pytest.raises(DomainException):
        reflect_problem(end, inverse=True)


def test_canonicalize():
    end = make_end_states(2.0, 1.0, 0.0)
    assert canonicalize(end) == (end, False)
    reflected, flag = canonicalize(make_end_states(1.0, 2.0, 0.0))
    assert flag
    assert reflected.is_canonical


def test_reflect_state():
    grid = Grid(xi_min=-5.0, xi_max=5.0, n_points=11)
    state = FieldState(t=0.5, grid=grid, n=np.linspace(1.0, 2.0, 11), q=np.linspace(-1.0, 0.0, 11))
    mirrored = reflect_state(state)
    assert mirrored.n[0] == 2.0
    assert mirrored.q[0] == 0.0
    assert mirrored.q[-1] == 1.0
    assert np.array_equal(reflect_state(mirrored).n, state.n)


def test_scale_solution():
    grid = Grid(xi_min=-4.0, xi_max=4.0, n_points=9)
    state = FieldState(t=2.0, grid=grid, n=np.linspace(1.0, 2.0, 9), q=np.linspace(0.0, 1.0, 9))

    # TEST 1: nu = 1 is the identity
    same = scale_solution(1.0, state)
    assert same.t == state.t
    assert same.grid == state.grid
    assert np.array_equal(same.n, state.n)

    # TEST 2: Time and space contract by nu, values are kept
    scaled = scale_solution(2.0, state)
    assert scaled.t == pytest.approx(1.0)
    assert scaled.grid.xi_max == pytest.approx(2.0)
    assert np.array_equal(scaled.q, state.q)

    # TEST 3: Constant states stay constant on any target grid
    constant = FieldState(t=0.0, grid=grid, n=np.full(9, 2.0), q=np.full(9, -0.5))
    target = Grid(xi_min=-1.0, xi_max=1.0, n_points=5)
    moved = scale_solution(3.0, constant, target)
    assert np.allclose(moved.n, 2.0)
    assert np.allclose(moved.q, -0.5)

    with pytest.raises(DomainException):
        scale_solution(0.0, state)


@pytest.mark.parametrize("seed", [0, 2, 3])
def test_rankine_hugoniot_sweep(seed):
    report = rankine_hugoniot_sweep(samples=10_000, seed=seed)
    assert report.samples == 10_000
    assert report.passed
    assert report.max_mass_residual < 1e-12
    assert report.max_flux_residual < 1e-12
    assert report.sign_case_mismatches == 0


def test_rankine_hugoniot_near_equal_densities():
    # the jump in q is O(epsilon) while q itself is O(1)
    end = make_end_states(0.01860, 0.01875, 4.064)
    assert max(rankine_hugoniot_residuals(end)) < 1e-12
    assert not end.is_canonical
