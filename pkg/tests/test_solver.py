#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import numpy as np
import pytest

from app.lab.exceptions import DomainException, StabilityException
from app.lab.physics.fields import FieldState, Grid
from app.lab.physics.params import TheoremConstants, default_theorem_constants, make_end_states
from app.lab.physics.solver import (
    DiffusionSolver,
    ImexStepper,
    aligned_time_step,
    calibrate_tolerance,
    contraction_check,
    evolve,
    h1_diagnostics,
    reflection_gap,
    relative_entropy_residual,
    scaling_gap,
    shift_envelope_check,
    stable_time_step,
    stationary_drift,
    step_imex,
    uniqueness_check,
    w_residual,
)
from app.lab.physics.wave import build_profile, integrate_profile
from app.lab.utils.grid_helpers import observed_order


@pytest.fixture(scope="module")
def weak_evolution(weak_perturbed, weak_profile):
    return evolve(weak_perturbed, weak_profile, t_end=4.0, output_every=1.0)


@pytest.fixture(scope="module")
def reference_evolution(weak_profile):
    return evolve(weak_profile.as_state(), weak_profile, t_end=4.0, output_every=1.0)


def test_aligned_time_step():
    assert aligned_time_step(0.3, 1.0) == pytest.approx((0.25, 4))
    assert aligned_time_step(0.5, 1.0) == pytest.approx((0.5, 2))
    assert aligned_time_step(2.0, 1.0) == pytest.approx((1.0, 1))


def test_diffusion_solver_keeps_constants_and_boundaries():
    grid = Grid(xi_min=-5.0, xi_max=5.0, n_points=51)
    solver = DiffusionSolver(grid, nu=2.0)
    assert np.allclose(solver.solve(np.full(51, 3.0), 0.1), 3.0, rtol=0.0, atol=1e-14)

    spike = np.zeros(51)
    spike[25] = 1.0
    spike[0], spike[-1] = 0.5, 0.25
    smoothed = solver.solve(spike, 0.1)
    assert smoothed[0] == pytest.approx(0.5, abs=1e-15)
    assert smoothed[-1] == pytest.approx(0.25, abs=1e-15)
    assert 0.0 < smoothed[25] < 1.0


def test_step_constant_state_is_an_equilibrium():
    grid = Grid(xi_min=-10.0, xi_max=10.0, n_points=101)
    state = FieldState(t=0.0, grid=grid, n=np.full(101, 2.0), q=np.full(101, 0.5))
    stepper = ImexStepper(grid, 1.0, 1.0, (2.0, 2.0, 0.5, 0.5))
    stepped = stepper.step(state, 0.05)
    assert stepped.t == pytest.approx(0.05)
    assert np.allclose(stepped.n, 2.0, rtol=0.0, atol=1e-14)
    assert np.allclose(stepped.q, 0.5, rtol=0.0, atol=1e-14)

    # dt = 0 is the identity
    assert stepper.step(state, 0.0) is state


def test_step_rejects_unstable_steps(weak_profile):
    state = weak_profile.as_state()
    bound = ImexStepper.for_profile(weak_profile).max_stable_dt(state)
    assert stable_time_step(state, weak_profile) == pytest.approx(0.9 * bound)

    # TEST 1: Above the stability bound
    with pytest.raises(StabilityException) as e:
        step_imex(state, weak_profile, 1.01 * bound)
    assert "exceeds the stability bound" in e.value.detail

    # TEST 2: Negative steps
    with pytest.raises(DomainException):
        step_imex(state, weak_profile, -1.0)

    # TEST 3: The same rejection at the start of an evolution
    with pytest.raises(StabilityException):
        evolve(state, weak_profile, 1.0, 1.0, dt=10.0 * bound)


def test_stationary_drift_decreases_under_refinement(strong_end_states):
    constants = TheoremConstants(kappa=0.1, lambda_=0.2)
    coarse = Grid(xi_min=-30.0, xi_max=30.0, n_points=241)
    drifts = []
    for level in range(3):
        profile = build_profile(strong_end_states, constants, coarse.refined(2**level))
        drifts.append(stationary_drift(profile, t_end=0.5, dt=0.05 / 4**level))
    assert drifts[0] > drifts[1] > drifts[2]
    assert drifts[0] / drifts[2] > 8.0


def test_stationary_drift_is_second_order_for_a_weak_shock(weak_end_states):
    constants = default_theorem_constants(weak_end_states)
    coarse = Grid(xi_min=-480.0, xi_max=480.0, n_points=241)
    drifts = []
    for level in range(3):
        profile = build_profile(weak_end_states, constants, coarse.refined(2**level))
        drifts.append(stationary_drift(profile, t_end=1.0, dt=0.5 / 4**level))
    assert drifts[0] > drifts[1] > drifts[2] > 1e-12
    assert np.all(observed_order(drifts) > 1.8)


def test_evolve_records_every_output(weak_evolution, weak_perturbed):
    reports = weak_evolution.reports
    assert list(reports["t"]) == pytest.approx([0.0, 1.0, 2.0, 3.0, 4.0])
    assert reports["shift_X"].iloc[0] == 0.0
    assert weak_evolution.final.t == pytest.approx(4.0)
    assert weak_evolution.min_n > 0.0
    assert len(weak_evolution.states()) == 5
    assert np.array_equal(weak_evolution.states()[0].n, weak_perturbed.n)
    for column in ("re_weighted_shifted", "dissipation", "h1_norm", "cumulative_dissipation", "contraction_lhs"):
        assert np.all(np.isfinite(reports[column]))
    assert (np.diff(reports["cumulative_dissipation"]) >= 0.0).all()


def test_evolve_rejects_data_off_the_end_states(weak_profile, weak_perturbed):
    n = weak_perturbed.n.copy()
    n[-1] += 0.1
    with pytest.raises(DomainException):
        evolve(weak_perturbed.evolved(0.0, n, weak_perturbed.q), weak_profile, 1.0, 1.0)


def test_contraction_and_shift_envelope(weak_evolution, reference_evolution, weak_profile):
    dx = weak_profile.grid.dx
    c = calibrate_tolerance(reference_evolution.reports, dx, reference_evolution.dt)
    assert c >= 1.0

    report = contraction_check(weak_evolution.reports, dx, weak_evolution.dt, c)
    assert report.passed
    assert report.violations == 0

    envelope = shift_envelope_check(weak_evolution.reports, dx)
    assert envelope.passed

    # the unperturbed wave stays (numerically) at relative entropy zero
    assert reference_evolution.reports["re_weighted_shifted"].max() < 1e-6


def test_uniqueness_check(weak_perturbed, weak_profile):
    report = uniqueness_check(weak_perturbed, weak_profile, 1.0, 1.0)
    assert report.passed
    assert report.gap <= report.tolerance


def test_residual_series(weak_evolution, weak_profile):
    states = weak_evolution.states()

    entropy = relative_entropy_residual(states, weak_profile)
    assert list(entropy.columns) == ["t", "d_dt_entropy", "residual"]
    assert len(entropy) == len(states)

    w = w_residual(states, weak_profile.end.sigma)
    assert {"residual", "inequality_violations", "skipped_nodes"} <= set(w.columns)
    assert np.all(np.isfinite(w["residual"]))

    h1 = h1_diagnostics(states, weak_profile)
    assert np.isfinite(h1.to_numpy()).all()
    assert (np.diff(h1["cumulative_sqrt_n_diss"]) >= 0.0).all()

    with pytest.raises(DomainException):
        relative_entropy_residual(states[:2], weak_profile)


def test_w_residual_constant_state():
    grid = Grid(xi_min=-5.0, xi_max=5.0, n_points=51)
    states = [FieldState(t=t, grid=grid, n=np.full(51, 2.0), q=np.zeros(51)) for t in (0.0, 0.5, 1.0)]
    frame = w_residual(states, 1.0)
    # w = n and n w = n^2
    assert frame["residual"].max() < 1e-12
    assert frame["inequality_violations"].sum() == 0


def _wave_series(profile):
    return [FieldState(t=t, grid=profile.grid, n=profile.n_tilde, q=profile.q_tilde) for t in (0.0, 0.5, 1.0)]


def test_relative_entropy_residual_vanishes_on_the_wave(strong_end_states):
    constants = TheoremConstants(kappa=0.1, lambda_=0.2)
    residuals = []
    for n_points in (301, 601, 1201):
        profile = build_profile(strong_end_states, constants, Grid(xi_min=-30.0, xi_max=30.0, n_points=n_points))
        frame = relative_entropy_residual(_wave_series(profile), profile)
        assert np.abs(frame["d_dt_entropy"]).max() < 1e-14
        residuals.append(np.abs(frame["residual"]).max())
    # only the difference between n_xi and n_tilde' is left
    assert residuals[0] < 1e-3
    assert np.all(observed_order(residuals) > 1.8)


def test_w_residual_on_the_wave_is_second_order(strong_end_states):
    constants = TheoremConstants(kappa=0.1, lambda_=0.2)
    residuals = []
    for n_points in (301, 601, 1201):
        profile = build_profile(strong_end_states, constants, Grid(xi_min=-30.0, xi_max=30.0, n_points=n_points))
        frame = w_residual(_wave_series(profile), strong_end_states.sigma)
        assert frame["inequality_violations"].sum() == 0
        assert frame["skipped_nodes"].sum() == 0
        residuals.append(frame["residual"].max())
    assert residuals[0] > residuals[1] > residuals[2]
    assert np.all(observed_order(residuals) > 1.8)


def test_reflected_wave_is_integrated_independently(weak_end_states, weak_profile):
    reflected = make_end_states(weak_end_states.n_plus, weak_end_states.n_minus, -weak_end_states.q_plus)
    assert reflected.sigma == pytest.approx(-weak_end_states.sigma, rel=1e-12)
    assert reflected.q_plus == pytest.approx(-weak_end_states.q_minus, abs=1e-12)

    grid = weak_profile.grid.model_copy(
        update={"xi_min": -weak_profile.grid.xi_max, "xi_max": -weak_profile.grid.xi_min}
    )
    mirrored = integrate_profile(reflected, grid)
    assert np.allclose(mirrored[::-1], weak_profile.n_tilde, rtol=0.0, atol=1e-12)
    assert np.all(np.diff(mirrored) > 0.0)


def test_reflection_and_scaling_are_symmetries(weak_perturbed, weak_profile):
    reflection = reflection_gap(weak_perturbed, weak_profile, 1.0)
    assert reflection.passed
    assert reflection.gap < 1e-9

    for factor in (2.0, 0.5):
        scaling = scaling_gap(weak_perturbed, weak_profile, factor, 1.0)
        assert scaling.passed
        assert scaling.gap < 1e-9
        assert scaling.t == pytest.approx(1.0)

    with pytest.raises(DomainException):
        scaling_gap(weak_perturbed, weak_profile, -1.0, 1.0)
