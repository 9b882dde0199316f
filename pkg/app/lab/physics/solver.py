#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Moving-frame time evolution of (n, q) and the diagnostics computed along it.

In xi = x - sigma t the system reads

    n_t = sigma n_xi + (n q)_xi + nu n_xixi,        q_t = sigma q_xi + n_xi,

and the traveling wave is a steady state. One step of the IMEX scheme treats the diffusion implicitly
(a tridiagonal solve with the boundary nodes pinned) and every transport term explicitly with centered
differences. The q update carries a second-order correction in time on sigma q + n, which vanishes on
the profile and when sigma = 0.
"""

import math
from dataclasses import dataclass
from datetime import datetime
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog
import xarray as xr
from scipy.integrate import cumulative_trapezoid
from scipy.sparse import diags
from scipy.sparse.linalg import factorized

from app.core.base_model import ReportModel
from app.lab.exceptions import DomainException, StabilityException, VacuumException
from app.lab.physics import entropy
from app.lab.physics.fields import (
    VACUUM_FLOOR,
    FieldState,
    Grid,
    dataset_to_states,
    require_same_grid,
    states_to_dataset,
)
from app.lab.physics.params import EndStates, make_end_states, reflect_state, scale_solution
from app.lab.physics.wave import WaveProfile, build_profile, integrate_profile, wave_width
from app.lab.utils.grid_helpers import centered_gradient, integrate, l2_norm, second_difference

DEFAULT_SAFETY = 0.9
BOUNDARY_TOLERANCE = 1e-8
# tails of the profile used for the stationary drift; a few hundred ulps of O(1) densities
DRIFT_TAIL_TOLERANCE = 1e-13
TOLERANCE_FLOOR = 1.0
UNIQUENESS_FACTOR = 10.0

logger = structlog.get_logger(__name__)


class DiffusionSolver:
    """Factorised (I - dt nu D2) with Dirichlet rows at both ends; the last factorisation is kept."""

    def __init__(self, grid: Grid, nu: float = 1.0):
        self.grid = grid
        self.nu = nu
        self._dt: Optional[float] = None
        self._solve: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def _factor(self, dt: float):
        if dt != self._dt:
            size = self.grid.n_points
            ratio = dt * self.nu / self.grid.dx**2
            main = np.full(size, 1.0 + 2.0 * ratio)
            lower = np.full(size - 1, -ratio)
            upper = np.full(size - 1, -ratio)
            main[0] = main[-1] = 1.0
            upper[0] = 0.0
            lower[-1] = 0.0
            matrix = diags([lower, main, upper], offsets=[-1, 0, 1], format="csc")
            self._dt, self._solve = dt, factorized(matrix)
        return self._solve

    def solve(self, rhs: np.ndarray, dt: float) -> np.ndarray:
        """Backward-Euler diffusion of ``rhs``; the boundary entries of ``rhs`` are kept as they are."""
        if dt == 0.0:
            return rhs.copy()
        return self._factor(dt)(rhs)


def _centered(values: np.ndarray, dx: float) -> np.ndarray:
    result = np.zeros_like(values)
    result[1:-1] = (values[2:] - values[:-2]) / (2.0 * dx)
    return result


class ImexStepper:
    """One-step map of the moving-frame system with pinned boundary values.

    Args:
        grid:       Computational grid
        sigma:      Frame speed; zero gives the fixed-frame system
        nu:         Viscosity
        boundary:   (n_left, n_right, q_left, q_right) held at the two boundary nodes
    """

    def __init__(self, grid: Grid, sigma: float, nu: float, boundary: Tuple[float, float, float, float]):
        self.grid = grid
        self.sigma = sigma
        self.nu = nu
        self.boundary = boundary
        self.diffusion = DiffusionSolver(grid, nu)

    @classmethod
    def for_profile(cls, profile: WaveProfile) -> "ImexStepper":
        end = profile.end
        return cls(profile.grid, end.sigma, end.nu, (end.n_minus, end.n_plus, end.q_minus, end.q_plus))

    @classmethod
    def fixed_frame(cls, state: FieldState, nu: float = 1.0) -> "ImexStepper":
        boundary = (state.n[0], state.n[-1], state.q[0], state.q[-1])
        return cls(state.grid, 0.0, nu, boundary)

    def max_stable_dt(self, state: FieldState) -> float:
        """Advective bound dx / (|sigma| + max|q| + max n), capped by 2 nu / (|sigma| + max|q|)^2.

        The cap keeps the explicit centered transport of n damped by the implicit diffusion at low
        wavenumbers, which the advective bound alone does not on coarse grids.
        """
        drift = abs(self.sigma) + float(np.max(np.abs(state.q)))
        speed = drift + float(np.max(state.n))
        bound = self.grid.dx / speed if speed > 0.0 else math.inf
        if drift > 0.0:
            bound = min(bound, 2.0 * self.nu / drift**2)
        return bound

    def step(self, state: FieldState, dt: float) -> FieldState:
        if dt < 0.0:
            raise DomainException(f"time step must be nonnegative, got {dt}")
        if dt == 0.0:
            return state
        bound = self.max_stable_dt(state)
        if dt > bound:
            raise StabilityException(f"dt={dt:.6g} exceeds the stability bound {bound:.6g} at t={state.t:.6g}")

        dx, sigma = self.grid.dx, self.sigma
        n_left, n_right, q_left, q_right = self.boundary
        n, q = state.n, state.q

        rhs = n + dt * (sigma * _centered(n, dx) + _centered(n * q, dx))
        rhs[0], rhs[-1] = n_left, n_right
        n_new = self.diffusion.solve(rhs, dt)

        potential = sigma * q + n_new
        q_new = (
            q
            + dt * _centered(potential, dx)
            + 0.5 * dt * dt * sigma * second_difference(potential, dx)
        )
        q_new[0], q_new[-1] = q_left, q_right

        new_state = state.evolved(state.t + dt, n_new, q_new)
        if new_state.min_n < VACUUM_FLOOR:
            raise VacuumException(
                f"min n = {new_state.min_n:.3e} below the vacuum floor at t={new_state.t:.6g}",
                snapshot=new_state,
            )
        return new_state


def step_imex(state: FieldState, profile: WaveProfile, dt: float) -> FieldState:
    require_same_grid(state.grid, profile.grid)
    return ImexStepper.for_profile(profile).step(state, dt)


def stable_time_step(state: FieldState, profile: WaveProfile, safety: float = DEFAULT_SAFETY) -> float:
    return safety * ImexStepper.for_profile(profile).max_stable_dt(state)


def aligned_time_step(dt: float, output_every: float) -> Tuple[float, int]:
    """Largest step not above ``dt`` that divides the output interval; returns it with the step count."""
    substeps = max(1, int(math.ceil(output_every / dt - 1e-12)))
    return output_every / substeps, substeps


@dataclass(frozen=True)
class Evolution:
    final: FieldState
    reports: pd.DataFrame
    snapshots: xr.Dataset
    dt: float
    min_n: float
    max_abs_q: float

    def states(self) -> List[FieldState]:
        return dataset_to_states(self.snapshots)


def perturbation_h1_norm(state: FieldState, profile: WaveProfile) -> float:
    dx = state.grid.dx
    dn = state.n - profile.n_tilde
    dq = state.q - profile.q_tilde
    squares = (
        l2_norm(dn, dx) ** 2
        + l2_norm(dq, dx) ** 2
        + l2_norm(centered_gradient(dn, dx), dx) ** 2
        + l2_norm(centered_gradient(dq, dx), dx) ** 2
    )
    return math.sqrt(squares)


def _mass_shift_guess(state: FieldState, profile: WaveProfile) -> float:
    # translating the profile by h moves -h epsilon of mass
    mass = integrate(state.n - profile.n_tilde, state.grid.dx)
    return -mass / profile.end.epsilon


def _check_boundary(state: FieldState, profile: WaveProfile):
    end = profile.end
    mismatch = max(
        abs(state.n[0] - end.n_minus),
        abs(state.n[-1] - end.n_plus),
        abs(state.q[0] - end.q_minus),
        abs(state.q[-1] - end.q_plus),
    )
    if mismatch >= BOUNDARY_TOLERANCE:
        raise DomainException(
            f"initial data do not decay to the end states at the grid boundary (mismatch {mismatch:.3g})"
        )


def evolve(
    initial: FieldState,
    profile: WaveProfile,
    t_end: float,
    output_every: float,
    dt: Optional[float] = None,
    safety: float = DEFAULT_SAFETY,
    track_shift: bool = True,
    shift_half_width: Optional[float] = None,
) -> Evolution:
    """Run the IMEX scheme from ``initial`` to ``t_end``.

    Args:
        initial:            Moving-frame initial data on the profile grid
        profile:            Traveling wave the reports are measured against
        t_end:              Final time
        output_every:       Report and snapshot cadence; the step is shrunk to divide it
        dt:                 Time step; defaults to ``safety`` times the stability bound of the data
        safety:             Fraction of the stability bound used for the default step
        track_shift:        Search the argmin shift at each output; shift zero otherwise
        shift_half_width:   Half width of the shift bracket around the previous shift

    Returns:
        The final state, one report row per output time and the stacked snapshots
    """
    require_same_grid(initial.grid, profile.grid)
    _check_boundary(initial, profile)
    if t_end <= 0.0 or output_every <= 0.0:
        raise DomainException("t_end and output_every must be positive")

    stepper = ImexStepper.for_profile(profile)
    bound = stepper.max_stable_dt(initial)
    if dt is None:
        dt = safety * bound
    elif dt > bound:
        raise StabilityException(f"dt={dt:.6g} exceeds the stability bound {bound:.6g}")
    dt, substeps = aligned_time_step(dt, output_every)
    outputs = int(round(t_end / output_every))
    half_width = shift_half_width or max(wave_width(profile.end), 8.0 * profile.grid.dx)
    sqrt_kappa = math.sqrt(profile.constants.kappa)

    logger.info(
        "Starting evolution",
        datetime=datetime.utcnow().isoformat(),
        t_end=t_end,
        dt=dt,
        n_points=initial.grid.n_points,
        track_shift=track_shift,
    )

    state = initial
    shift = 0.0
    cumulative = 0.0
    rows = []
    snapshots = [state]
    running_min, running_max_q = state.min_n, float(np.max(np.abs(state.q)))

    def record(current: FieldState, current_shift: float, value: Optional[float]):
        report = entropy.entropy_report(current, profile, current_shift, value)
        row = report.as_row()
        row.update(
            {
                "min_n": current.min_n,
                "max_abs_q": float(np.max(np.abs(current.q))),
                "h1_norm": perturbation_h1_norm(current, profile),
                "cumulative_dissipation": cumulative,
                "contraction_lhs": report.re_weighted_shifted + sqrt_kappa * cumulative,
            }
        )
        rows.append(row)

    # X(0) = 0
    record(state, 0.0, None)
    previous_rate = entropy.dissipation_integral(state, profile, shift)
    for _ in range(outputs):
        for _ in range(substeps):
            state = stepper.step(state, dt)
            rate = entropy.dissipation_integral(state, profile, shift)
            cumulative += 0.5 * dt * (previous_rate + rate)
            previous_rate = rate
        running_min = min(running_min, state.min_n)
        running_max_q = max(running_max_q, float(np.max(np.abs(state.q))))

        value = None
        if track_shift:
            center = shift if rows[-1]["t"] > 0.0 else _mass_shift_guess(state, profile)
            search = entropy.optimal_shift(state, profile, (center - half_width, center + half_width))
            shift, value = search.shift, search.value
        record(state, shift, value)
        snapshots.append(state)
        logger.debug("Output", t=state.t, shift=shift, min_n=state.min_n)

    logger.info(
        "Finished evolution",
        datetime=datetime.utcnow().isoformat(),
        t=state.t,
        min_n=running_min,
        max_abs_q=running_max_q,
    )
    return Evolution(
        final=state,
        reports=pd.DataFrame(rows),
        snapshots=states_to_dataset(snapshots),
        dt=dt,
        min_n=running_min,
        max_abs_q=running_max_q,
    )


def stationary_drift(profile: WaveProfile, t_end: float = 1.0, dt: Optional[float] = None) -> float:
    """L2 drift of the profile per unit time when it is evolved as initial data.

    The profile is rebuilt at the same spacing with its tails within DRIFT_TAIL_TOLERANCE of the pinned
    end states; the domain may grow. The drift is measured from that pinned initial state.
    """
    profile = build_profile(profile.end, profile.constants, profile.grid, tail_tolerance=DRIFT_TAIL_TOLERANCE)
    initial = profile.as_state()
    stepper = ImexStepper.for_profile(profile)
    dt = dt or DEFAULT_SAFETY * stepper.max_stable_dt(initial)
    dt, steps = aligned_time_step(dt, t_end)
    state = initial
    for _ in range(steps):
        state = stepper.step(state, dt)
    return l2_norm(state.n - initial.n, profile.grid.dx) / t_end


def _times(states: Sequence[FieldState]) -> np.ndarray:
    if len(states) < 3:
        raise DomainException("at least three snapshots are needed for a time derivative")
    return np.array([state.t for state in states])


def relative_entropy_residual(states: Sequence[FieldState], profile: WaveProfile) -> pd.DataFrame:
    """Integrated relative-entropy balance along a snapshot series.

    The balance d/dt int eta + int n_xi^2/n - int n_xi n_tilde'/n_tilde + int ((n - n_tilde)/n_tilde) n_tilde''
    - int (n_tilde'/n_tilde)(n - n_tilde)(q - q_tilde) = 0 holds for decaying perturbations; the time
    derivative is taken by second-order differences of the snapshot series, so snapshots should be
    taken every step when the residual is refined.
    """
    times = _times(states)
    dx = profile.grid.dx
    n_t, n_tp, n_tpp, q_t = profile.n_tilde, profile.n_tilde_prime, profile.n_tilde_second, profile.q_tilde

    energies = np.array([entropy.plain_relative_entropy(state, profile) for state in states])
    rate = np.gradient(energies, times)
    rows = []
    for index, state in enumerate(states):
        n_xi = centered_gradient(state.n, dx)
        sources = (
            integrate(n_xi**2 / state.n, dx)
            - integrate(n_xi * n_tp / n_t, dx)
            + integrate((state.n - n_t) / n_t * n_tpp, dx)
            - integrate(n_tp / n_t * (state.n - n_t) * (state.q - q_t), dx)
        )
        rows.append({"t": state.t, "d_dt_entropy": rate[index], "residual": rate[index] + sources})
    return pd.DataFrame(rows)


def w_residual(states: Sequence[FieldState], sigma: float) -> pd.DataFrame:
    """Balance of w = n - q_xi, which in the moving frame obeys w_t - sigma w_xi + n w = n^2 + q n_xi.

    The inequality |w|_t - sigma |w|_xi <= n^2 + |q n_xi| is checked at interior nodes where w keeps
    its sign over the stencil, with the local balance residual as tolerance; sign changes are counted
    as skipped nodes.
    """
    times = _times(states)
    dx = states[0].grid.dx
    w = np.stack([state.n - centered_gradient(state.q, dx) for state in states])
    w_dt = np.gradient(w, times, axis=0)
    abs_dt = np.gradient(np.abs(w), times, axis=0)

    rows = []
    for index, state in enumerate(states):
        inner = slice(2, -2)
        n_xi = centered_gradient(state.n, dx)
        w_xi = centered_gradient(w[index], dx)
        balance = w_dt[index] - sigma * w_xi + state.n * w[index] - state.n**2 - state.q * n_xi
        lhs = abs_dt[index] - sigma * centered_gradient(np.abs(w[index]), dx)
        rhs = state.n**2 + np.abs(state.q * n_xi)

        window = w[max(index - 1, 0) : index + 2]
        positive = np.all(window > 0.0, axis=0)
        negative = np.all(window < 0.0, axis=0)
        # nodes 1..N-2 whose three-point stencil keeps one sign
        smooth = (positive[:-2] & positive[1:-1] & positive[2:]) | (
            negative[:-2] & negative[1:-1] & negative[2:]
        )
        violated = (lhs[inner] > rhs[inner] + np.abs(balance[inner]) + 1e-12) & smooth[1:-1]
        rows.append(
            {
                "t": state.t,
                "residual": float(np.max(np.abs(balance[inner]))),
                "inequality_violations": int(np.count_nonzero(violated)),
                "skipped_nodes": int(np.count_nonzero(~smooth[1:-1])),
            }
        )
    return pd.DataFrame(rows)


def h1_diagnostics(states: Sequence[FieldState], profile: WaveProfile) -> pd.DataFrame:
    dx = profile.grid.dx
    times = np.array([state.t for state in states])
    second = np.array([l2_norm(second_difference(state.n, dx)[1:-1], dx) ** 2 for state in states])
    sqrt_diss = np.array([entropy.sqrt_n_dissipation(state) for state in states])
    cumulative = (
        cumulative_trapezoid(second, times, initial=0.0) if len(states) > 1 else np.zeros(1)
    )
    cumulative_sqrt = (
        cumulative_trapezoid(sqrt_diss, times, initial=0.0) if len(states) > 1 else np.zeros(1)
    )
    return pd.DataFrame(
        {
            "t": times,
            "dn_l2": [l2_norm(centered_gradient(state.n, dx), dx) for state in states],
            "dq_l2": [l2_norm(centered_gradient(state.q, dx), dx) for state in states],
            "cumulative_d2n_l2": cumulative,
            "h1_perturbation": [perturbation_h1_norm(state, profile) for state in states],
            "cumulative_sqrt_n_diss": cumulative_sqrt,
        }
    )


class ContractionReport(ReportModel):
    tolerance_constant: float
    dx: float
    dt: float
    initial_value: float
    worst_margin: float
    violations: int
    passed: bool


class ShiftEnvelopeReport(ReportModel):
    constant: float
    violations: int
    max_abs_shift: float
    passed: bool


class UniquenessReport(ReportModel):
    dt: float
    gap: float
    tolerance: float
    passed: bool


def calibrate_tolerance(reference: pd.DataFrame, dx: float, dt: float) -> float:
    """Tolerance constant c from an unperturbed run: the smallest c covering its drift, at least 1."""
    rows = reference[reference["t"] > 0.0]
    if rows.empty:
        return TOLERANCE_FLOOR
    excess = rows["contraction_lhs"] - float(reference["re_weighted_shifted"].iloc[0])
    needed = float((excess / ((dx**2 + dt) * rows["t"])).max())
    return max(needed, TOLERANCE_FLOOR)


def contraction_check(reports: pd.DataFrame, dx: float, dt: float, c: float) -> ContractionReport:
    """Shifted weighted entropy plus sqrt(kappa) times the cumulative dissipation never exceeds the start."""
    initial = float(reports["re_weighted_shifted"].iloc[0])
    allowance = initial + c * (dx**2 + dt) * reports["t"]
    margin = allowance - reports["contraction_lhs"]
    violations = int((margin < 0.0).sum())
    return ContractionReport(
        tolerance_constant=c,
        dx=dx,
        dt=dt,
        initial_value=initial,
        worst_margin=float(margin.min()),
        violations=violations,
        passed=violations == 0,
    )


def shift_envelope_check(reports: pd.DataFrame, dx: float) -> ShiftEnvelopeReport:
    """|X(t)| <= C (t + 1) with C fitted on the first half of the outputs and doubled."""
    t = reports["t"].to_numpy()
    shift = np.abs(reports["shift_X"].to_numpy())
    half = max(len(t) // 2, 1)
    constant = float(np.max(shift[:half] / (t[:half] + 1.0)))
    envelope = 2.0 * constant * (t + 1.0) + dx
    violations = int(np.count_nonzero(shift > envelope))
    return ShiftEnvelopeReport(
        constant=constant,
        violations=violations,
        max_abs_shift=float(shift.max()),
        passed=violations == 0,
    )


def uniqueness_check(
    initial: FieldState, profile: WaveProfile, t_end: float, output_every: float, dt: Optional[float] = None
) -> UniquenessReport:
    """Evolve the same data at dt and dt/2 and compare the snapshots."""
    coarse = evolve(initial, profile, t_end, output_every, dt=dt, track_shift=False)
    fine = evolve(initial, profile, t_end, output_every, dt=0.5 * coarse.dt, track_shift=False)
    dx = profile.grid.dx
    gap = max(
        l2_norm(first.n - second.n, dx) + l2_norm(first.q - second.q, dx)
        for first, second in zip(coarse.states(), fine.states())
    )
    tolerance = UNIQUENESS_FACTOR * (2.0 * dx**2 + 1.5 * coarse.dt) * max(t_end, 1.0)
    return UniquenessReport(dt=coarse.dt, gap=gap, tolerance=tolerance, passed=gap <= tolerance)



class TransformReport(ReportModel):
    transform: str
    t: float
    gap: float
    tolerance: float
    passed: bool


def _advance(stepper: ImexStepper, state: FieldState, dt: float, steps: int) -> FieldState:
    for _ in range(steps):
        state = stepper.step(state, dt)
    return state


def _horizon_step(initial: FieldState, profile: WaveProfile, t_end: float, dt: Optional[float]) -> Tuple[float, int]:
    if t_end <= 0.0:
        raise DomainException(f"t_end must be positive, got {t_end}")
    stepper = ImexStepper.for_profile(profile)
    dt = dt or DEFAULT_SAFETY * stepper.max_stable_dt(initial)
    return aligned_time_step(dt, t_end)


def _wave_state(end: EndStates, grid: Grid) -> FieldState:
    n = integrate_profile(end, grid)
    return FieldState(t=0.0, grid=grid, n=n, q=end.q_of_density(n))


def _perturbation(initial: FieldState, profile: WaveProfile) -> FieldState:
    return initial.evolved(initial.t, initial.n - profile.n_tilde, initial.q - profile.q_tilde)


def reflection_gap(
    initial: FieldState, profile: WaveProfile, t_end: float, dt: Optional[float] = None
) -> TransformReport:
    """Evolve the data and their mirror image (n(-xi), -q(-xi)) with -sigma; compare after reflecting back.

    The mirrored run gets its own end states from the Rankine-Hugoniot conditions and its own wave,
    integrated on the mirrored grid; only the perturbation is carried over by reflection.
    """
    require_same_grid(initial.grid, profile.grid)
    dt, steps = _horizon_step(initial, profile, t_end, dt)
    end = profile.end
    canonical = _advance(ImexStepper.for_profile(profile), initial, dt, steps)

    reflected = make_end_states(end.n_plus, end.n_minus, -end.q_plus, end.nu)
    bump = reflect_state(_perturbation(initial, profile))
    wave = _wave_state(reflected, bump.grid)
    mirrored = wave.evolved(initial.t, wave.n + bump.n, wave.q + bump.q)
    stepper = ImexStepper(
        mirrored.grid,
        reflected.sigma,
        reflected.nu,
        (reflected.n_minus, reflected.n_plus, reflected.q_minus, reflected.q_plus),
    )
    back = reflect_state(_advance(stepper, mirrored, dt, steps))

    dx = profile.grid.dx
    gap = l2_norm(back.n - canonical.n, dx) + l2_norm(back.q - canonical.q, dx)
    tolerance = UNIQUENESS_FACTOR * (dx**2 + dt)
    return TransformReport(transform="reflection", t=canonical.t, gap=gap, tolerance=tolerance, passed=gap <= tolerance)


def scaling_gap(
    initial: FieldState, profile: WaveProfile, factor: float, t_end: float, dt: Optional[float] = None
) -> TransformReport:
    """Run the data in the system with viscosity ``factor`` times larger on a grid and step stretched
    by ``factor``; map the result back with ``scale_solution`` and compare.

    The stretched run integrates its own wave for the larger viscosity; the perturbation keeps its
    nodal values on the stretched nodes.
    """
    if factor <= 0.0:
        raise DomainException(f"scaling factor must be positive, got {factor}")
    require_same_grid(initial.grid, profile.grid)
    dt, steps = _horizon_step(initial, profile, t_end, dt)
    end = profile.end
    baseline = _advance(ImexStepper.for_profile(profile), initial, dt, steps)

    viscous = make_end_states(end.n_minus, end.n_plus, end.q_minus, factor * end.nu)
    grid = profile.grid.model_copy(
        update={"xi_min": factor * profile.grid.xi_min, "xi_max": factor * profile.grid.xi_max}
    )
    bump = _perturbation(initial, profile)
    wave = _wave_state(viscous, grid)
    stretched = wave.evolved(0.0, wave.n + bump.n, wave.q + bump.q)
    stepper = ImexStepper(
        grid, viscous.sigma, viscous.nu, (viscous.n_minus, viscous.n_plus, viscous.q_minus, viscous.q_plus)
    )
    mapped = scale_solution(factor, _advance(stepper, stretched, factor * dt, steps))

    dx = profile.grid.dx
    gap = l2_norm(mapped.n - baseline.n, dx) + l2_norm(mapped.q - baseline.q, dx)
    tolerance = UNIQUENESS_FACTOR * (dx**2 + dt)
    return TransformReport(
        transform=f"viscosity x{factor:g}", t=mapped.t, gap=gap, tolerance=tolerance, passed=gap <= tolerance
    )
