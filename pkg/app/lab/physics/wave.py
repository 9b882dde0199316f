#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Traveling-wave profile and weight.

Eliminating q from the traveling ansatz and integrating the first equation once from minus infinity
gives the scalar profile equation

    nu n' = -sigma (n - n_minus) - (n q(n) - n_minus q_minus),    q(n) = q_minus - (n - n_minus) / sigma,

whose right-hand side factors as (n - n_minus)(n - n_plus) / sigma. The profile is marched with the
classical fourth-order one-step method from n(0) = (n_minus + n_plus) / 2 in both directions.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import pandas as pd
import structlog

from app.core.base_model import ReportModel
from app.lab.exceptions import DomainException, ResolutionException, TailException
from app.lab.physics.fields import FieldState, Grid
from app.lab.physics.params import EndStates, TheoremConstants
from app.lab.utils.grid_helpers import centered_gradient, l1_norm, observed_order, second_difference

TAIL_TOLERANCE = 1e-8
MIN_POINTS_PER_WIDTH = 8
MAX_EXTENSIONS = 8
# coarsest level of a residual ladder that may end at the working grid
ASYMPTOTIC_POINTS_PER_WIDTH = 32

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class WaveProfile:
    grid: Grid
    end: EndStates
    constants: TheoremConstants
    n_tilde: np.ndarray
    q_tilde: np.ndarray
    n_tilde_prime: np.ndarray
    a: np.ndarray

    @property
    def lambda_(self) -> float:
        return self.constants.lambda_

    @property
    def n_tilde_second(self) -> np.ndarray:
        return profile_second_derivative(self.n_tilde, self.end)

    @property
    def q_tilde_prime(self) -> np.ndarray:
        return -self.n_tilde_prime / self.end.sigma

    def as_state(self, t: float = 0.0) -> FieldState:
        """The profile itself as a moving-frame state, boundary nodes pinned to the end states."""
        n = self.n_tilde.copy()
        q = self.q_tilde.copy()
        n[0], n[-1] = self.end.n_minus, self.end.n_plus
        q[0], q[-1] = self.end.q_minus, self.end.q_plus
        return FieldState(t=t, grid=self.grid, n=n, q=q)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "xi": self.grid.xi,
                "n_tilde": self.n_tilde,
                "q_tilde": self.q_tilde,
                "n_tilde_prime": self.n_tilde_prime,
                "a": self.a,
            }
        )


class ProfileDiagnostics(ReportModel):
    min_n_tilde: float
    tail_deviation_minus: float
    tail_deviation_plus: float
    n_tilde_prime_l1: float
    n_tilde_prime_linf: float
    n_tilde_second_l1: float
    n_tilde_second_linf: float
    q_tilde_prime_l1: float
    q_tilde_prime_linf: float
    monotonicity_violations: int
    weight_violations: int
    weight_closeness: float
    weight_closeness_bound_holds: bool
    pde_residual: float

    @property
    def passed(self) -> bool:
        finite = all(
            math.isfinite(value)
            for value in (
                self.n_tilde_prime_l1,
                self.n_tilde_prime_linf,
                self.n_tilde_second_l1,
                self.n_tilde_second_linf,
                self.q_tilde_prime_l1,
                self.q_tilde_prime_linf,
            )
        )
        return (
            finite
            and self.min_n_tilde > 0.0
            and self.monotonicity_violations == 0
            and self.weight_violations == 0
            and max(self.tail_deviation_minus, self.tail_deviation_plus) <= TAIL_TOLERANCE
        )


def _profile_slope(end: EndStates) -> Callable[[float], float]:
    n_minus, n_plus, scale = end.n_minus, end.n_plus, end.nu * end.sigma

    def slope(value: float) -> float:
        return (value - n_minus) * (value - n_plus) / scale

    return slope


def profile_rhs(n_tilde_value, end: EndStates):
    """Slope of the profile at the given density value(s).

    Args:
        n_tilde_value:  A density (or array of densities) between the two end-state densities
        end:            The end states of the wave

    Returns:
        The derivative n_tilde' taken by the profile when it passes through that density
    """
    low, high = sorted((end.n_minus, end.n_plus))
    values = np.asarray(n_tilde_value, dtype=np.float64)
    if np.any(values < low) or np.any(values > high):
        raise DomainException(f"profile density must lie in [{low}, {high}]")
    result = (values - end.n_minus) * (values - end.n_plus) / (end.nu * end.sigma)
    return float(result) if result.ndim == 0 else result


def profile_second_derivative(n_tilde: np.ndarray, end: EndStates) -> np.ndarray:
    # chain rule on the factored slope
    slope = (n_tilde - end.n_minus) * (n_tilde - end.n_plus) / (end.nu * end.sigma)
    return (2.0 * n_tilde - end.n_minus - end.n_plus) * slope / (end.nu * end.sigma)


def exact_profile(xi: np.ndarray, end: EndStates) -> np.ndarray:
    """Closed-form profile centred at the midpoint density."""
    return end.mid_density - 0.5 * end.epsilon * np.tanh(
        end.epsilon * np.asarray(xi) / (2.0 * end.nu * end.sigma)
    )


def wave_width(end: EndStates) -> float:
    """Shock strength over the steepest slope of the profile."""
    return abs(end.epsilon) / abs(profile_rhs(end.mid_density, end))


def _rk4_step(slope: Callable[[float], float], value: float, h: float) -> float:
    k1 = slope(value)
    k2 = slope(value + 0.5 * h * k1)
    k3 = slope(value + 0.5 * h * k2)
    k4 = slope(value + h * k3)
    return value + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def integrate_profile(end: EndStates, grid: Grid) -> np.ndarray:
    """March the profile equation outward from xi = 0 on the nodes of the grid."""
    slope = _profile_slope(end)
    xi = grid.xi
    dx = grid.dx
    values = np.empty(grid.n_points)
    start = int(np.searchsorted(xi, 0.0))

    # partial steps from the centre onto the first node on each side
    values[start] = _rk4_step(slope, end.mid_density, xi[start])
    values[start - 1] = _rk4_step(slope, end.mid_density, xi[start - 1])
    for index in range(start + 1, grid.n_points):
        values[index] = _rk4_step(slope, values[index - 1], dx)
    for index in range(start - 2, -1, -1):
        values[index] = _rk4_step(slope, values[index + 1], -dx)
    return values


def build_profile(
    end: EndStates,
    tc: TheoremConstants,
    grid: Grid,
    tail_tolerance: float = TAIL_TOLERANCE,
    max_extensions: int = MAX_EXTENSIONS,
) -> WaveProfile:
    """Sample the traveling wave and its weight on a grid.

    The domain is doubled (at fixed spacing) until both tails are within the tail tolerance of the
    end states, so the returned profile may live on a larger grid than the one requested.

    Args:
        end:                Canonical end states (n_minus > n_plus, sigma > 0)
        tc:                 Theorem constants; lambda sets the weight amplitude
        grid:               Requested computational grid
        tail_tolerance:     Absolute tolerance on both endpoint deviations
        max_extensions:     How many domain doublings are allowed before giving up

    Returns:
        A WaveProfile satisfying the profile invariants
    """
    if not end.is_canonical:
        raise DomainException("profiles are built for canonical end states; reflect first")

    width = wave_width(end)
    if grid.dx > width / MIN_POINTS_PER_WIDTH:
        raise ResolutionException(
            f"dx={grid.dx:.4g} does not resolve the wave width {width:.4g} "
            f"(need at least {MIN_POINTS_PER_WIDTH} points per width)"
        )

    for extension in range(max_extensions + 1):
        n_tilde = integrate_profile(end, grid)
        deviation = max(abs(n_tilde[0] - end.n_minus), abs(n_tilde[-1] - end.n_plus))
        if deviation <= tail_tolerance:
            break
        if extension == max_extensions:
            raise TailException(
                f"tail deviation {deviation:.3g} exceeds {tail_tolerance:.1g} "
                f"on [{grid.xi_min}, {grid.xi_max}] after {max_extensions} extensions"
            )
        logger.debug(
            "Extending profile domain",
            tail_deviation=deviation,
            xi_min=2.0 * grid.xi_min,
            xi_max=2.0 * grid.xi_max,
        )
        grid = grid.extended()

    return WaveProfile(
        grid=grid,
        end=end,
        constants=tc,
        n_tilde=n_tilde,
        q_tilde=end.q_of_density(n_tilde),
        n_tilde_prime=profile_rhs(np.clip(n_tilde, end.n_plus, end.n_minus), end),
        a=1.0 + (tc.lambda_ / end.epsilon) * (end.n_minus - n_tilde),
    )


def weight_function(profile: WaveProfile, xi):
    """Weight a at arbitrary positions; clamped to the endpoint values outside the grid."""
    result = np.interp(xi, profile.grid.xi, profile.a)
    return float(result) if np.ndim(result) == 0 else result


def profile_pde_residual(profile: WaveProfile) -> float:
    """Max-norm of the finite-difference residual of the moving-frame system on the profile."""
    end, dx = profile.end, profile.grid.dx
    n, q = profile.n_tilde, profile.q_tilde
    density = (
        end.sigma * centered_gradient(n, dx)
        + centered_gradient(n * q, dx)
        + end.nu * second_difference(n, dx)
    )
    flux = end.sigma * centered_gradient(q, dx) + centered_gradient(n, dx)
    return float(np.max(np.abs(density[1:-1])) + np.max(np.abs(flux[1:-1])))


def residual_ladder(end: EndStates, tc: TheoremConstants, grid: Grid, levels: int = 3) -> pd.DataFrame:
    """PDE residual of freshly built profiles on grids that halve dx level by level.

    The ladder ends at the given grid when its coarsest level keeps ASYMPTOTIC_POINTS_PER_WIDTH points
    per wave width, and starts there otherwise.
    """
    if levels < 2:
        raise DomainException(f"a residual ladder needs at least 2 levels, got {levels}")
    top = 2 ** (levels - 1)
    coarse_enough = (grid.n_points - 1) % top == 0 and (grid.n_points - 1) // top >= 2
    if coarse_enough and grid.coarsened(top).dx <= wave_width(end) / ASYMPTOTIC_POINTS_PER_WIDTH:
        grids = [grid.coarsened(2**level) for level in reversed(range(levels))]
    else:
        grids = [grid.refined(2**level) for level in range(levels)]

    profiles = [build_profile(end, tc, level_grid) for level_grid in grids]
    residuals = [profile_pde_residual(profile) for profile in profiles]
    return pd.DataFrame(
        {
            "n_points": [profile.grid.n_points for profile in profiles],
            "dx": [profile.grid.dx for profile in profiles],
            "residual": residuals,
            "order": [np.nan, *observed_order(residuals)],
        }
    )


def _resolved_steps(values: np.ndarray, slopes: np.ndarray, dx: float) -> np.ndarray:
    # a step whose exact increment is within a few ulps of the values may round to no change
    resolution = 4.0 * np.finfo(float).eps * float(np.max(np.abs(values)))
    return np.minimum(np.abs(slopes[:-1]), np.abs(slopes[1:])) * dx > resolution


def profile_diagnostics(profile: WaveProfile) -> ProfileDiagnostics:
    dx = profile.grid.dx
    end = profile.end
    second = profile.n_tilde_second
    q_prime = profile.q_tilde_prime

    steps_n, steps_a = np.diff(profile.n_tilde), np.diff(profile.a)
    resolved = _resolved_steps(profile.n_tilde, profile.n_tilde_prime, dx)
    a_resolved = _resolved_steps(profile.a, (profile.lambda_ / end.epsilon) * profile.n_tilde_prime, dx)
    decreasing_violations = np.count_nonzero((steps_n > 0.0) | ((steps_n == 0.0) & resolved))
    increasing_violations = np.count_nonzero((steps_a < 0.0) | ((steps_a == 0.0) & a_resolved))
    outside = np.count_nonzero((profile.a < 1.0 - 1e-14) | (profile.a > 1.0 + profile.lambda_ + 1e-14))
    closeness = float(np.max(np.abs(profile.a - 1.0)))
    root_kappa = math.sqrt(profile.constants.kappa)

    return ProfileDiagnostics(
        min_n_tilde=float(profile.n_tilde.min()),
        tail_deviation_minus=float(abs(profile.n_tilde[0] - end.n_minus)),
        tail_deviation_plus=float(abs(profile.n_tilde[-1] - end.n_plus)),
        n_tilde_prime_l1=l1_norm(profile.n_tilde_prime, dx),
        n_tilde_prime_linf=float(np.max(np.abs(profile.n_tilde_prime))),
        n_tilde_second_l1=l1_norm(second, dx),
        n_tilde_second_linf=float(np.max(np.abs(second))),
        q_tilde_prime_l1=l1_norm(q_prime, dx),
        q_tilde_prime_linf=float(np.max(np.abs(q_prime))),
        monotonicity_violations=int(decreasing_violations),
        weight_violations=int(outside + increasing_violations),
        weight_closeness=closeness,
        weight_closeness_bound_holds=closeness <= profile.lambda_ + 1e-14
        and profile.lambda_ < root_kappa < 0.5,
        pde_residual=profile_pde_residual(profile),
    )
