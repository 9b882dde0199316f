#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Relative-entropy calculus.

Pi(n) = n log n - n, its Bregman divergence Pi(n1|n2), the relative entropy
eta(U1|U2) = |q1 - q2|^2 / 2 + Pi(n1|n2), the weighted shifted functional tracked along evolutions,
its dissipation, the argmin shift, and the inequality sweeps on Pi(.|.).
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
import structlog
from scipy.integrate import cumulative_trapezoid

from app.core.base_model import ReportModel
from app.lab.exceptions import DomainException, VacuumException
from app.lab.physics.fields import VACUUM_FLOOR, FieldState, require_same_grid
from app.lab.physics.wave import WaveProfile
from app.lab.utils.golden_section import golden_section_search
from app.lab.utils.grid_helpers import (
    centered_gradient,
    integrate,
    l1_norm,
    l2_norm,
    shifted_samples,
)

SHIFT_TOLERANCE_FRACTION = 1e-6
SCAN_POINTS = 65
MAX_WIDENINGS = 4
DECOMPOSITION_THRESHOLD = 0.5

logger = structlog.get_logger(__name__)


class EntropyReport(ReportModel):
    t: float
    re_plain: float
    re_weighted_shifted: float
    shift_X: float
    dissipation: float
    m1_l1: float
    m2_l2: float
    sqrt_n_diss: float
    re_unweighted_shifted: float


class ShiftSearch(ReportModel):
    shift: float
    value: float
    bracket_low: float
    bracket_high: float
    widenings: int
    exhausted: bool


class LemmaReport(ReportModel):
    samples: int
    delta: float
    local_ratio_min: float
    local_ratio_max: float
    global_ratio_min: float
    global_ratio_max: float
    linear_lower_ratio_min: float
    quadratic_upper_ratio_max: float
    one_sided_constant: float
    monotonicity_triples: int
    monotonicity_violations: int
    reverse_local_constant: float
    reverse_counterexample_n1: float
    reverse_counterexample_n2: float
    reverse_counterexample_ratio: float

    @property
    def reverse_bound_violated(self) -> bool:
        return self.reverse_counterexample_ratio > 10.0 * self.reverse_local_constant

    @property
    def bands_finite(self) -> bool:
        values = (
            self.local_ratio_min,
            self.local_ratio_max,
            self.global_ratio_min,
            self.global_ratio_max,
            self.linear_lower_ratio_min,
            self.quadratic_upper_ratio_max,
            self.one_sided_constant,
        )
        return all(math.isfinite(value) and value > 0.0 for value in values)

    @property
    def passed(self) -> bool:
        return self.bands_finite and self.monotonicity_violations == 0 and self.reverse_bound_violated


class LinftyBoundReport(ReportModel):
    sup_f: float
    bound: float
    sharp_bound: float
    holds: bool
    sharp_holds: bool
    precondition_excess: float
    precondition_holds: bool


class LocalMassReport(ReportModel):
    sup_n: float
    window_mass_sup: float
    sqrt_n_diss: float
    bound: float
    holds: bool


@dataclass(frozen=True)
class Decomposition:
    m1: np.ndarray
    m2: np.ndarray
    m1_l1: float
    m2_l2: float


def _positive(values, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if np.any(values <= 0.0):
        raise DomainException(f"{name} must be positive")
    return values


def _scalar_or_array(result: np.ndarray):
    return float(result) if result.ndim == 0 else result


def pi_potential(n):
    n = _positive(n, "density")
    return _scalar_or_array(n * np.log(n) - n)


def pi_relative(n1, n2):
    """Bregman divergence of Pi, written as n1 log(n1/n2) - (n1 - n2) and clipped at zero."""
    n1 = _positive(n1, "density n1")
    n2 = _positive(n2, "density n2")
    gap = n1 - n2
    result = n1 * np.log1p(gap / n2) - gap
    return _scalar_or_array(np.maximum(result, 0.0))


def eta_relative(u1: Tuple, u2: Tuple):
    (n1, q1), (n2, q2) = u1, u2
    return _scalar_or_array(
        np.asarray(0.5 * (np.asarray(q1) - np.asarray(q2)) ** 2 + pi_relative(n1, n2))
    )


def _shifted_fields(state: FieldState, profile: WaveProfile, shift: float):
    end = profile.end
    xi = state.grid.xi
    n = shifted_samples(xi, state.n, shift, end.n_minus, end.n_plus)
    q = shifted_samples(xi, state.q, shift, end.q_minus, end.q_plus)
    return n, q


def _require_positive_state(state: FieldState):
    if state.min_n < VACUUM_FLOOR:
        raise VacuumException(
            f"min n = {state.min_n:.3e} below the vacuum floor {VACUUM_FLOOR:g} at t={state.t:.6g}",
            snapshot=state,
        )


def weighted_relative_entropy(
    state: FieldState, profile: WaveProfile, shift: float, weighted: bool = True
) -> float:
    """Trapezoid value of the integral of a(xi) eta(U(xi - shift) | U_tilde(xi)).

    Args:
        state:      Moving-frame state on the profile grid
        profile:    Traveling wave and weight
        shift:      Translation applied to the state; tails are extended by the end states
        weighted:   Drop the weight a when False

    Returns:
        The (weighted) shifted relative entropy
    """
    require_same_grid(state.grid, profile.grid)
    _require_positive_state(state)
    n, q = _shifted_fields(state, profile, shift)
    density = eta_relative((n, q), (profile.n_tilde, profile.q_tilde))
    if weighted:
        density = profile.a * density
    return integrate(density, state.grid.dx)


def plain_relative_entropy(state: FieldState, profile: WaveProfile) -> float:
    return weighted_relative_entropy(state, profile, 0.0, weighted=False)


def optimal_shift(
    state: FieldState,
    profile: WaveProfile,
    bracket: Tuple[float, float],
    scan_points: int = SCAN_POINTS,
    max_widenings: int = MAX_WIDENINGS,
) -> ShiftSearch:
    """Argmin over translations of the weighted shifted relative entropy.

    A coarse scan over the bracket picks the best node; golden-section search then refines inside the
    two neighbouring scan cells down to a width of 1e-6 dx. A minimiser on the edge of the bracket
    widens the bracket around it (twice the width) and rescans, up to ``max_widenings`` times.
    """
    require_same_grid(state.grid, profile.grid)
    _require_positive_state(state)

    def objective(shift: float) -> float:
        return weighted_relative_entropy(state, profile, shift)

    low, high = sorted(bracket)
    for widening in range(max_widenings + 1):
        shifts = np.linspace(low, high, scan_points)
        values = np.array([objective(shift) for shift in shifts])
        best = int(np.argmin(values))
        if 0 < best < scan_points - 1:
            break
        if widening == max_widenings:
            logger.warning(
                "Shift bracket exhausted",
                t=state.t,
                bracket_low=low,
                bracket_high=high,
                shift=float(shifts[best]),
            )
            return ShiftSearch(
                shift=float(shifts[best]),
                value=float(values[best]),
                bracket_low=low,
                bracket_high=high,
                widenings=widening,
                exhausted=True,
            )
        width = high - low
        low, high = shifts[best] - width, shifts[best] + width
        logger.debug("Widening shift bracket", t=state.t, bracket_low=low, bracket_high=high)

    shift, value = golden_section_search(
        objective,
        shifts[best - 1],
        shifts[best + 1],
        SHIFT_TOLERANCE_FRACTION * state.grid.dx,
    )
    if value > values[best]:
        shift, value = float(shifts[best]), float(values[best])
    return ShiftSearch(
        shift=float(shift),
        value=float(value),
        bracket_low=float(low),
        bracket_high=float(high),
        widenings=widening,
        exhausted=False,
    )


def dissipation_integral(state: FieldState, profile: WaveProfile, shift: float) -> float:
    """Integral of a n |d/dxi log(n / n_tilde)|^2 with the state shifted by ``shift``."""
    require_same_grid(state.grid, profile.grid)
    _require_positive_state(state)
    n, _ = _shifted_fields(state, profile, shift)
    slope = centered_gradient(np.log(n / profile.n_tilde), state.grid.dx)
    return integrate(profile.a * n * slope**2, state.grid.dx)


def dissipation_sqrt_form(state: FieldState, profile: WaveProfile, shift: float) -> float:
    """Same dissipation through n |d log(n/n_tilde)|^2 = 4 n_tilde |d sqrt(n/n_tilde)|^2."""
    require_same_grid(state.grid, profile.grid)
    _require_positive_state(state)
    n, _ = _shifted_fields(state, profile, shift)
    slope = centered_gradient(np.sqrt(n / profile.n_tilde), state.grid.dx)
    return integrate(4.0 * profile.a * profile.n_tilde * slope**2, state.grid.dx)


def sqrt_n_dissipation(state: FieldState) -> float:
    _require_positive_state(state)
    slope = centered_gradient(np.sqrt(state.n), state.grid.dx)
    return integrate(slope**2, state.grid.dx)


def perturbation_decomposition(state: FieldState, profile: WaveProfile) -> Decomposition:
    """Split n - n_hat at |n/n_hat - 1| = 1/2 into a large part m1 and a moderate part m2."""
    require_same_grid(state.grid, profile.grid)
    n_hat = profile.n_tilde
    perturbation = state.n - n_hat
    large = np.abs(state.n / n_hat - 1.0) >= DECOMPOSITION_THRESHOLD
    m1 = np.where(large, perturbation, 0.0)
    m2 = np.where(large, 0.0, perturbation)
    dx = state.grid.dx
    return Decomposition(m1=m1, m2=m2, m1_l1=l1_norm(m1, dx), m2_l2=l2_norm(m2, dx))


def entropy_report(
    state: FieldState, profile: WaveProfile, shift: Optional[float] = None, value: Optional[float] = None
) -> EntropyReport:
    """Diagnostics of one snapshot at a given shift (zero when not given)."""
    shift = 0.0 if shift is None else shift
    if value is None:
        value = weighted_relative_entropy(state, profile, shift)
    decomposition = perturbation_decomposition(state, profile)
    return EntropyReport(
        t=state.t,
        re_plain=plain_relative_entropy(state, profile),
        re_weighted_shifted=value,
        shift_X=shift,
        dissipation=dissipation_integral(state, profile, shift),
        m1_l1=decomposition.m1_l1,
        m2_l2=decomposition.m2_l2,
        sqrt_n_diss=sqrt_n_dissipation(state),
        re_unweighted_shifted=weighted_relative_entropy(state, profile, shift, weighted=False),
    )


def unweighted_bound_check(reports: pd.DataFrame) -> bool:
    """With |a - 1| <= lambda < 1/2 the unweighted shifted entropy stays below 4x the initial weighted value."""
    initial = float(reports["re_weighted_shifted"].iloc[0])
    return bool((reports["re_unweighted_shifted"] <= 4.0 * initial + 1e-12).all())


def pi_inequality_check(
    n_minus: float, delta: float = 0.5, samples: int = 1_000_000, seed: int = 0
) -> LemmaReport:
    """Randomised sweep over the inequalities satisfied by Pi(.|.).

    Args:
        n_minus:    Left density; n2 is drawn from (n_minus/2, n_minus)
        delta:      Threshold separating the local and the global regimes, in (0, 1/2]
        samples:    Number of (n1, n2) pairs and of ordered triples
        seed:       Seed of the random generator

    Returns:
        Empirical extremal ratios per regime, the monotonicity count and a counterexample to the
        reversed quadratic bound
    """
    if not 0.0 < delta <= 0.5:
        raise DomainException(f"delta must lie in (0, 1/2], got {delta}")
    if n_minus <= 0.0:
        raise DomainException(f"n_minus must be positive, got {n_minus}")

    rng = np.random.default_rng(seed)
    half = samples // 2
    # n1 in (0, 1e3]: half log-uniform from 1e-6, half uniform
    n1 = np.concatenate(
        [
            np.exp(rng.uniform(np.log(1e-6), np.log(1e3), half)),
            1e3 * (1.0 - rng.random(samples - half)),
        ]
    )
    n2 = rng.uniform(0.5 * n_minus, n_minus, samples)
    pi = pi_relative(n1, n2)
    gap = np.abs(n1 - n2)
    relative = np.abs(n1 / n2 - 1.0)

    local = (relative <= delta) & (gap > 0.0)
    far = relative >= delta
    local_ratio = pi[local] / gap[local] ** 2
    log_plus = np.maximum(np.log(n1[far] / n2[far]), 0.0)
    global_ratio = pi[far] / (1.0 + n1[far] * log_plus)
    linear_ratio = pi[far] / gap[far]
    quadratic_ratio = pi[far] / gap[far] ** 2
    nonzero = gap > 0.0
    one_sided = pi[nonzero] / gap[nonzero] ** 2

    reverse = gap[far] ** 2 / pi[far]
    reverse_local = gap[local] ** 2 / pi[local]
    worst = int(np.argmax(reverse))

    # ordered triples: m <= n2 <= n1 or n1 <= n2 <= m
    triples = np.sort(np.exp(rng.uniform(np.log(1e-3), np.log(1e3), (samples, 3))), axis=1)
    upward = rng.random(samples) < 0.5
    m = np.where(upward, triples[:, 0], triples[:, 2])
    first = np.where(upward, triples[:, 2], triples[:, 0])
    second = triples[:, 1]
    far_value = pi_relative(first, m)
    near_value = pi_relative(second, m)
    resolution = 8.0 * np.finfo(float).eps * (np.abs(far_value) + first + m)
    violations = int(np.count_nonzero(far_value < near_value - resolution))

    return LemmaReport(
        samples=samples,
        delta=delta,
        local_ratio_min=float(local_ratio.min()),
        local_ratio_max=float(local_ratio.max()),
        global_ratio_min=float(global_ratio.min()),
        global_ratio_max=float(global_ratio.max()),
        linear_lower_ratio_min=float(linear_ratio.min()),
        quadratic_upper_ratio_max=float(quadratic_ratio.max()),
        one_sided_constant=float(one_sided.max()),
        monotonicity_triples=samples,
        monotonicity_violations=violations,
        reverse_local_constant=float(reverse_local.max()),
        reverse_counterexample_n1=float(n1[far][worst]),
        reverse_counterexample_n2=float(n2[far][worst]),
        reverse_counterexample_ratio=float(reverse[worst]),
    )


lemma28_check = pi_inequality_check


def linfty_decomposition_bound(
    f1: np.ndarray, f2: np.ndarray, g1: np.ndarray, g2: np.ndarray, dx: float
) -> LinftyBoundReport:
    """Check sup|f| against the L1 + Linf norms of a decomposition of f and of a bound on f'."""
    f = f1 + f2
    slope = np.abs(centered_gradient(f, dx))
    allowance = g1 + g2
    excess = float(np.max(slope - allowance))
    # discrete derivatives carry O(dx^2) relative error
    precondition_holds = bool(np.all(slope <= allowance * (1.0 + 1e-3) + 1e-12))
    if not precondition_holds:
        logger.warning("Derivative bound violated on the grid", excess=excess)

    sup_f = float(np.max(np.abs(f)))
    f1_l1, g1_l1 = l1_norm(f1, dx), l1_norm(g1, dx)
    f2_sup, g2_sup = float(np.max(np.abs(f2))), float(np.max(np.abs(g2)))
    bound = 2.0 * (f1_l1 + f2_sup + g1_l1 + g2_sup)
    sharp_bound = 0.5 * f1_l1 + f2_sup + g1_l1 + 2.0 * g2_sup
    return LinftyBoundReport(
        sup_f=sup_f,
        bound=bound,
        sharp_bound=sharp_bound,
        holds=sup_f <= bound + 1e-12,
        sharp_holds=sup_f <= sharp_bound + 1e-12,
        precondition_excess=excess,
        precondition_holds=precondition_holds,
    )


def local_mass_bound(state: FieldState) -> LocalMassReport:
    """n(x) <= 3/2 sup_x ||n||_L1[x-1, x+1] + ||d sqrt(n)||^2_L2."""
    xi = state.grid.xi
    mass = cumulative_trapezoid(state.n, xi, initial=0.0)
    window = np.interp(xi + 1.0, xi, mass) - np.interp(xi - 1.0, xi, mass)
    window_sup = float(window.max())
    diss = sqrt_n_dissipation(state)
    bound = 1.5 * window_sup + diss
    sup_n = float(state.n.max())
    return LocalMassReport(
        sup_n=sup_n,
        window_mass_sup=window_sup,
        sqrt_n_diss=diss,
        bound=bound,
        holds=sup_n <= bound,
    )
