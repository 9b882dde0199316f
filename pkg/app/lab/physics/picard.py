#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Picard construction of local solutions in the fixed frame.

Iterate k solves the linear problem

    n^k_t = n^k_xx + (n^{k-1} q^{k-1})_x,        q^k_t = n^k_x,

from the common initial data, with backward-Euler diffusion and the frozen source taken explicitly.
Its discrete fixed point is the sigma = 0 step of the IMEX scheme, so the limit can be compared
directly with the time-stepping solver.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog
from scipy.integrate import trapezoid

from app.core.base_model import ReportModel
from app.lab.exceptions import DomainException
from app.lab.physics.fields import FieldState, Grid
from app.lab.physics.solver import DEFAULT_SAFETY, DiffusionSolver, ImexStepper, aligned_time_step
from app.lab.utils.grid_helpers import centered_gradient, l2_norm, shifted_samples

MIN_STEPS = 50
DIVERGENCE_STREAK = 3
ROUND_OFF = 1e-13
LOWER_BOUND_SLOPE = 0.75

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class PicardTrace:
    """Successive-difference norms of a Picard run and its last iterate.

    ``norms`` has one row per k >= 1 with the sup-in-time L2 norms of n^k - n^{k-1} and q^k - q^{k-1},
    the L2(L2) norm of the x-derivative of the density difference, and min over (t, x) of n^k.
    """

    grid: Grid
    times: np.ndarray
    n: np.ndarray
    q: np.ndarray
    norms: pd.DataFrame
    diverged: bool

    @property
    def t_span(self) -> float:
        return float(self.times[-1])

    @property
    def min_n(self) -> float:
        return float(self.norms["min_n"].min())

    def final_state(self) -> FieldState:
        return FieldState(t=self.t_span, grid=self.grid, n=self.n[-1].copy(), q=self.q[-1].copy())


class EnvelopeFit(ReportModel):
    slope: float
    intercept: float
    r_squared: float
    implied_rate: float
    points: int
    super_geometric: bool

    @property
    def consistent(self) -> bool:
        return self.points >= 3 and self.super_geometric


class LowerBoundReport(ReportModel):
    r0: float
    t_spans: List[float]
    min_n: List[float]
    deficit_slope: Optional[float]
    half_bound_holds: bool
    slope_holds: Optional[bool]

    @property
    def slope_evaluated(self) -> bool:
        return self.slope_holds is not None

    @property
    def passed(self) -> bool:
        return self.half_bound_holds and self.slope_holds is True


class PicardGap(ReportModel):
    gap: float
    tolerance: float
    passed: bool


def picard_time_step(initial: FieldState, t_span: float) -> Tuple[float, int]:
    stepper = ImexStepper.fixed_frame(initial)
    dt = min(DEFAULT_SAFETY * stepper.max_stable_dt(initial), t_span / MIN_STEPS)
    return aligned_time_step(dt, t_span)


def picard_iterate(
    prev_n: np.ndarray,
    prev_q: np.ndarray,
    initial: FieldState,
    t_span: float,
    diffusion: Optional[DiffusionSolver] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """One Picard iteration over [0, t_span].

    Args:
        prev_n, prev_q:     Previous iterate, shape (steps + 1, n_points), on uniform time levels
        initial:            Common initial data; its boundary values stay pinned
        t_span:             Length of the time window
        diffusion:          Reusable diffusion solver for the grid

    Returns:
        The next iterate on the same time levels
    """
    steps = prev_n.shape[0] - 1
    if steps < 1 or prev_n.shape != prev_q.shape or prev_n.shape[1] != initial.grid.n_points:
        raise DomainException(f"iterate shape {prev_n.shape} does not fit the grid and time levels")
    dt = t_span / steps
    dx = initial.grid.dx
    diffusion = diffusion or DiffusionSolver(initial.grid)

    n = np.empty_like(prev_n)
    q = np.empty_like(prev_q)
    n[0], q[0] = initial.n, initial.q
    for level in range(steps):
        source = np.zeros(initial.grid.n_points)
        source[1:-1] = (prev_n[level, 2:] * prev_q[level, 2:] - prev_n[level, :-2] * prev_q[level, :-2]) / (
            2.0 * dx
        )
        rhs = n[level] + dt * source
        rhs[0], rhs[-1] = initial.n[0], initial.n[-1]
        n[level + 1] = diffusion.solve(rhs, dt)
        q[level + 1] = q[level]
        q[level + 1, 1:-1] += dt * (n[level + 1, 2:] - n[level + 1, :-2]) / (2.0 * dx)
    return n, q


def _difference_norms(
    n: np.ndarray, q: np.ndarray, prev_n: np.ndarray, prev_q: np.ndarray, times: np.ndarray, dx: float
) -> Tuple[float, float, float]:
    diff_n, diff_q = n - prev_n, q - prev_q
    n_l2 = max(l2_norm(row, dx) for row in diff_n)
    q_l2 = max(l2_norm(row, dx) for row in diff_q)
    gradient_squares = [l2_norm(centered_gradient(row, dx), dx) ** 2 for row in diff_n]
    return n_l2, q_l2, math.sqrt(float(trapezoid(gradient_squares, times)))


def picard_run(initial: FieldState, t_span: float, k_max: int, dt: Optional[float] = None) -> PicardTrace:
    """Run ``k_max`` Picard iterations from the frozen initial data."""
    if t_span <= 0.0 or k_max < 1:
        raise DomainException("t_span must be positive and k_max at least 1")
    if dt is None:
        dt, steps = picard_time_step(initial, t_span)
    else:
        dt, steps = aligned_time_step(dt, t_span)
    times = np.linspace(0.0, t_span, steps + 1)
    dx = initial.grid.dx
    diffusion = DiffusionSolver(initial.grid)

    n = np.tile(initial.n, (steps + 1, 1))
    q = np.tile(initial.q, (steps + 1, 1))
    scale = max(l2_norm(initial.n, dx), l2_norm(initial.q, dx), 1.0)
    rows = []
    streak, diverged, previous = 0, False, math.inf
    for k in range(1, k_max + 1):
        new_n, new_q = picard_iterate(n, q, initial, t_span, diffusion)
        n_l2, q_l2, dn_l2l2 = _difference_norms(new_n, new_q, n, q, times, dx)
        n, q = new_n, new_q
        rows.append(
            {
                "k": k,
                "diff_n_l2": n_l2,
                "diff_q_l2": q_l2,
                "diff_dn_l2l2": dn_l2l2,
                "min_n": float(n.min()),
            }
        )

        size = math.hypot(n_l2, q_l2)
        # growth below round-off carries no information
        if size > previous and size > ROUND_OFF * scale:
            streak += 1
        else:
            streak = 0
        previous = size
        if streak >= DIVERGENCE_STREAK:
            diverged = True
            logger.warning("Picard differences grew three times in a row", k=k, difference=size)
            break

    logger.debug("Picard run finished", t_span=t_span, steps=steps, iterations=len(rows), diverged=diverged)
    return PicardTrace(
        grid=initial.grid, times=times, n=n, q=q, norms=pd.DataFrame(rows), diverged=diverged
    )


def heat_kernel_convolve(field: np.ndarray, t: float, dx: float) -> np.ndarray:
    """Convolution with the sampled heat kernel (4 pi t)^(-1/2) exp(-x^2 / 4t), renormalised to unit mass.

    The field is extended by its edge values, so constants are reproduced exactly.
    """
    if t <= 0.0:
        raise DomainException(f"heat kernel needs t > 0, got {t}")
    half = int(math.ceil(8.0 * math.sqrt(2.0 * t) / dx))
    offsets = dx * np.arange(-half, half + 1)
    kernel = np.exp(-(offsets**2) / (4.0 * t))
    kernel /= kernel.sum()
    padded = np.pad(field, half, mode="edge")
    return np.convolve(padded, kernel, mode="valid")


def envelope_fit(trace: PicardTrace) -> EnvelopeFit:
    """Least-squares line through log(d_k^2 k!) against k, d_k the combined k-th difference.

    Differences at the round-off floor are left out. Successive ratios d_{k+1}/d_k that shrink with k
    (a negative log-log trend) mark decay faster than any geometric rate.
    """
    norms = trace.norms
    d = np.hypot(norms["diff_n_l2"].to_numpy(), norms["diff_q_l2"].to_numpy())
    k = norms["k"].to_numpy()
    floor = ROUND_OFF * max(float(d.max()), 1.0) if len(d) else ROUND_OFF
    usable = d > floor
    k, d = k[usable], d[usable]
    if len(k) < 3:
        return EnvelopeFit(
            slope=math.nan, intercept=math.nan, r_squared=math.nan, implied_rate=math.nan, points=len(k),
            super_geometric=False,
        )

    log_factorial = np.array([math.lgamma(value + 1.0) for value in k])
    target = 2.0 * np.log(d) + log_factorial
    slope, intercept = np.polyfit(k, target, 1)
    fitted = slope * k + intercept
    spread = float(np.sum((target - target.mean()) ** 2))
    r_squared = 1.0 - float(np.sum((target - fitted) ** 2)) / spread if spread > 0.0 else 1.0

    ratios = np.log(d[1:] / d[:-1])
    trend = np.polyfit(np.log(k[1:]), ratios, 1)[0] if len(ratios) >= 2 else math.nan
    return EnvelopeFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        implied_rate=float(math.exp(slope)),
        points=int(len(k)),
        super_geometric=bool(trend < 0.0),
    )


def lower_bound_check(traces: Sequence[PicardTrace], r0: float) -> LowerBoundReport:
    """min n^k >= r0/2 for every run, and the deficit r0 - min n^k growing at least like t_span^(3/4).

    The slope is the least-squares log-log slope of the deficit against t_span over runs with a
    positive deficit. With fewer than two such runs the slope is not evaluated: both the slope and
    its check stay None and the report does not pass.
    """
    if isinstance(traces, PicardTrace):
        traces = [traces]
    t_spans = [trace.t_span for trace in traces]
    minima = [trace.min_n for trace in traces]
    deficits = np.array([r0 - value for value in minima])
    positive = deficits > 0.0

    slope = None
    if np.count_nonzero(positive) >= 2:
        slope = float(np.polyfit(np.log(np.array(t_spans)[positive]), np.log(deficits[positive]), 1)[0])
    return LowerBoundReport(
        r0=r0,
        t_spans=t_spans,
        min_n=minima,
        deficit_slope=slope,
        half_bound_holds=all(value >= 0.5 * r0 for value in minima),
        slope_holds=None if slope is None else slope >= LOWER_BOUND_SLOPE,
    )


def picard_vs_evolve_gap(
    trace: PicardTrace, evolved: FieldState, sigma: float, evolve_dt: float = 0.0
) -> PicardGap:
    """L2 gap between the Picard limit and a moving-frame state at the same time.

    The moving-frame state is resampled at xi = x - sigma t, its tails extended by its boundary values.
    """
    if not math.isclose(evolved.t, trace.t_span, rel_tol=1e-9, abs_tol=1e-12):
        raise DomainException(f"evolved state at t={evolved.t} does not match t_span={trace.t_span}")
    xi = trace.grid.xi
    if evolved.grid.n_points != trace.grid.n_points:
        raise DomainException("Picard and evolution grids differ in size")
    offset = sigma * trace.t_span
    n = shifted_samples(xi, evolved.n, offset, evolved.n[0], evolved.n[-1])
    q = shifted_samples(xi, evolved.q, offset, evolved.q[0], evolved.q[-1])
    limit = trace.final_state()
    dx = trace.grid.dx
    gap = l2_norm(limit.n - n, dx) + l2_norm(limit.q - q, dx)
    dt = max(float(trace.times[1] - trace.times[0]), evolve_dt)
    tolerance = 10.0 * (dx**2 + dt)
    return PicardGap(gap=gap, tolerance=tolerance, passed=gap <= tolerance)
