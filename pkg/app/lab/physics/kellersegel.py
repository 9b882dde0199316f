#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Keller-Segel system with logarithmic sensitivity and linear consumption, in the fixed frame:

    n_t = nu n_xx - (n c_x / c)_x,        c_t = -c n.

The substitution q = -(log c)_x turns it into the (n, q) system, which is what the cross-model check
measures. The chemotactic flux is discretised on cell faces from differences of log c, and c is
advanced by the integrating factor exp(-n dt), so it stays positive whatever the step.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog
from scipy.integrate import cumulative_trapezoid

from app.core.base_model import ReportModel
from app.lab.exceptions import DomainException, VacuumException
from app.lab.physics.fields import VACUUM_FLOOR, FieldState, Grid, KSState, require_same_grid
from app.lab.physics.solver import DEFAULT_SAFETY, DiffusionSolver, ImexStepper, aligned_time_step
from app.lab.utils.grid_helpers import centered_gradient, l2_norm

# bound on max(n) dt at the coarsest level of a joint refinement
REACTION_STEP = 0.0625

logger = structlog.get_logger(__name__)


class EquivalenceSummary(ReportModel):
    max_residual: float
    max_q_gap: float
    max_n_gap: float
    min_c: float


def cole_hopf_forward(c: np.ndarray, dx: float) -> np.ndarray:
    c = np.asarray(c, dtype=np.float64)
    if np.any(c <= 0.0):
        raise DomainException("concentration must be strictly positive")
    return -centered_gradient(np.log(c), dx)


def cole_hopf_inverse(q: np.ndarray, c_anchor: float, anchor_index: int, dx: float) -> np.ndarray:
    """c = c_anchor exp(-int_anchor q) with a trapezoid antiderivative."""
    if c_anchor <= 0.0:
        raise DomainException(f"anchor concentration must be positive, got {c_anchor}")
    antiderivative = cumulative_trapezoid(q, dx=dx, initial=0.0)
    return c_anchor * np.exp(-(antiderivative - antiderivative[anchor_index]))


def _max_stable_dt(state: KSState, nu: float) -> float:
    # same limits as the (n, q) stepper at sigma = 0
    drift = float(np.max(np.abs(cole_hopf_forward(state.c, state.grid.dx))))
    speed = drift + float(np.max(np.abs(state.n)))
    bound = state.grid.dx / speed if speed > 0.0 else np.inf
    return min(bound, 2.0 * nu / drift**2) if drift > 0.0 else bound


def refinement_time_step(dt: float, n0: np.ndarray, interval: float) -> float:
    """Coarsest step of a joint (dx, dt) -> (dx/2, dt/4) ladder.

    The step is capped at REACTION_STEP / max(n0) and shrunk to divide the interval, so every finer
    level divides it too.
    """
    if dt <= 0.0 or interval <= 0.0:
        raise DomainException("time step and interval must be positive")
    cap = REACTION_STEP / float(np.max(n0))
    step, _ = aligned_time_step(min(dt, cap), interval)
    return step


def ks_step(state: KSState, dt: float, diffusion: DiffusionSolver) -> KSState:
    dx = state.grid.dx
    n, log_c = state.n, np.log(state.c)
    # face fluxes n_{i+1/2} q_{i+1/2}
    faces = 0.5 * (n[1:] + n[:-1]) * (-(log_c[1:] - log_c[:-1]) / dx)
    rhs = n.copy()
    rhs[1:-1] += dt * (faces[1:] - faces[:-1]) / dx
    n_new = diffusion.solve(rhs, dt)
    if np.min(n_new) < VACUUM_FLOOR:
        raise VacuumException(
            f"min n = {np.min(n_new):.3e} below the vacuum floor at t={state.t + dt:.6g}", snapshot=state
        )
    c_new = state.c * np.exp(-n_new * dt)
    return KSState(t=state.t + dt, grid=state.grid, n=n_new, c=c_new)


def ks_evolve(
    initial: KSState,
    nu: float,
    t_end: float,
    output_every: Optional[float] = None,
    dt: Optional[float] = None,
) -> List[KSState]:
    """Snapshots of the Keller-Segel run at every output time, the initial state included.

    The density is pinned at the two boundary nodes; the concentration follows its nodewise ODE there.
    """
    if nu <= 0.0 or t_end <= 0.0:
        raise DomainException("nu and t_end must be positive")
    output_every = output_every or t_end
    if dt is None:
        dt = min(DEFAULT_SAFETY * _max_stable_dt(initial, nu), output_every)
    dt, substeps = aligned_time_step(dt, output_every)
    diffusion = DiffusionSolver(initial.grid, nu)

    state = initial
    series = [state]
    for _ in range(int(round(t_end / output_every))):
        for _ in range(substeps):
            state = ks_step(state, dt, diffusion)
        series.append(state)
    logger.debug("Keller-Segel run finished", t=state.t, dt=dt, min_c=float(state.c.min()))
    return series


def nq_evolve(
    initial: FieldState,
    nu: float,
    t_end: float,
    output_every: Optional[float] = None,
    dt: Optional[float] = None,
) -> List[FieldState]:
    """Fixed-frame (n, q) run with the IMEX stepper at sigma = 0."""
    output_every = output_every or t_end
    stepper = ImexStepper.fixed_frame(initial, nu)
    if dt is None:
        dt = min(DEFAULT_SAFETY * stepper.max_stable_dt(initial), output_every)
    dt, substeps = aligned_time_step(dt, output_every)
    state = initial
    series = [state]
    for _ in range(int(round(t_end / output_every))):
        for _ in range(substeps):
            state = stepper.step(state, dt)
        series.append(state)
    return series


def equivalence_check(ks_series: Sequence[KSState], nq_series: Sequence[FieldState]) -> pd.DataFrame:
    """Per output time, the L2 gaps between the transformed Keller-Segel run and the (n, q) run."""
    if len(ks_series) != len(nq_series):
        raise DomainException("the two runs have different numbers of snapshots")
    rows = []
    for ks, nq in zip(ks_series, nq_series):
        require_same_grid(ks.grid, nq.grid)
        dx = ks.grid.dx
        q_gap = l2_norm(cole_hopf_forward(ks.c, dx) - nq.q, dx)
        n_gap = l2_norm(ks.n - nq.n, dx)
        rows.append(
            {
                "t": ks.t,
                "q_gap": q_gap,
                "n_gap": n_gap,
                "residual": q_gap + n_gap,
                "min_c": float(ks.c.min()),
            }
        )
    return pd.DataFrame(rows)


def summarize_equivalence(frame: pd.DataFrame) -> EquivalenceSummary:
    return EquivalenceSummary(
        max_residual=float(frame["residual"].max()),
        max_q_gap=float(frame["q_gap"].max()),
        max_n_gap=float(frame["n_gap"].max()),
        min_c=float(frame["min_c"].min()),
    )


def matched_states(
    n0: np.ndarray, q0: np.ndarray, grid: Grid, anchor_index: Optional[int] = None
) -> Tuple[KSState, FieldState]:
    """Keller-Segel and (n, q) data describing the same solution; c is anchored to 1 at the centre node."""
    anchor_index = grid.n_points // 2 if anchor_index is None else anchor_index
    c0 = cole_hopf_inverse(q0, 1.0, anchor_index, grid.dx)
    ks = KSState(t=0.0, grid=grid, n=n0.copy(), c=c0)
    # the (n, q) run starts from the transformed c so both models see identical data
    nq = FieldState(t=0.0, grid=grid, n=n0.copy(), q=cole_hopf_forward(c0, grid.dx))
    return ks, nq


def ks_compare(
    n0: np.ndarray,
    q0: np.ndarray,
    grid: Grid,
    nu: float,
    t_end: float,
    output_every: Optional[float] = None,
    dt: Optional[float] = None,
) -> Tuple[List[KSState], List[FieldState], pd.DataFrame]:
    ks_initial, nq_initial = matched_states(n0, q0, grid)
    if dt is None:
        stepper = ImexStepper.fixed_frame(nq_initial, nu)
        dt = DEFAULT_SAFETY * stepper.max_stable_dt(nq_initial)
    ks_series = ks_evolve(ks_initial, nu, t_end, output_every, dt)
    nq_series = nq_evolve(nq_initial, nu, t_end, output_every, dt)
    return ks_series, nq_series, equivalence_check(ks_series, nq_series)
