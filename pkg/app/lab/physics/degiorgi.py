#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Truncation energies at levels climbing toward a cap, and the recursion that controls them.

For a field m(t, xi) and a cap M the levels c_k = M (1 - 2^(-k-1)) increase to M. The energies

    E_k = max_t int (m - c_k)_+^2 + int int |d_xi (m - c_k)_+|^2

decay doubly exponentially when m <= M, and stall at a positive value when m exceeds M on a set of
positive measure. The smallest cap for which they vanish is an empirical L-infinity bound.
"""

import math
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
import structlog
from scipy.integrate import trapezoid

from app.core.base_model import ReportModel
from app.lab.exceptions import DomainException, VacuumException
from app.lab.physics.fields import VACUUM_FLOOR, FieldState
from app.lab.physics.wave import WaveProfile
from app.lab.utils.grid_helpers import centered_gradient, integrate, l2_norm

K_MAX = 40
CONVERGENCE_RATIO = 1e-12
CAP_FACTOR = 1.25
MAX_CAPS = 60
BISECTION_STEPS = 60

logger = structlog.get_logger(__name__)


class DeGiorgiReport(ReportModel):
    M: float
    levels: List[float]
    energies: List[float]
    converged: bool

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"M": self.M, "k": range(len(self.levels)), "c_k": self.levels, "E_k": self.energies}
        )


class SequenceReport(ReportModel):
    C: float
    beta: float
    W0: float
    log_w: List[float]
    converged: bool


class AssembledBound(ReportModel):
    transport_linf: float
    transport_l2l2: float
    initial_linf: float
    R: float


def truncation_levels(M: float, k_max: int = K_MAX) -> List[float]:
    if M <= 0.0:
        raise DomainException(f"truncation cap must be positive, got {M}")
    return [M * (1.0 - 2.0 ** (-k - 1)) for k in range(k_max + 1)]


def truncation_energy(series: np.ndarray, times: np.ndarray, dx: float, level: float) -> float:
    """E for one level from a (t, xi) field series."""
    series = np.asarray(series, dtype=np.float64)
    excess = np.maximum(series - level, 0.0)
    sup_part = max(integrate(row**2, dx) for row in excess)
    # derivative of the truncation is m_xi on {m > level}
    gradients = [
        integrate((centered_gradient(row, dx) * (row > level)) ** 2, dx) for row in series
    ]
    gradient_part = float(trapezoid(gradients, times)) if len(times) > 1 else 0.0
    return sup_part + gradient_part


def _report_for_cap(series: np.ndarray, times: np.ndarray, dx: float, M: float, k_max: int) -> DeGiorgiReport:
    levels = truncation_levels(M, k_max)
    energies = [truncation_energy(series, times, dx, level) for level in levels]
    converged = energies[0] == 0.0 or energies[-1] < CONVERGENCE_RATIO * energies[0]
    return DeGiorgiReport(M=M, levels=levels, energies=energies, converged=bool(converged))


def default_caps(series: np.ndarray, R: Optional[float] = None) -> List[float]:
    """Geometric caps from 2 R upward by a factor 1.25, R defaulting to the initial sup of the field."""
    series = np.asarray(series)
    R = float(np.max(np.abs(series[0]))) if R is None else R
    start = 2.0 * R if R > 0.0 else 1.0
    # the ladder reaches past the sup of the whole series
    top = float(np.max(series))
    caps = [start]
    while caps[-1] < top and len(caps) < MAX_CAPS:
        caps.append(caps[-1] * CAP_FACTOR)
    return caps


def degiorgi_report(
    series: np.ndarray,
    times: np.ndarray,
    dx: float,
    caps: Optional[Sequence[float]] = None,
    k_max: int = K_MAX,
) -> List[DeGiorgiReport]:
    """One report per cap, in the order given.

    Args:
        series:     Field m on a common grid, shape (t, xi)
        times:      Time levels of the series
        dx:         Grid spacing
        caps:       Cap grid; the geometric default starts at twice the initial sup
        k_max:      Highest truncation index

    Returns:
        Reports with levels, energies and the convergence flag of each cap
    """
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 2 or series.shape[0] != len(times):
        raise DomainException(f"series of shape {series.shape} does not match {len(times)} time levels")
    caps = default_caps(series) if caps is None else list(caps)
    reports = [_report_for_cap(series, times, dx, M, k_max) for M in caps]
    logger.debug(
        "Truncation energies computed",
        caps=len(caps),
        certified=smallest_passing_cap(reports),
        sup=float(series.max()),
    )
    return reports


def smallest_passing_cap(reports: Sequence[DeGiorgiReport]) -> Optional[float]:
    passing = [report.M for report in reports if report.converged]
    return min(passing) if passing else None


def reports_to_frame(reports: Sequence[DeGiorgiReport]) -> pd.DataFrame:
    return pd.concat([report.to_frame() for report in reports], ignore_index=True)


def density_series(states: Sequence[FieldState]) -> np.ndarray:
    return np.stack([state.n for state in states])


def reciprocal_series(states: Sequence[FieldState]) -> np.ndarray:
    """1/n along the series; a density below the vacuum floor is an error, not a large value."""
    for state in states:
        if state.min_n < VACUUM_FLOOR:
            raise VacuumException(
                f"min n = {state.min_n:.3e} below the vacuum floor at t={state.t:.6g}", snapshot=state
            )
    return 1.0 / density_series(states)


def assembled_bound(
    states: Sequence[FieldState], profile: WaveProfile, series: Optional[np.ndarray] = None
) -> AssembledBound:
    """Size R of the transport coefficients and of the initial field fed to the truncation argument.

    Sums the sup norms of |q|, |q - q_tilde|, |q_tilde| and |n_tilde - n_minus|, the L2(L2) norms of
    |q - q_tilde| and |q_tilde'|, and the sup of the initial field.
    """
    dx = profile.grid.dx
    times = np.array([state.t for state in states])
    mismatch = [state.q - profile.q_tilde for state in states]
    linf = max(
        float(np.max(np.abs(state.q) + np.abs(diff) + np.abs(profile.q_tilde)))
        for state, diff in zip(states, mismatch)
    ) + float(np.max(np.abs(profile.n_tilde - profile.end.n_minus)))
    q_prime_squared = l2_norm(profile.q_tilde_prime, dx) ** 2
    squares = [l2_norm(diff, dx) ** 2 + q_prime_squared for diff in mismatch]
    l2l2 = math.sqrt(float(trapezoid(squares, times))) if len(times) > 1 else 0.0
    initial = density_series(states)[0] if series is None else np.asarray(series)[0]
    initial_linf = float(np.max(np.abs(initial)))
    return AssembledBound(
        transport_linf=linf,
        transport_l2l2=l2l2,
        initial_linf=initial_linf,
        R=linf + l2l2 + initial_linf,
    )


def sequence_lemma_iterate(C: float, beta: float, W0: float, k_max: int = K_MAX) -> SequenceReport:
    """Extremal recursion W_{k+1} = C^k W_k^beta, iterated on logarithms.

    The sequence converges to zero exactly when the log increments eventually turn negative, which for
    this recursion is decided by the sign of the last increment.
    """
    if C <= 1.0 or beta <= 1.0:
        raise DomainException(f"need C > 1 and beta > 1, got C={C}, beta={beta}")
    if W0 <= 0.0:
        raise DomainException(f"W0 must be positive, got {W0}")
    log_c = math.log(C)
    logs = [math.log(W0)]
    for k in range(k_max):
        logs.append(k * log_c + beta * logs[-1])
        if not math.isfinite(logs[-1]):
            break
    converged = len(logs) > 1 and math.isfinite(logs[-1]) and logs[-1] < logs[-2]
    return SequenceReport(C=C, beta=beta, W0=W0, log_w=logs, converged=bool(converged))


def sequence_lemma_threshold(C: float, beta: float, k_max: int = K_MAX, steps: int = BISECTION_STEPS) -> float:
    """Bisect on log W0 for the largest seed whose recursion still converges."""
    low, high = -100.0, 10.0
    if not sequence_lemma_iterate(C, beta, math.exp(low), k_max).converged:
        raise DomainException("no convergent seed found above exp(-100)")
    for _ in range(steps):
        middle = 0.5 * (low + high)
        if sequence_lemma_iterate(C, beta, math.exp(middle), k_max).converged:
            low = middle
        else:
            high = middle
    return math.exp(low)


def sequence_lemma_closed_form(C: float, beta: float) -> float:
    """Seed threshold C^(-1/(beta-1)^2) of the extremal recursion."""
    return C ** (-1.0 / (beta - 1.0) ** 2)
