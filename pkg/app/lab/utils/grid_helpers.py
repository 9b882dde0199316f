#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import numpy as np
from scipy.integrate import trapezoid


def centered_gradient(values: np.ndarray, dx: float) -> np.ndarray:
    """Second-order centered first derivative; second-order one-sided stencils at the two ends."""
    return np.gradient(values, dx, edge_order=2)


def second_difference(values: np.ndarray, dx: float) -> np.ndarray:
    # zero at the two boundary nodes
    result = np.zeros_like(values)
    result[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / dx**2
    return result


def integrate(values: np.ndarray, dx: float) -> float:
    return float(trapezoid(values, dx=dx))


def l2_norm(values: np.ndarray, dx: float) -> float:
    return float(np.sqrt(integrate(values**2, dx)))


def l1_norm(values: np.ndarray, dx: float) -> float:
    return integrate(np.abs(values), dx)


def shifted_samples(
    xi: np.ndarray, values: np.ndarray, shift: float, left: float, right: float
) -> np.ndarray:
    """Sample ``values(xi - shift)`` by linear interpolation, extending the tails by the end states."""
    return np.interp(xi - shift, xi, values, left=left, right=right)


def resample(xi_from: np.ndarray, values: np.ndarray, xi_to: np.ndarray) -> np.ndarray:
    # constant extension outside the source grid
    return np.interp(xi_to, xi_from, values)


def observed_order(errors, ratio: float = 2.0) -> np.ndarray:
    """Observed convergence orders between consecutive refinement levels.

    Args:
        errors:     Error magnitudes ordered from coarsest to finest level
        ratio:      Spatial refinement ratio between two consecutive levels

    Returns:
        One order per consecutive pair; NaN where either error is zero
    """
    errors = np.asarray(errors, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log(errors[:-1] / errors[1:]) / np.log(ratio)
    return np.where(np.isfinite(orders), orders, np.nan)
