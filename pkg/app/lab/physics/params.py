#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""End-state algebra of the viscous shock.

Every admissible configuration is reduced to the canonical case n_minus > n_plus > 0, nu = 1: a
reflection x -> -x handles n_plus > n_minus and the (t, x) -> (nu t, nu x) scaling handles nu != 1.
"""

import math
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog
from pydantic import ConfigDict, Field, model_validator

from app.core.base_model import BaseModel, ReportModel
from app.lab.exceptions import DomainException
from app.lab.physics.fields import FieldState, Grid

RH_TOLERANCE = 1e-12
DEFAULT_KAPPA_FRACTION = 0.9

logger = structlog.get_logger(__name__)


class EndStates(BaseModel):
    n_minus: float = Field(..., gt=0.0, description="density at minus infinity")
    n_plus: float = Field(..., gt=0.0, description="density at plus infinity")
    q_minus: float
    q_plus: float
    sigma: float
    epsilon: float
    nu: float = Field(1.0, gt=0.0)

    @model_validator(mode="after")
    def _distinct_states(self):
        if self.n_minus == self.n_plus:
            raise ValueError("n_minus and n_plus must differ")
        return self

    @property
    def is_canonical(self) -> bool:
        return self.n_minus > self.n_plus and self.sigma > 0.0

    @property
    def mid_density(self) -> float:
        return 0.5 * (self.n_minus + self.n_plus)

    def q_of_density(self, density):
        """Flux variable along the wave, from the integrated second equation."""
        return self.q_minus - (density - self.n_minus) / self.sigma


class TheoremConstants(BaseModel):
    kappa: float
    lambda_: float = Field(..., alias="lambda")

    model_config = ConfigDict(populate_by_name=True)


class AdmissibilityReport(ReportModel):
    checks: Dict[str, bool]
    messages: List[str] = []
    case: Optional[str] = None
    theorem_window_satisfiable: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]


def _require_densities(n_minus: float, n_plus: float):
    if n_minus <= 0.0 or n_plus <= 0.0:
        raise DomainException(
            f"end-state densities must be positive, got n_minus={n_minus}, n_plus={n_plus}"
        )
    if n_minus == n_plus:
        raise DomainException(f"degenerate end states: n_minus = n_plus = {n_minus}")


def compute_sigma(n_minus: float, n_plus: float, q_minus: float) -> float:
    """Wave speed from the quadratic sigma^2 + q_minus sigma - n_plus = 0.

    The root is the positive one when n_minus > n_plus and the negative one otherwise. Each root is
    evaluated in the form free of cancellation; the two roots multiply to -n_plus.

    Args:
        n_minus:    Density at minus infinity
        n_plus:     Density at plus infinity
        q_minus:    Flux variable at minus infinity

    Returns:
        The wave speed sigma
    """
    _require_densities(n_minus, n_plus)
    root = math.sqrt(q_minus * q_minus + 4.0 * n_plus)
    if n_minus > n_plus:
        if q_minus <= 0.0:
            return 0.5 * (-q_minus + root)
        return 2.0 * n_plus / (q_minus + root)
    if q_minus >= 0.0:
        return -0.5 * (q_minus + root)
    return -2.0 * n_plus / (root - q_minus)


def compute_q_plus(n_minus: float, n_plus: float, q_minus: float, sigma: float) -> float:
    if sigma == 0.0:
        raise DomainException("wave speed sigma must be nonzero")
    _require_densities(n_minus, n_plus)
    return q_minus + (n_minus - n_plus) / sigma


def make_end_states(n_minus: float, n_plus: float, q_minus: float, nu: float = 1.0) -> EndStates:
    """Complete (n_minus, n_plus, q_minus) with the derived speed, q_plus and shock strength."""
    if nu <= 0.0:
        raise DomainException(f"viscosity nu must be positive, got {nu}")
    sigma = compute_sigma(n_minus, n_plus, q_minus)
    q_plus = compute_q_plus(n_minus, n_plus, q_minus, sigma)
    return EndStates(
        n_minus=n_minus,
        n_plus=n_plus,
        q_minus=q_minus,
        q_plus=q_plus,
        sigma=sigma,
        epsilon=n_minus - n_plus,
        nu=nu,
    )


def rankine_hugoniot_residuals(end: EndStates) -> Tuple[float, float]:
    """Relative residuals of the two jump relations.

    Each residual is scaled by the magnitudes of the one-sided fluxes entering it, before the
    differences across the shock are taken. Near-equal densities make those differences O(epsilon)
    while q_plus carries an O(|q| ulp) rounding error.
    """
    mass_terms = (
        end.sigma * (end.n_plus - end.n_minus),
        end.n_plus * end.q_plus,
        end.n_minus * end.q_minus,
    )
    mass = -mass_terms[0] - (mass_terms[1] - mass_terms[2])
    mass_scale = abs(end.sigma) * (abs(end.n_plus) + abs(end.n_minus)) + abs(mass_terms[1]) + abs(mass_terms[2])
    mass_scale = max(mass_scale, np.finfo(float).tiny)

    flux = -end.sigma * (end.q_plus - end.q_minus) - (end.n_plus - end.n_minus)
    flux_scale = abs(end.sigma) * (abs(end.q_plus) + abs(end.q_minus)) + abs(end.n_plus) + abs(end.n_minus)
    flux_scale = max(flux_scale, np.finfo(float).tiny)
    return abs(mass) / mass_scale, abs(flux) / flux_scale


def theorem_window(n_minus: float) -> float:
    """Upper end of the admissible kappa interval."""
    return min(n_minus / 15.0, 1.0 / 8.0)


def validate_end_states(end: EndStates) -> AdmissibilityReport:
    checks = {
        "positive_densities": end.n_minus > 0.0 and end.n_plus > 0.0,
        "distinct_densities": end.n_minus != end.n_plus,
        "positive_viscosity": end.nu > 0.0,
    }
    messages = []
    mass_residual, flux_residual = rankine_hugoniot_residuals(end)
    checks["rankine_hugoniot_mass"] = mass_residual < RH_TOLERANCE
    checks["rankine_hugoniot_flux"] = flux_residual < RH_TOLERANCE
    checks["lax_ordering"] = end.q_minus < end.q_plus
    checks["speed_sign"] = (end.sigma > 0.0) == (end.n_minus > end.n_plus)

    if end.n_minus > end.n_plus:
        case = "n_minus>n_plus"
        canonical_n_minus, strength = end.n_minus, end.epsilon
    else:
        case = "n_minus<n_plus"
        canonical_n_minus, strength = end.n_plus, -end.epsilon
        messages.append("admissible after reflection x -> -x")

    # kappa must fit strictly between the shock strength and the window end
    window = theorem_window(canonical_n_minus)
    satisfiable = strength < window
    if not satisfiable:
        messages.append(
            f"no kappa satisfies epsilon={strength:.6g} < kappa < min(n_minus/15, 1/8)={window:.6g}"
        )
    return AdmissibilityReport(
        checks=checks, messages=messages, case=case, theorem_window_satisfiable=satisfiable
    )


def assess_end_states(
    n_minus: float, n_plus: float, q_minus: float, nu: float = 1.0
) -> AdmissibilityReport:
    """Admissibility of raw inputs; degenerate or nonpositive data yield a failing report."""
    try:
        end = make_end_states(n_minus, n_plus, q_minus, nu)
    except DomainException as exc:
        checks = {
            "positive_densities": n_minus > 0.0 and n_plus > 0.0,
            "distinct_densities": n_minus != n_plus,
            "positive_viscosity": nu > 0.0,
        }
        return AdmissibilityReport(checks=checks, messages=[exc.detail])
    return validate_end_states(end)


def default_theorem_constants(end: EndStates) -> TheoremConstants:
    """kappa = 0.9 min(n_minus/15, 1/8) and lambda the geometric mean of the window ends."""
    kappa = DEFAULT_KAPPA_FRACTION * theorem_window(end.n_minus)
    return TheoremConstants(kappa=kappa, lambda_=math.sqrt(abs(end.epsilon)))


def check_theorem_constants(end: EndStates, tc: TheoremConstants) -> AdmissibilityReport:
    kappa, lam, epsilon = tc.kappa, tc.lambda_, end.epsilon
    window = theorem_window(end.n_minus)
    root_kappa = math.sqrt(kappa) if kappa > 0.0 else 0.0
    checks = {
        "0 < kappa": kappa > 0.0,
        "kappa < min(n_minus/15, 1/8)": kappa < window,
        "0 < epsilon": epsilon > 0.0,
        "epsilon < kappa": epsilon < kappa,
        "epsilon/sqrt(kappa) < lambda": root_kappa > 0.0 and epsilon / root_kappa < lam,
        "lambda < sqrt(kappa)": lam < root_kappa,
    }
    messages = []
    if not checks["kappa < min(n_minus/15, 1/8)"]:
        messages.append(f"kappa={kappa:.6g} >= min(n_minus/15, 1/8)={window:.6g}")
    if not checks["epsilon < kappa"]:
        messages.append(f"epsilon={epsilon:.6g} >= kappa={kappa:.6g}")
    if root_kappa > 0.0 and not checks["epsilon/sqrt(kappa) < lambda"]:
        messages.append(f"epsilon/sqrt(kappa)={epsilon / root_kappa:.6g} >= lambda={lam:.6g}")
    if not checks["lambda < sqrt(kappa)"]:
        messages.append(f"lambda={lam:.6g} >= sqrt(kappa)={root_kappa:.6g}")
    return AdmissibilityReport(checks=checks, messages=messages)


def mirror_end_states(end: EndStates) -> EndStates:
    # (n, q)(x) -> (n, -q)(-x) swaps the two sides and flips the speed
    return EndStates(
        n_minus=end.n_plus,
        n_plus=end.n_minus,
        q_minus=-end.q_plus,
        q_plus=-end.q_minus,
        sigma=-end.sigma,
        epsilon=-end.epsilon,
        nu=end.nu,
    )


def reflect_problem(end: EndStates, inverse: bool = False) -> EndStates:
    """Reflect a configuration with n_plus > n_minus onto the canonical side.

    Args:
        end:        End states to reflect
        inverse:    Map a canonical configuration back to its original orientation instead

    Returns:
        The reflected end states; sigma changes sign and the roles of the two sides swap
    """
    if inverse:
        if not end.is_canonical:
            raise DomainException("inverse reflection expects canonical end states")
    elif end.n_minus > end.n_plus:
        raise DomainException("end states are already canonical (n_minus > n_plus)")
    return mirror_end_states(end)


def canonicalize(end: EndStates) -> Tuple[EndStates, bool]:
    if end.n_minus > end.n_plus:
        return end, False
    logger.debug("Reflecting end states onto the canonical side", n_minus=end.n_minus, n_plus=end.n_plus)
    return reflect_problem(end), True


def reflect_state(state: FieldState) -> FieldState:
    grid = state.grid.model_copy(update={"xi_min": -state.grid.xi_max, "xi_max": -state.grid.xi_min})
    return FieldState(t=state.t, grid=grid, n=state.n[::-1].copy(), q=-state.q[::-1])


def scale_solution(nu: float, state: FieldState, target_grid: Optional[Grid] = None) -> FieldState:
    """Map a state of the nu-system onto the nu = 1 system.

    With U(t, x) = U_nu(nu t, nu x), a nu-system snapshot taken at time tau on the nodes y becomes the
    unit-viscosity snapshot at time tau/nu on the nodes y/nu. Values are unchanged; with a target grid
    they are linearly interpolated onto it.
    """
    if nu <= 0.0:
        raise DomainException(f"viscosity nu must be positive, got {nu}")
    grid = state.grid.model_copy(
        update={"xi_min": state.grid.xi_min / nu, "xi_max": state.grid.xi_max / nu}
    )
    scaled = FieldState(t=state.t / nu, grid=grid, n=state.n.copy(), q=state.q.copy())
    if target_grid is None:
        return scaled
    xi = target_grid.xi
    return FieldState(
        t=scaled.t,
        grid=target_grid,
        n=np.interp(xi, grid.xi, scaled.n),
        q=np.interp(xi, grid.xi, scaled.q),
    )


class SweepReport(ReportModel):
    samples: int
    max_mass_residual: float
    max_flux_residual: float
    sign_case_mismatches: int
    lax_violations: int

    @property
    def passed(self) -> bool:
        return (
            max(self.max_mass_residual, self.max_flux_residual) < RH_TOLERANCE
            and self.sign_case_mismatches == 0
            and self.lax_violations == 0
        )


def random_end_states(samples: int, seed: int = 0) -> List[EndStates]:
    """Densities log-uniform in [1e-2, 1e2] and q_minus uniform in [-5, 5]."""
    rng = np.random.default_rng(seed)
    densities = np.exp(rng.uniform(math.log(1e-2), math.log(1e2), (samples, 2)))
    q_minus = rng.uniform(-5.0, 5.0, samples)
    return [
        make_end_states(float(n_minus), float(n_plus), float(q))
        for (n_minus, n_plus), q in zip(densities, q_minus)
        if n_minus != n_plus
    ]


def rankine_hugoniot_sweep(samples: int = 10_000, seed: int = 0) -> SweepReport:
    """Jump-relation residuals and sign cases over random end states."""
    mass, flux, mismatches, lax = 0.0, 0.0, 0, 0
    states = random_end_states(samples, seed)
    for end in states:
        mass_residual, flux_residual = rankine_hugoniot_residuals(end)
        mass, flux = max(mass, mass_residual), max(flux, flux_residual)
        mismatches += (end.sigma > 0.0) != (end.n_minus > end.n_plus)
        lax += not end.q_minus < end.q_plus
    return SweepReport(
        samples=len(states),
        max_mass_residual=mass,
        max_flux_residual=flux,
        sign_case_mismatches=int(mismatches),
        lax_violations=int(lax),
    )
