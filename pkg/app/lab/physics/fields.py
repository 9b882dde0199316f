#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np
import xarray as xr
from pydantic import field_validator, model_validator

from app.core.base_model import BaseModel
from app.lab.exceptions import DomainException, GridMismatchException

VACUUM_FLOOR = 1e-12


class Frame(str, Enum):
    moving = "moving"
    fixed = "fixed"


class Grid(BaseModel):
    """Uniform grid over the traveling coordinate (moving frame) or the space coordinate (fixed frame)."""

    xi_min: float
    xi_max: float
    n_points: int
    frame: Frame = Frame.moving

    @field_validator("n_points")
    @classmethod
    def _enough_points(cls, value: int) -> int:
        if value < 3:
            raise ValueError("a grid needs at least 3 points")
        return value

    @model_validator(mode="after")
    def _straddles_origin(self):
        if not self.xi_min < 0.0 < self.xi_max:
            raise ValueError("grid must satisfy xi_min < 0 < xi_max")
        return self

    @property
    def dx(self) -> float:
        return (self.xi_max - self.xi_min) / (self.n_points - 1)

    @property
    def xi(self) -> np.ndarray:
        return np.linspace(self.xi_min, self.xi_max, self.n_points)

    def refined(self, factor: int = 2) -> "Grid":
        return self.model_copy(update={"n_points": factor * (self.n_points - 1) + 1})

    def coarsened(self, factor: int = 2) -> "Grid":
        """Every factor-th node of this grid."""
        if (self.n_points - 1) % factor or (self.n_points - 1) // factor < 2:
            raise DomainException(f"{self.n_points} points cannot be coarsened by {factor}")
        return self.model_copy(update={"n_points": (self.n_points - 1) // factor + 1})

    def extended(self) -> "Grid":
        """Twice the extent at the same spacing."""
        return self.model_copy(
            update={
                "xi_min": 2.0 * self.xi_min,
                "xi_max": 2.0 * self.xi_max,
                "n_points": 2 * (self.n_points - 1) + 1,
            }
        )

    def as_fixed(self) -> "Grid":
        return self.model_copy(update={"frame": Frame.fixed})


@dataclass(frozen=True)
class FieldState:
    t: float
    grid: Grid
    n: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        if self.n.shape != (self.grid.n_points,) or self.q.shape != (self.grid.n_points,):
            raise GridMismatchException(
                f"field lengths {self.n.shape}/{self.q.shape} do not match {self.grid.n_points} grid points"
            )

    @property
    def min_n(self) -> float:
        return float(self.n.min())

    def evolved(self, t: float, n: np.ndarray, q: np.ndarray) -> "FieldState":
        return replace(self, t=t, n=n, q=q)


@dataclass(frozen=True)
class KSState:
    t: float
    grid: Grid
    n: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        if self.n.shape != (self.grid.n_points,) or self.c.shape != (self.grid.n_points,):
            raise GridMismatchException(
                f"field lengths {self.n.shape}/{self.c.shape} do not match {self.grid.n_points} grid points"
            )
        if np.any(self.c <= 0.0):
            raise DomainException("concentration must stay strictly positive")


def same_grid(first: Grid, second: Grid) -> bool:
    return (
        first.n_points == second.n_points
        and np.isclose(first.xi_min, second.xi_min, rtol=0.0, atol=1e-12 * abs(first.xi_min))
        and np.isclose(first.xi_max, second.xi_max, rtol=0.0, atol=1e-12 * abs(first.xi_max))
    )


def require_same_grid(first: Grid, second: Grid):
    if not same_grid(first, second):
        raise GridMismatchException(
            f"grid [{first.xi_min}, {first.xi_max}]x{first.n_points} does not match "
            f"[{second.xi_min}, {second.xi_max}]x{second.n_points}"
        )


def states_to_dataset(states: Sequence, variables: Sequence[str] = ("n", "q")) -> xr.Dataset:
    """Stack snapshots on a common grid into a ``(t, xi)`` dataset."""
    if len(states) == 0:
        raise DomainException("an empty snapshot series cannot be stacked")
    grid = states[0].grid
    for state in states[1:]:
        require_same_grid(grid, state.grid)
    data_vars = {
        name: (["t", "xi"], np.stack([getattr(state, name) for state in states]))
        for name in variables
    }
    ds = xr.Dataset(
        data_vars=data_vars,
        coords={"t": [state.t for state in states], "xi": grid.xi},
    )
    ds.attrs.update(
        {
            "xi_min": grid.xi_min,
            "xi_max": grid.xi_max,
            "n_points": grid.n_points,
            "frame": grid.frame.value,
        }
    )
    return ds


def dataset_grid(ds: xr.Dataset) -> Grid:
    return Grid(
        xi_min=ds.attrs["xi_min"],
        xi_max=ds.attrs["xi_max"],
        n_points=ds.attrs["n_points"],
        frame=Frame(ds.attrs["frame"]),
    )


def dataset_to_states(ds: xr.Dataset):
    grid = dataset_grid(ds)
    return [
        FieldState(
            t=float(ds["t"].values[index]),
            grid=grid,
            n=ds["n"].values[index].copy(),
            q=ds["q"].values[index].copy(),
        )
        for index in range(ds.sizes["t"])
    ]
