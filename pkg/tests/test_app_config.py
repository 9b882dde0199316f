#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import numpy as np

from app.core.initializers.error_handling import handle_lab_exception, initialize_error_handling
from app.lab.exceptions import (
    ConfigParseException,
    DomainException,
    StabilityException,
    VacuumException,
)
from app.lab.physics.fields import FieldState, Grid
from app_config import get_setting


def test_get_setting(monkeypatch, tmp_path):
    # TEST 1: The environment redirects the output root at call time
    monkeypatch.setenv("WAVELAB_OUT", str(tmp_path))
    assert get_setting("WAVELAB_OUT") == str(tmp_path)

    # TEST 2: Unknown keys
    assert get_setting("NOT_A_SETTING") is None
    assert get_setting("WAVELAB_MAX_WORKERS") >= 1


def test_exit_codes():
    assert DomainException().exit_code == 3
    assert StabilityException().detail == "time step violates the stability bound"
    assert ConfigParseException("bad", line=4).detail == "line 4: bad"
    assert ConfigParseException().exit_code == 2


def test_handle_lab_exception():
    grid = Grid(xi_min=-1.0, xi_max=1.0, n_points=3)
    snapshot = FieldState(t=2.5, grid=grid, n=np.array([1.0, 0.0, 1.0]), q=np.zeros(3))
    assert handle_lab_exception(VacuumException(snapshot=snapshot)) == 5
    assert handle_lab_exception(ConfigParseException("bad", line=2)) == 2


def test_initialize_error_handling():
    @initialize_error_handling
    def failing() -> int:
        raise StabilityException("dt too large")

    @initialize_error_handling
    def succeeding() -> int:
        return 0

    assert failing() == 6
    assert succeeding() == 0
