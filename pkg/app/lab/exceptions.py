#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from typing import Any

from app.core.errors.exceptions import ConfigException, WaveLabException


class DomainException(WaveLabException):
    default_detail = "input outside the admissible domain"
    exit_code = 3


class ResolutionException(WaveLabException):
    default_detail = "grid spacing too coarse to resolve the wave width"
    exit_code = 4


class TailException(WaveLabException):
    default_detail = "domain too short for the profile tail tolerance"
    exit_code = 4


class VacuumException(WaveLabException):
    exit_code = 5

    def __init__(self, detail: Any = None, snapshot=None):
        self.snapshot = snapshot
        super().__init__(detail or "density fell below the vacuum floor")


class StabilityException(WaveLabException):
    default_detail = "time step violates the stability bound"
    exit_code = 6


class GridMismatchException(WaveLabException):
    default_detail = "fields live on different grids"
    exit_code = 3


class ConfigParseException(ConfigException):
    def __init__(self, detail: Any = None, line: int = None):
        self.line = line
        detail = detail or "malformed configuration file"
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)


class ConfigValidationException(ConfigException):
    pass


class UnknownExperimentException(WaveLabException):
    default_detail = "unknown experiment kind"
    exit_code = 2
