#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from typing import Any


class WaveLabException(Exception):
    """Root of every error raised by the laboratory.

    Each subclass carries a human readable ``detail`` and the process ``exit_code`` the command line
    reports when the error escapes an experiment.
    """

    default_detail = "wavelab error"
    exit_code = 1

    def __init__(self, detail: Any = None):
        self.detail = detail or self.default_detail
        super().__init__(self.detail)


class ConfigException(WaveLabException):
    default_detail = "invalid configuration"
    exit_code = 2
