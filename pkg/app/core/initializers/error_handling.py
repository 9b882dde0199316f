#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from functools import wraps
from typing import Callable

import structlog

from app.core.errors.exceptions import WaveLabException

logger = structlog.get_logger(__name__)


def handle_lab_exception(exc: WaveLabException) -> int:
    body = {"detail": exc.detail, "error": type(exc).__name__}
    snapshot = getattr(exc, "snapshot", None)
    if snapshot is not None:
        body["snapshot_t"] = snapshot.t
        body["snapshot_min_n"] = float(snapshot.n.min())
    line = getattr(exc, "line", None)
    if line is not None:
        body["line"] = line

    logger.error("Experiment aborted", **body)
    return exc.exit_code


def initialize_error_handling(command: Callable[..., int]) -> Callable[..., int]:
    """Wrap a command so laboratory errors become exit statuses instead of tracebacks."""

    @wraps(command)
    def guarded(*args, **kwargs) -> int:
        try:
            return command(*args, **kwargs)
        except WaveLabException as exc:
            return handle_lab_exception(exc)

    return guarded
