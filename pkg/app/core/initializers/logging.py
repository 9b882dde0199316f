#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import logging
import logging.config

import structlog

from app_config import get_setting


def add_application_metadata(logger, method_name, event_dict):
    if "app_name" not in event_dict:
        event_dict["app_name"] = get_setting("APP_NAME")
    if "app_version" not in event_dict:
        event_dict["app_version"] = get_setting("APP_VERSION")

    return event_dict


def initialize_logging(level: str = None):
    timestamper = structlog.processors.TimeStamper(fmt="iso")
    level = level or get_setting("LOG_LEVEL")

    shared_processors = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        add_application_metadata,
        timestamper,
        structlog.processors.UnicodeDecoder(),
    ]

    # JSON lines on stderr; stdout stays free for command output
    logging.captureWarnings(True)
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "json": {
                    "()": structlog.stdlib.ProcessorFormatter,
                    "processors": [
                        structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                        structlog.processors.JSONRenderer(),
                    ],
                    "foreign_pre_chain": shared_processors,
                }
            },
            "handlers": {
                "default": {
                    "level": level,
                    "class": "logging.StreamHandler",
                    "formatter": "json",
                }
            },
            "loggers": {
                "": {
                    "handlers": ["default"],
                    "level": level,
                    "propagate": True,
                }
            },
        }
    )

    structlog.configure(
        processors=[structlog.stdlib.filter_by_level]
        + shared_processors
        + [structlog.stdlib.ProcessorFormatter.wrap_for_formatter],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def bind_run_context(run_id: str, kind: str):
    """Attach the run identifier and experiment kind to every event logged in this context."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(run_id=run_id, experiment=kind)
