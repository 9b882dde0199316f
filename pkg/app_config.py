#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import os


class BaseConfig(object):
    """ Base configuration class

    This class holds and/or gathers all of the laboratory's process-wide settings.
    Experiment settings live in the experiment configuration files instead.

    """

    APP_NAME = os.environ.get("APP_NAME", "wavelab")
    APP_DESCRIPTION = os.environ.get(
        "APP_DESCRIPTION", """Viscous-shock laboratory for the 1D chemotaxis system"""
    )
    APP_VERSION = os.environ.get("APP_VERSION", "1.0.0")
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO")

    # The following two parameters determine the active configuration
    CI = os.environ.get("CI", False)
    DEBUG = os.environ.get("DEBUG", False)

    WAVELAB_OUT = os.environ.get("WAVELAB_OUT", "./runs")
    WAVELAB_MAX_WORKERS = int(os.environ.get("WAVELAB_MAX_WORKERS", 2))


class LocalConfig(BaseConfig):
    pass


class LocalDebugConfig(LocalConfig):
    DEBUG = True
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "DEBUG")


class CIConfig(BaseConfig):
    CI = True
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING")
    WAVELAB_MAX_WORKERS = int(os.environ.get("WAVELAB_MAX_WORKERS", 1))


_active_config = None


def get_active_config():
    """Retrieve the active configuration.

    The active configuration is based on the CI and DEBUG
    environment variables. The active config is set once and returned
    for each subsequent call.

    Returns:
        Active configuration
    """
    global _active_config

    is_ci = os.environ.get("CI", False)
    is_debug = os.environ.get("DEBUG", False)

    if _active_config is None:
        if is_ci:
            _active_config = CIConfig
        elif is_debug:
            _active_config = LocalDebugConfig
        else:
            _active_config = LocalConfig

    return _active_config


def get_setting(key: str):
    """Return value set for key.

    WAVELAB_OUT is read from the environment at call time, ahead of the cached class attribute.

    Args:
        key (str): key of configuration setting

    Returns:
        value if key exists, None otherwise
    """
    if key == "WAVELAB_OUT" and os.environ.get("WAVELAB_OUT"):
        return os.environ["WAVELAB_OUT"]
    active_config = get_active_config()
    return getattr(active_config, key, None)
