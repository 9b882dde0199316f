#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Run every acceptance configuration under configs/ and report one line per run.

The refinement configuration is run as a refinement study; every other one as its configured kind.
"""
import sys
from pathlib import Path

import structlog

from app.core.initializers.logging import initialize_logging
from app.lab.controller import LabController
from app.lab.utils.config_loader import load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
REFINEMENT_CONFIGS = ("c06_refinement.ini",)

if __name__ == "__main__":
    initialize_logging()
    logger = structlog.get_logger(__name__)
    controller = LabController()
    out_root = sys.argv[1] if len(sys.argv) > 1 else None

    failures = 0
    for path in sorted(CONFIGS.glob("*.ini")):
        config = load_config(path)
        if path.name in REFINEMENT_CONFIGS:
            result = controller.run_refinement(config, config.experiment.refinement_levels, out_root)
        else:
            result = controller.run_experiment(config, out_root)
        failures += not result.passed
        logger.info("Acceptance run", config=path.name, exit_status=result.exit_status, run_dir=result.run_dir)
        print(f"{path.name:<40} {'pass' if result.passed else 'FAIL'}  {result.detail or ''}")

    sys.exit(1 if failures else 0)
