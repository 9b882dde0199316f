#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Main laboratory executable
This module contains everything required to run the laboratory from the command line:

    wavelab <kind> --config <path> [--out <dir>] [--seed <int>]
    wavelab refine --config <path> [--levels <count>] [--out <dir>] [--seed <int>]

Its '__main__' if-clause handles running it directly from a directory or IDE setting.

"""
import argparse
import sys
from typing import List, Optional

import structlog

from app.core.initializers.error_handling import initialize_error_handling
from app.core.initializers.logging import initialize_logging
from app.lab.api_models import ExperimentKind
from app.lab.controller import LabController
from app.lab.utils.config_loader import load_config
from app_config import get_setting

REFINE = "refine"

logger = structlog.get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=get_setting("APP_NAME"), description=get_setting("APP_DESCRIPTION"))
    subparsers = parser.add_subparsers(dest="command", required=True)
    for kind in ExperimentKind:
        sub = subparsers.add_parser(kind.value, help=f"run the {kind.value} experiment")
        _add_common_arguments(sub)
    refine = subparsers.add_parser(REFINE, help="refinement study of the residual diagnostics")
    _add_common_arguments(refine)
    refine.add_argument("--levels", type=int, default=None, help="refinement levels (default: from the config)")
    return parser


def _add_common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--config", required=True, help="experiment configuration file")
    parser.add_argument("--out", default=None, help="output root (default: $WAVELAB_OUT)")
    parser.add_argument("--seed", type=int, default=None, help="perturbation seed override")


@initialize_error_handling
def run_command(args: argparse.Namespace) -> int:
    controller = LabController()
    config = load_config(args.config)
    if args.command == REFINE:
        config = config.with_overrides(seed=args.seed)
        levels = args.levels or config.experiment.refinement_levels
        result = controller.run_refinement(config, levels, args.out)
    else:
        config = config.with_overrides(kind=ExperimentKind(args.command), seed=args.seed)
        result = controller.run_experiment(config, args.out)

    print(result.model_dump_json())
    return result.exit_status


def main(argv: Optional[List[str]] = None) -> int:
    # Enable logging
    initialize_logging()
    args = build_parser().parse_args(argv)
    logger.debug("Command line parsed", command=args.command, config=args.config)
    return run_command(args)


if __name__ == "__main__":
    sys.exit(main())
