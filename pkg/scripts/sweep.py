#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

"""Seed sweep of one configuration through the process pool.

    python scripts/sweep.py <config> <first seed> <count> [out root]
"""
import sys

from app.core.initializers.logging import initialize_logging
from app.lab.controller import run_sweep
from app.lab.utils.config_loader import load_config

if __name__ == "__main__":
    initialize_logging()
    path, first, count = sys.argv[1], int(sys.argv[2]), int(sys.argv[3])
    out_root = sys.argv[4] if len(sys.argv) > 4 else None

    base = load_config(path)
    configs = [base.with_overrides(seed=seed) for seed in range(first, first + count)]
    results = run_sweep(configs, out_root)
    for config, result in zip(configs, results):
        print(f"seed {config.perturbation.seed:>6}  exit {result.exit_status}  {result.run_dir}")
    sys.exit(max(result.exit_status for result in results))
