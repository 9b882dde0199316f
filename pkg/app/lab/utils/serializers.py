#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from pathlib import Path
from typing import Dict, Sequence

import pandas as pd
import xarray as xr

FLOAT_FORMAT = "%.17g"


def frame_to_csv_text(frame: pd.DataFrame) -> str:
    """Comma separated, header row, 17 significant digits, LF line endings."""
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def to_csv(frame: pd.DataFrame, path: Path) -> Path:
    # "x" refuses to overwrite: run directories are written once
    with open(path, "x", encoding="utf-8", newline="") as handle:
        handle.write(frame_to_csv_text(frame))
    return path


def snapshots_to_frame(snapshots: xr.Dataset, variables: Sequence[str] = ("n", "q")) -> pd.DataFrame:
    """Long format: one row per (t, xi) with the requested fields."""
    frame = snapshots[list(variables)].to_dataframe().reset_index()
    return frame[["t", "xi", *variables]]


def checks_to_frame(checks: Dict[str, bool]) -> pd.DataFrame:
    return pd.DataFrame({"check": list(checks), "passed": [bool(value) for value in checks.values()]})
