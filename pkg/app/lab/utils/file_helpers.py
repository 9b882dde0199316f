#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from datetime import datetime
from pathlib import Path
from typing import Union

import pandas as pd
import structlog

from app.lab.utils.serializers import to_csv

logger = structlog.get_logger(__name__)


class RunDirectory:
    """A directory owned by one run; created fresh and never written twice."""

    def __init__(self, root: Union[str, Path], kind: str, seed: int = 0):
        root = Path(root)
        root.mkdir(parents=True, exist_ok=True)
        stamp = datetime.utcnow().strftime("%Y%m%dT%H%M%S")
        base = f"{kind}-{stamp}-seed{seed}"
        suffix = 0
        while True:
            name = base if suffix == 0 else f"{base}-{suffix}"
            try:
                (root / name).mkdir()
                break
            except FileExistsError:
                suffix += 1
        self.path = (root / name).resolve()
        self.run_id = name
        logger.info("Created run directory", path=str(self.path))

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        return to_csv(frame, self.path / name)

    def write_text(self, name: str, text: str) -> Path:
        path = self.path / name
        with open(path, "x", encoding="utf-8", newline="") as handle:
            handle.write(text)
        return path

    def files(self):
        return sorted(path.name for path in self.path.iterdir())
