#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

from pydantic import BaseModel as PydanticBaseModel
from pydantic import ConfigDict


class BaseModel(PydanticBaseModel):
    model_config = ConfigDict(from_attributes=True, frozen=True, extra="forbid")


class ReportModel(BaseModel):
    """Base for diagnostic reports; adds a flat dict view used by the CSV and summary writers."""

    def as_row(self) -> dict:
        return self.model_dump()
