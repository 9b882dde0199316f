#!/usr/bin/env python
# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2021 WaveLab contributors
#
# SPDX-License-Identifier: MPL-2.0

import configparser
import re
from pathlib import Path
from typing import Dict, Optional, Union

import structlog
from pydantic import ValidationError

from app.lab.api_models import ExperimentConfig, ExperimentKind
from app.lab.exceptions import ConfigParseException, ConfigValidationException, DomainException
from app.lab.physics.params import (
    TheoremConstants,
    assess_end_states,
    canonicalize,
    check_theorem_constants,
    default_theorem_constants,
    make_end_states,
)

SECTIONS = ("end_states", "constants", "grid", "time", "perturbation", "experiment")
# kinds whose conclusions need the smallness window on kappa, lambda
WINDOW_KINDS = (ExperimentKind.evolve, ExperimentKind.contraction)

logger = structlog.get_logger(__name__)


def _line_of(lines, section: str, key: Optional[str] = None) -> Optional[int]:
    current = None
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        header = re.match(r"^\[(.+)\]$", stripped)
        if header:
            current = header.group(1).strip()
            if key is None and current == section:
                return number
            continue
        if key is not None and current == section and re.match(rf"^{re.escape(key)}\s*[=:]", stripped, re.I):
            return number
    return None


def _parse(text: str) -> Dict[str, Dict[str, str]]:
    parser = configparser.ConfigParser(
        comment_prefixes=("#",), inline_comment_prefixes=("#",), interpolation=None
    )
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigParseException("key outside of any [section]", line=e.lineno)
    except configparser.ParsingError as e:
        line, content = e.errors[0]
        raise ConfigParseException(f"expected 'key = value', got {content.strip()}", line=line)
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as e:
        raise ConfigParseException(e.message, line=e.lineno)
    return {section: dict(parser.items(section)) for section in parser.sections()}


def _validation_detail(error: ValidationError, lines) -> ConfigValidationException:
    first = error.errors()[0]
    location = [str(part) for part in first["loc"]]
    section = location[0] if location else None
    key = location[1] if len(location) > 1 else None
    line = _line_of(lines, section, key) if section and key else None
    where = ".".join(location)
    message = f"{where}: {first['msg']}"
    if line is not None:
        message = f"line {line}: {message}"
    return ConfigValidationException(message)


def _echo_defaults(raw: Dict[str, Dict[str, str]], config: ExperimentConfig):
    # kappa and lambda depend on the end states and are echoed once resolved
    for section in SECTIONS[2:] + SECTIONS[:1]:
        block = getattr(config, section)
        given = raw.get(section, {})
        for name, field in type(block).model_fields.items():
            key = field.alias or name
            if key not in given:
                logger.info("config default applied", section=section, key=key, value=getattr(block, name))


def validate_config(config: ExperimentConfig) -> ExperimentConfig:
    """Check the module preconditions a configuration implies and fill the derived defaults.

    End states must be admissible; kappa and lambda default from the canonical end states, kappa must
    stay below min(n_minus/15, 1/8), and evolution kinds need the full window on (epsilon, kappa, lambda).
    """
    block = config.end_states
    report = assess_end_states(block.n_minus, block.n_plus, block.q_minus, block.nu)
    if not report.passed:
        raise ConfigValidationException(
            f"end states not admissible: {', '.join(report.failed)}; {'; '.join(report.messages)}"
        )
    end, reflected = canonicalize(make_end_states(block.n_minus, block.n_plus, block.q_minus, block.nu))
    if reflected:
        logger.info("Reflecting end states for the run", n_minus=end.n_minus, n_plus=end.n_plus)

    defaults = default_theorem_constants(end)
    constants = config.constants
    if constants.kappa is None:
        logger.info("config default applied", section="constants", key="kappa", value=defaults.kappa)
    if constants.lambda_ is None:
        logger.info("config default applied", section="constants", key="lambda", value=defaults.lambda_)
    constants = constants.model_copy(
        update={
            "kappa": defaults.kappa if constants.kappa is None else constants.kappa,
            "lambda_": defaults.lambda_ if constants.lambda_ is None else constants.lambda_,
        }
    )
    config = config.model_copy(update={"constants": constants})

    checks = check_theorem_constants(end, TheoremConstants(kappa=constants.kappa, lambda_=constants.lambda_))
    required = ["0 < kappa", "kappa < min(n_minus/15, 1/8)"]
    if config.experiment.kind in WINDOW_KINDS:
        required = list(checks.checks)
    violated = [name for name in required if not checks.checks[name]]
    if violated:
        raise ConfigValidationException(
            f"theorem constants violate {', '.join(violated)}; {'; '.join(checks.messages)}"
        )

    if config.time.output_every > config.time.t_end:
        raise ConfigValidationException("time.output_every must not exceed time.t_end")
    return config


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate an experiment configuration file.

    Args:
        path:   INI-style file with `key = value` lines, `#` comments and [section] headers

    Returns:
        The validated configuration with every default filled in (and logged)
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigParseException(f"cannot read {path}: {e.strerror}")
    lines = text.splitlines()
    raw = _parse(text)

    for section in raw:
        if section not in SECTIONS:
            raise ConfigValidationException(f"line {_line_of(lines, section)}: unknown section [{section}]")
    if "end_states" not in raw:
        raise ConfigValidationException("missing required section [end_states]")

    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise _validation_detail(e, lines)

    _echo_defaults(raw, config)
    try:
        return validate_config(config)
    except DomainException as e:
        raise ConfigValidationException(e.detail)


def dump_config(config: ExperimentConfig) -> str:
    """The resolved configuration in the same file format."""
    lines = []
    for section in SECTIONS:
        lines.append(f"[{section}]")
        for key, value in getattr(config, section).model_dump(mode="json", by_alias=True).items():
            if value is not None:
                lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)
