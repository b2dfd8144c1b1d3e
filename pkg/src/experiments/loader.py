"""
Weak Tomography - Config Loader
Reads JSON experiment documents and reports errors against source lines
"""
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

from pydantic import ValidationError

from ..exceptions import ConfigError
from .schema import ExperimentConfig

logger = logging.getLogger(__name__)

_FIELD_PREFIX = re.compile(r"^(?:Value error, )?(\w+): ")


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def locate(text: str, loc: Sequence[Union[str, int]], message: str = "") -> int:
    """
    Best-effort source line for a pydantic error location.

    Keys are searched in order, each after the previous match; model-level
    errors fall back to a "field: ..." prefix in the message.
    """
    keys = [k for k in loc if isinstance(k, str)]
    if not keys:
        match = _FIELD_PREFIX.match(message)
        keys = [match.group(1)] if match else []

    pos = 0
    line = 1
    for key in keys:
        idx = text.find(f'"{key}"', pos)
        if idx < 0:
            break
        pos = idx
        line = _line_of(text, idx)
    return line


def parse_config(text: str, source: str = "<config>",
                 overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Validate a JSON document; CLI overrides replace document values before validation"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}: invalid JSON", [f"{source}:{e.lineno}:{e.colno}: {e.msg}"]) from None

    if not isinstance(data, dict):
        raise ConfigError(f"{source}: invalid config", [f"{source}:1: top level must be a JSON object"])

    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        diagnostics = []
        for err in e.errors():
            where = ".".join(str(k) for k in err["loc"]) or "config"
            line = locate(text, err["loc"], err["msg"])
            diagnostics.append(f"{source}:{line}: {where}: {err['msg']}")
        raise ConfigError(f"{source}: {len(diagnostics)} configuration error(s)", diagnostics) from None


def load_config(path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e.strerror}") from None
    logger.debug(f"Loaded config {path} ({len(text)} bytes)")
    return parse_config(text, source=str(path), overrides=overrides)


def apply_overrides(config: ExperimentConfig, overrides: Dict[str, Any]) -> ExperimentConfig:
    """Re-validate `config` with the non-None overrides applied"""
    data = config.model_dump(mode="json", exclude_none=True)
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        diagnostics = [f"{'.'.join(str(k) for k in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()]
        raise ConfigError("Invalid option values", diagnostics) from None
