"""
Template Tables
Versioned ladder and Hamiltonian flow tables loaded from the data directory
"""

from __future__ import annotations

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, Tuple

from pydantic import ValidationError

from ..config import get_data_settings
from ..exceptions import ParseError, SignedFlowError
from ..models.schemas import HamiltonianTemplate, LadderTemplate, TemplateFile

logger = logging.getLogger("signedflow.templates")

LADDER_FILE = "ladder_templates.json"
HAMILTONIAN_FILE = "hamiltonian_templates.json"


def _load(path: Path) -> TemplateFile:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        table = TemplateFile.model_validate(data)
    except FileNotFoundError:
        raise ParseError(str(path), "template table not found") from None
    except (json.JSONDecodeError, ValidationError) as e:
        raise ParseError(str(path), str(e)) from e
    expected = get_data_settings().template_version
    if table.version != expected:
        raise ParseError(str(path), f"template version {table.version}, expected {expected}")
    return table


@lru_cache()
def load_templates(
    directory: str,
) -> Tuple[Dict[str, LadderTemplate], Dict[str, HamiltonianTemplate]]:
    """
    Load both template tables from a directory.

    Cached per directory; call load_templates.cache_clear() after changing
    SFF_DATA_DIR at runtime.
    """
    root = Path(directory)
    ladders = {t.name: t for t in _load(root / LADDER_FILE).ladder}
    hamiltonian = {t.name: t for t in _load(root / HAMILTONIAN_FILE).hamiltonian}
    logger.debug(
        f"Loaded {len(ladders)} ladder and {len(hamiltonian)} Hamiltonian templates from {root}"
    )
    return ladders, hamiltonian


def _tables() -> Tuple[Dict[str, LadderTemplate], Dict[str, HamiltonianTemplate]]:
    return load_templates(str(get_data_settings().templates_dir))


def ladder_template(name: str) -> LadderTemplate:
    ladders, _ = _tables()
    try:
        return ladders[name]
    except KeyError:
        known = {"known": sorted(ladders)}
        raise SignedFlowError(f"Unknown ladder template: {name}", known) from None


def hamiltonian_template(name: str) -> HamiltonianTemplate:
    _, hamiltonian = _tables()
    try:
        return hamiltonian[name]
    except KeyError:
        raise SignedFlowError(
            f"Unknown Hamiltonian template: {name}", {"known": sorted(hamiltonian)}
        ) from None


def ladder_template_names() -> Tuple[str, ...]:
    ladders, _ = _tables()
    return tuple(sorted(ladders))
