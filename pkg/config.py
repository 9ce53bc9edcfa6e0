from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

import yaml

from errors import ParseError

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "flagforge.yaml")


@dataclass(frozen=True)
class Config:
    max_vertices: int = 64
    enumeration_cap_dedup: int = 9
    enumeration_cap_labeled: int = 7
    extrusion_edge_budget: int = 20
    enumeration_cap_bipartite: int = 10
    jobs: int = 1
    progress_every: int = 500
    sr_variable_scheme: str = "x"


def load_yaml(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be a mapping")
    return data


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError as e:
        raise ParseError(f"{name} must be an integer, got {raw!r}") from e


def load_config(path: Optional[str] = None) -> Config:
    """
    Defaults <- YAML file <- environment.
    The file is FLAGFORGE_CONFIG when set, else flagforge.yaml next to this module.
    A missing default file is fine; a missing explicit file is not.
    """
    explicit = path or os.getenv("FLAGFORGE_CONFIG")
    cfg = Config()

    file_path = explicit or DEFAULT_CONFIG_PATH
    if os.path.exists(file_path):
        data = load_yaml(file_path)
        flat: Dict[str, Any] = {}
        for section in ("limits", "run", "export"):
            block = data.get(section) or {}
            if not isinstance(block, dict):
                raise ParseError(f"{file_path}: section '{section}' must be a mapping")
            flat.update(block)
        known = set(Config.__dataclass_fields__)
        unknown = sorted(set(flat) - known)
        if unknown:
            raise ParseError(f"{file_path}: unknown keys {unknown}")
        cfg = replace(cfg, **flat)
    elif explicit:
        raise ParseError(f"config file not found: {explicit}")

    budget = _env_int("FLAGFORGE_BUDGET")
    if budget is not None:
        cfg = replace(cfg, extrusion_edge_budget=budget)
    jobs = _env_int("FLAGFORGE_JOBS")
    if jobs is not None:
        cfg = replace(cfg, jobs=max(1, jobs))
    return cfg
