"""
SignedFlow Configuration Module
Centralized environment variable validation using Pydantic Settings
"""

import logging
from contextlib import contextmanager
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger("signedflow.config")

PACKAGE_DATA_DIR = Path(__file__).resolve().parent / "data"


class SearchSettings(BaseSettings):
    """Budgets for the exhaustive searches"""

    model_config = SettingsConfigDict(env_prefix="SFF_", case_sensitive=False, extra="ignore")

    budget_nodes: int = Field(default=2_000_000, ge=1, description="Node cap for flow searches")
    kmax: int = Field(default=8, ge=2, le=16, description="Largest k tried by flow_number")
    hamiltonian_budget: int = Field(
        default=200_000, ge=1, description="Node cap for Hamiltonian circuit searches"
    )
    circuit_budget: int = Field(
        default=200_000, ge=1, description="Node cap for signed-circuit enumeration"
    )
    allow_search_fallback: bool = Field(
        default=False, description="Fall back to plain 6-flow search when a construction fails"
    )


class DataSettings(BaseSettings):
    """Location of shipped template tables"""

    model_config = SettingsConfigDict(env_prefix="SFF_", case_sensitive=False, extra="ignore")

    data_dir: Path = Field(default=PACKAGE_DATA_DIR, description="Directory holding templates/")
    template_version: int = Field(default=1, ge=1, description="Expected template table version")

    @field_validator("data_dir")
    @classmethod
    def validate_data_dir(cls, v: Path) -> Path:
        return Path(v).expanduser()

    @property
    def templates_dir(self) -> Path:
        """Directory containing the template JSON tables"""
        return self.data_dir / "templates"


class RunSettings(BaseSettings):
    """Process-level run settings"""

    model_config = SettingsConfigDict(env_prefix="SFF_", case_sensitive=False, extra="ignore")

    log_level: str = Field(default="info", description="Logging level")
    threads: int = Field(default=1, ge=1, le=256, description="Worker threads for sweeps")
    seed: int = Field(default=0, ge=0, description="Seed for sampled sweeps")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        valid_levels = ["debug", "info", "warning", "error", "critical"]
        if v.lower() not in valid_levels:
            raise ValueError(f"log_level must be one of {valid_levels}")
        return v.lower()


class Settings(BaseSettings):
    """Main settings - combines all configuration"""

    model_config = SettingsConfigDict(case_sensitive=False, extra="ignore")

    search: SearchSettings = Field(default_factory=SearchSettings)
    data: DataSettings = Field(default_factory=DataSettings)
    run: RunSettings = Field(default_factory=RunSettings)

    app_name: str = "signedflow"
    app_version: str = "1.0.0"

    def log_config(self) -> None:
        """Log configuration values"""
        logger.info(f"{self.app_name} {self.app_version} configuration:")
        logger.info(f"  Search budget: {self.search.budget_nodes} nodes, kmax {self.search.kmax}")
        logger.info(f"  Hamiltonian budget: {self.search.hamiltonian_budget}")
        logger.info(f"  Search fallback: {self.search.allow_search_fallback}")
        logger.info(f"  Data dir: {self.data.data_dir}")
        logger.info(f"  Threads: {self.run.threads}, seed {self.run.seed}")

    def with_overrides(
        self, search: Optional[Dict[str, Any]] = None, run: Optional[Dict[str, Any]] = None
    ) -> "Settings":
        """Validated copy with some search and run fields replaced; self is left untouched"""
        return self.model_copy(
            update={
                "search": SearchSettings(**{**self.search.model_dump(), **(search or {})}),
                "run": RunSettings(**{**self.run.model_dump(), **(run or {})}),
            }
        )


_active: Optional[Settings] = None


@lru_cache()
def load_settings() -> Settings:
    """Settings read from the environment (cached singleton)"""
    return Settings()


def get_settings() -> Settings:
    """
    Get the active settings: the ones installed by use_settings, else the environment's.

    Example:
        from signedflow.config import get_settings
        settings = get_settings()
        print(settings.search.kmax)
    """
    return _active if _active is not None else load_settings()


@contextmanager
def use_settings(settings: Settings) -> Iterator[Settings]:
    """Make `settings` the active settings for the duration of the block"""
    global _active
    previous, _active = _active, settings
    try:
        yield settings
    finally:
        _active = previous


def get_search_settings() -> SearchSettings:
    """Get search budgets"""
    return get_settings().search


def get_data_settings() -> DataSettings:
    """Get data location settings"""
    return get_settings().data


def get_run_settings() -> RunSettings:
    """Get run settings"""
    return get_settings().run


def validate_settings() -> List[str]:
    """
    Validate settings before a run.
    Returns a list of warnings/errors.
    """
    settings = get_settings()
    issues: List[str] = []

    if not settings.data.templates_dir.is_dir():
        issues.append(f"CRITICAL: template directory not found: {settings.data.templates_dir}")

    if settings.search.allow_search_fallback:
        issues.append("WARNING: search fallback enabled - constructions may be replaced by search")

    if settings.search.budget_nodes < 10_000:
        issues.append("WARNING: node budget below 10000 - oracle runs will likely overrun")

    return issues
