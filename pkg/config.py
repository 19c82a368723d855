"""
Socksort configuration - verification caps, series defaults and safety limits

Defaults live in the tables below. Any entry can be overridden with an
environment variable SOCKSORT_<NAME> (also read from a .env file).
"""

import os
import sys
from functools import lru_cache
from typing import Dict

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from errors import ConfigError

ENV_PREFIX = "SOCKSORT_"

# Brute-force bridges. Bell(12) = 4,213,597 simulations is the largest
# sweep that still finishes in minutes on a desktop.
VERIFICATION_CAPS = {
    "max_len": {"value": 12, "description": "Largest n for the s(n) bridge"},
    "max_len_refined": {"value": 10, "description": "Largest n for the s(n,r) bridge"},
    "ci_max_len": {"value": 8, "description": "Default n for CI verification"},
}

# Truncation orders for exact series expansion
SERIES_DEFAULTS = {
    "uni_terms": {"value": 200, "description": "Univariate truncation order"},
    "bi_terms": {"value": 60, "description": "Bivariate truncation order"},
    "asympt_terms": {"value": 1000, "description": "Terms used to estimate K"},
    "precision": {"value": 30, "description": "Decimal digits for real arithmetic"},
}

SAFETY_LIMITS = {
    "max_arrangements": {"value": 10**6, "description": "Largest |S(M)| swept by periodic search"},
    "split_prefix": {"value": 6, "description": "RGS prefix length used to split work"},
    "max_iterations": {"value": 64, "description": "Default iteration cap for trajectories"},
}

ALL_SETTINGS = {**VERIFICATION_CAPS, **SERIES_DEFAULTS, **SAFETY_LIMITS}


class Settings(BaseModel):
    max_len: int = Field(ge=1)
    max_len_refined: int = Field(ge=1)
    ci_max_len: int = Field(ge=1)
    uni_terms: int = Field(ge=1)
    bi_terms: int = Field(ge=1)
    asympt_terms: int = Field(ge=100)
    precision: int = Field(ge=10)
    max_arrangements: int = Field(ge=1)
    split_prefix: int = Field(ge=1)
    max_iterations: int = Field(ge=0)
    log_level: str = "WARNING"


def get_all_settings() -> Dict[str, Dict]:
    """Get the default table with descriptions"""
    return ALL_SETTINGS


def is_known_setting(name: str) -> bool:
    return name in ALL_SETTINGS


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Defaults overlaid with SOCKSORT_* environment variables"""
    load_dotenv()
    values = {name: entry["value"] for name, entry in ALL_SETTINGS.items()}
    for name in list(values) + ["log_level"]:
        raw = os.getenv(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = raw
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid {ENV_PREFIX}* setting: {e}") from e


def reload_settings() -> Settings:
    get_settings.cache_clear()
    return get_settings()


def get_cap(name: str) -> int:
    """Get one configured value by name"""
    if not is_known_setting(name):
        raise ConfigError(f"Unknown setting '{name}'. Available: {list(ALL_SETTINGS)}")
    return getattr(get_settings(), name)


def default_threads() -> int:
    """Available parallelism for the enumeration pool"""
    if hasattr(os, "process_cpu_count"):
        return os.process_cpu_count() or 1
    return os.cpu_count() or 1


def configure_logging(level: str = None) -> None:
    """Single stderr sink so stdout stays reserved for command output"""
    level = level or get_settings().log_level
    logger.remove()
    logger.add(
        sys.stderr,
        level=level.upper(),
        format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {name} | {message}",
    )
    logger.debug(f"🔧 Logging configured at {level.upper()}")
