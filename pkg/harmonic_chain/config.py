"""
Runtime settings and the shared worker pool helper.
Settings come from the environment (optionally a .env file).
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigurationError

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

WORKERS_ENV = "HARMONIC_CHAIN_WORKERS"

# Largest chain for which the N x N exact pair matrix is built
EXACT_PAIR_MAX_N = 4096

# Widest site window pairfluct tabulates (rows grow as its square)
PAIR_WINDOW_MAX_SITES = 4096

# Upper bound on temporary table elements per block (rows x modes)
BLOCK_ELEMENTS = 4_000_000

T = TypeVar("T")
R = TypeVar("R")


class Settings(BaseModel):
    """Resolved runtime settings."""
    workers: int = Field(1, ge=1, description="Worker threads for data-parallel loops")

    model_config = ConfigDict(frozen=True)


# Global settings instance
_settings: Optional[Settings] = None


def load_settings() -> Settings:
    """
    Read settings from the environment.

    Raises:
        ConfigurationError: If the worker count is not a positive integer
    """
    raw = os.getenv(WORKERS_ENV)
    if raw is None or raw.strip() == "":
        return Settings()

    try:
        return Settings(workers=int(raw))
    except (ValueError, ValidationError) as e:
        raise ConfigurationError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from e


def get_settings() -> Settings:
    """
    Get the settings instance.
    Returns the cached settings, loading them if necessary.
    """
    global _settings
    if _settings is None:
        _settings = load_settings()
        logger.debug("Loaded settings: %s", _settings)
    return _settings


def reset_settings() -> None:
    """Forget cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None


def chunk_bounds(total: int, chunk: int) -> List[tuple]:
    """Split range(total) into contiguous (start, stop) pairs of at most `chunk` items."""
    chunk = max(1, chunk)
    return [(start, min(start + chunk, total)) for start in range(0, total, chunk)]


def parallel_map(func: Callable[[T], R], items: Sequence[T], workers: Optional[int] = None) -> List[R]:
    """
    Apply func to every item, preserving order.

    Each item is evaluated independently, so the result does not depend on
    the number of workers.
    """
    if workers is None:
        workers = get_settings().workers

    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
