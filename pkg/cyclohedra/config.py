"""
Runtime configuration.

Values come from the process environment, optionally seeded from a .env file
next to the package, and are exposed through a single Settings model.
"""

import os
import logging
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from platformdirs import user_cache_dir
from pydantic import BaseModel, Field

ROOT_DIR = Path(__file__).parent
load_dotenv(ROOT_DIR / '.env')

logger = logging.getLogger(__name__)

APP_NAME = "cyclohedra"

# Structured output and cache records carry this tag
SCHEMA_VERSION = 1

DEFAULT_ENUMERATION_CAP = 20_000_000
DEFAULT_SEARCH_CAP = 50_000_000
# C(16, 8) = 12870 states at d = 8; d = 9 and 10 need --deep
DEFAULT_TABLE_CAP = 15_000
DEFAULT_BATCH_WIDTH = 64


class Settings(BaseModel):
    """Resolved configuration for one process."""

    cache_dir: Path
    enumeration_cap: int = Field(default=DEFAULT_ENUMERATION_CAP, gt=0)
    search_cap: int = Field(default=DEFAULT_SEARCH_CAP, gt=0)
    table_cap: int = Field(default=DEFAULT_TABLE_CAP, gt=0)
    batch_width: int = Field(default=DEFAULT_BATCH_WIDTH, ge=1, le=64)
    log_level: str = "INFO"

    def with_cap(self, cap: Optional[int]) -> "Settings":
        """Copy with both state caps replaced, used by the --cap flag."""
        if cap is None:
            return self
        return self.model_copy(update={"enumeration_cap": cap, "search_cap": cap, "table_cap": cap})


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw.replace("_", ""))
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


def load_settings() -> Settings:
    """
    Build Settings from the environment.

    Returns:
        Settings with defaults for every unset variable
    """
    cache_dir = os.environ.get("CYCLOHEDRA_CACHE_DIR") or user_cache_dir(APP_NAME)
    return Settings(
        cache_dir=Path(cache_dir),
        enumeration_cap=_int_env("CYCLOHEDRA_ENUMERATION_CAP", DEFAULT_ENUMERATION_CAP),
        search_cap=_int_env("CYCLOHEDRA_SEARCH_CAP", DEFAULT_SEARCH_CAP),
        table_cap=_int_env("CYCLOHEDRA_TABLE_CAP", DEFAULT_TABLE_CAP),
        batch_width=min(64, max(1, _int_env("CYCLOHEDRA_BATCH_WIDTH", DEFAULT_BATCH_WIDTH))),
        log_level=os.environ.get("CYCLOHEDRA_LOG_LEVEL", "INFO").upper(),
    )
