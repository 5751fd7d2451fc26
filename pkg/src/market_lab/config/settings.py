"""Runtime limits and presentation settings for market_lab."""

import logging
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class LabSettings(BaseSettings):
    """Resource caps and defaults, read from MARKET_LAB_* variables or a .env file."""

    log_level: str = "INFO"
    dense_enumeration_max_columns: int = Field(20, ge=1, le=25)
    search_node_budget: int = Field(10_000_000, ge=1)
    multinomial_composition_cap: int = Field(10_000_000, ge=1)
    cone_batch_size: int = Field(65_536, ge=1)
    cone_min_conditioned_fraction: float = Field(1e-4, gt=0.0, lt=1.0)
    cone_min_ratio: float = Field(0.01, gt=0.0, lt=1.0)
    default_alpha: str = "1"
    default_initial_price: str = "100"
    svg_width: int = Field(1000, ge=100)
    svg_height: int = Field(500, ge=100)

    model_config = SettingsConfigDict(env_prefix="MARKET_LAB_", env_file=".env", extra="ignore")


@lru_cache
def get_lab_settings() -> LabSettings:
    """Get cached lab settings."""
    settings = LabSettings()
    logger.debug(
        f"Lab settings loaded - dense cap: {settings.dense_enumeration_max_columns}, "
        f"search budget: {settings.search_node_budget}"
    )
    return settings
