"""Configuration management for the factorization engine."""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource


class Settings(BaseSettings):
    """
    Pipeline defaults.

    Values are layered as CLI flags > input ``options`` > these defaults;
    the environment and dotenv files are not consulted.
    """

    model_config = {
        "case_sensitive": False,
        "extra": "ignore",
    }

    # Section table and surjectivity
    d_max: int = Field(6, ge=2)
    scaling_max: int = Field(8, ge=1)

    # Kodaira search
    m_max: int = Field(12, ge=1)
    c_max: int = Field(6, ge=1)

    # Chamber scans
    samples: int = Field(5, ge=2)
    grid: int = Field(32, ge=1)

    # Twist descent
    n_max: int = Field(8, ge=1)

    tie_break: Literal["centroid-lex", "centroid-revlex"] = "centroid-lex"
    schema_version: str = "1"
    log_level: str = "INFO"

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ):
        return (init_settings,)

    def merged(self, **overrides) -> "Settings":
        """Copy with the non-None overrides applied and validated."""
        values = self.model_dump()
        values.update({key: value for key, value in overrides.items() if value is not None})
        return Settings(**values)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
