from fractions import Fraction
from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    """Toolkit settings from environment variables"""

    # Application
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: str = ""  # empty disables the file sink
    DEFAULT_SEED: int = 0
    REPORT_TIMINGS: bool = False  # timings break byte-identical reports

    # Order-type catalogs
    CATALOG_DIR: str = "./catalogs"
    ENUM_BUDGET: int = 200_000  # max n-subsets tested per enumeration
    ENUM_SAMPLE_SEED: int = 0

    # Cut distance / regularity
    CUT_EXACT_MAX_N: int = 16
    CUT_SEARCH_EFFORT: int = 50  # restarts of the alternating search

    # Pipeline
    PIPELINE_EPSILON: str = "1/4"
    PIPELINE_K_MAX: int = 8
    PIPELINE_MIN_PARTS: int = 3
    PLACEMENT_MAX_RETRIES: int = 12

    # k-colored crossing search
    KPLANAR_MAX_COLORINGS: int = 2 ** 20

    # Experiments
    EXPERIMENT_WORKERS: int = 1
    EXPERIMENT_STORE_ENABLED: bool = False
    DATABASE_URL: str = "sqlite+aiosqlite:///./experiments.db"

    class Config:
        env_file = ".env"
        case_sensitive = True

    @property
    def pipeline_epsilon(self) -> Fraction:
        return Fraction(self.PIPELINE_EPSILON)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get cached settings instance"""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings
