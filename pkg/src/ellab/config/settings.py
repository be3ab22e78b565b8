from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator
from pathlib import Path
from typing import Literal
from functools import lru_cache
from ..validators.config_validators import normalize_case
from ..validators.numeric_validators import require_positive


class Settings(BaseSettings):
    """
    Tool settings loaded from the environment (prefix ``ELLAB_``) or a ``.env`` file.

    Numerical fields are defaults only: every CLI subcommand can override them per run.
    """

    # Environment
    ENV: Literal["development", "testing", "production"] = "development"

    # Logging
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"
    LOG_FORMAT: Literal["json", "text"] = "text"
    LOG_TO_STDOUT: bool = True
    LOG_DIR: Path = Path("logs/ellab")
    LOG_MAX_BYTES: int = 10_000_000  # 10 MB
    LOG_BACKUP_COUNT: int = 5
    LOG_USE_QUEUE: bool = False

    # Sup/inf scans
    SCAN_MIN: float = 1e-6
    SCAN_MAX: float = 1e6
    SCAN_POINTS_PER_DECADE: int = 64
    SCAN_TOL: float = 1e-9

    # Radial shooting
    SHOOT_RMAX: float = 1e3
    SHOOT_TOL: float = 1e-10
    BLOWUP_FACTOR: float = 1e8

    # Finite-difference Newton
    NEWTON_MAX_ITER: int = 200
    NEWTON_TOL: float = 1e-10

    # Universal bounds
    OMEGA_LAMBDA: float = 1.0
    HCALC_SMAX: float = 1e6

    # Sweeps
    JOBS: int = 1

    # --- Validators ---
    @field_validator("LOG_LEVEL", mode="before")
    def normalize_log_level(cls, v):
        """
        Normalize LOG_LEVEL to uppercase before the Literal check runs.
        """
        return normalize_case(v, "upper")

    @field_validator("LOG_FORMAT", mode="before")
    def normalize_log_format(cls, v):
        """
        Normalize LOG_FORMAT to lowercase.
        """
        return normalize_case(v, "lower")

    @field_validator(
        "SCAN_MIN",
        "SCAN_MAX",
        "SCAN_POINTS_PER_DECADE",
        "SCAN_TOL",
        "SHOOT_RMAX",
        "SHOOT_TOL",
        "BLOWUP_FACTOR",
        "NEWTON_MAX_ITER",
        "NEWTON_TOL",
        "OMEGA_LAMBDA",
        "HCALC_SMAX",
        "JOBS",
    )
    def positive_numerics(cls, v, info):
        return require_positive(v, info.field_name)

    model_config = SettingsConfigDict(
        env_prefix="ELLAB_",
        # .env next to the package root (src/ellab/.env)
        env_file=str(Path(__file__).parent.parent / ".env"),
        env_file_encoding="utf-8",
        extra="ignore",
    )


# Settings are read once per process; tests that tweak the environment call get_settings.cache_clear().
@lru_cache()
def get_settings() -> Settings:
    return Settings()
