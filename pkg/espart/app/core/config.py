import os
from typing import List, Optional
from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="ESPART_", env_file=".env", extra="ignore")

    # Base directory is the parent of the app directory
    BASE_DIR: str = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    VERSION: str = "0.1.0"
    API_V1_STR: str = "/api/v1"

    # Run reports written by the HTTP service
    STORAGE_PATH: str = os.path.join(BASE_DIR, "db", "runs.json")

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None

    # Cap on internal parallelism (density sweeps, section validation)
    THREADS: int = 1

    # Gram sections
    GRAM_MAX_SIZE: int = 512
    EIG_TOL: float = 1e-10
    HERMITIAN_TOL: float = 1e-12
    SMALL_NU_THRESHOLD: float = 1e-8

    # Montgomery-Vaughan tolerance, relative to sum |a|^2
    MV_REL_TOL: float = 1e-9

    # Scale grids
    SCALE_STEPS: int = 48
    DIM_STEPS: int = 24
    DIM_FIT_FRACTION: float = 0.5
    DIM_WINDOW_FACTOR: float = 8.0
    DIM_CORNERS: int = 512
    TAIL_SCALES: int = 3

    # Constant extraction
    MAX_M: int = 10000
    DEGENERATE_EPS: float = 1e-6

    # Validation
    VALIDATE_TOL: float = 1e-8
    WINDOW_SIZES: List[int] = [1, 8, 16, 32]

    # Progression search
    LOG_BASE: str = "e"
    SEARCH_BUDGET: int = 100000

settings = Settings()
