import os
import logging
from typing import Optional
from dataclasses import dataclass, field
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"


def _threads_from_env() -> int:
    raw = os.getenv("EQUIVCALC_THREADS")
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        logger.warning(f"Ignoring EQUIVCALC_THREADS={raw!r}: not an integer")
        return 1
    if threads < 1:
        logger.warning(f"Ignoring EQUIVCALC_THREADS={threads}: must be at least 1")
        return 1
    return threads


@dataclass
class CalcConfig:
    """Configuration class to store computation limits and defaults"""
    threads: int = field(default_factory=_threads_from_env)
    size_ceiling: int = 1024
    row_degree_bound: int = 20
    series_degree_bound: int = 32
    max_group_order: int = 64
    fixtures_dir: Path = FIXTURES_DIR


class ConfigService:
    """Service to manage toolkit configuration"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ConfigService, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._initialized = True
        self._config = CalcConfig()

    def update_config(self,
                      threads: Optional[int] = None,
                      size_ceiling: Optional[int] = None,
                      row_degree_bound: Optional[int] = None,
                      series_degree_bound: Optional[int] = None) -> None:
        """Update configuration parameters"""
        if threads is not None:
            self._config.threads = max(1, threads)
        if size_ceiling is not None:
            self._config.size_ceiling = size_ceiling
        if row_degree_bound is not None:
            self._config.row_degree_bound = row_degree_bound
        if series_degree_bound is not None:
            self._config.series_degree_bound = series_degree_bound

    def get_config(self) -> CalcConfig:
        """Get current configuration"""
        return self._config

    def get_threads(self) -> int:
        return self._config.threads

    def get_size_ceiling(self) -> int:
        return self._config.size_ceiling

    def get_row_degree_bound(self) -> int:
        return self._config.row_degree_bound

    def get_series_degree_bound(self) -> int:
        return self._config.series_degree_bound

    def get_max_group_order(self) -> int:
        return self._config.max_group_order

    def get_fixtures_dir(self) -> Path:
        return self._config.fixtures_dir

    def reset_to_defaults(self) -> None:
        """Reset configuration to default values"""
        self._config = CalcConfig()
