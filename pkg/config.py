"""Configuration settings for the Packed Interval Covering workbench."""
import logging
import os
from typing import Dict, Optional

logger = logging.getLogger(__name__)


# Environment values that did not parse; Config.validate() reports them.
INVALID_SETTINGS: Dict[str, str] = {}


def _env_int(name: str, default: int) -> int:
    """Integer from the environment; a malformed value is recorded and the default used."""
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        INVALID_SETTINGS[name] = raw
        return default


class Config:
    # Logging settings
    LOG_LEVEL: str = os.getenv('PIC_LOG_LEVEL', 'WARNING')
    LOG_FILE: Optional[str] = os.getenv('PIC_LOG_FILE')

    # Solver guards
    BRUTE_FORCE_PRODUCT_LIMIT: int = _env_int('PIC_BRUTE_FORCE_LIMIT', 10 ** 7)  # product of pack sizes
    BRUTE_FORCE_SAT_LIMIT: int = _env_int('PIC_BRUTE_FORCE_SAT_LIMIT', 24)  # variables

    # Rendering - per-point axis up to this bound, compressed segments beyond
    RENDER_AXIS_CUTOFF: int = 200

    # Generator settings
    B2_REPAIR_ATTEMPTS: int = 200  # swap repairs before a full reshuffle

    # Benchmark settings
    BENCH_DB_PATH: str = os.getenv('PIC_BENCH_DB', 'bench.db')
    BENCH_COUNT: int = 100
    BENCH_SEED: int = 2024
    BENCH_N_BOUND: int = 12
    BENCH_PACKS: int = 6
    BENCH_MAX_PACK_SIZE: int = 4
    BENCH_B2_COUNT: int = 20
    BENCH_B2_N: int = 3
    BENCH_HISTORY_LIMIT: int = 20

    @classmethod
    def log_level(cls) -> int:
        """Numeric level for LOG_LEVEL, WARNING when the name is unknown."""
        return logging.getLevelNamesMapping().get(cls.LOG_LEVEL.upper(), logging.WARNING)

    @classmethod
    def validate(cls) -> bool:
        """Validate configured limits and the log level."""
        if INVALID_SETTINGS:
            for name, raw in INVALID_SETTINGS.items():
                logger.error(f"❌ {name} must be an integer, got {raw!r}")
            return False
        limits = {
            'PIC_BRUTE_FORCE_LIMIT': cls.BRUTE_FORCE_PRODUCT_LIMIT,
            'PIC_BRUTE_FORCE_SAT_LIMIT': cls.BRUTE_FORCE_SAT_LIMIT,
            'RENDER_AXIS_CUTOFF': cls.RENDER_AXIS_CUTOFF,
            'B2_REPAIR_ATTEMPTS': cls.B2_REPAIR_ATTEMPTS,
        }
        for name, value in limits.items():
            if not isinstance(value, int) or value <= 0:
                logger.error(f"❌ {name} must be a positive integer, got {value!r}")
                return False
        if cls.LOG_LEVEL.upper() not in logging.getLevelNamesMapping():
            logger.error(f"❌ Unknown LOG_LEVEL {cls.LOG_LEVEL!r}")
            return False
        return True
