"""
Runtime configuration for maslovkit.

Defaults live in settings.MASLOVKIT; environment variables override them and
are read on every call so that a changed environment takes effect without a
restart.
"""
import os
from typing import Optional

from django.conf import settings

from .exceptions import ConfigurationError


class Config:
    """Configuration lookups for analysis runs"""

    TRUNCATION_ENV: str = 'MASLOVKIT_TRUNCATION'
    Q_MAX_ENV: str = 'MASLOVKIT_Q_MAX'
    FORMAT_ENV: str = 'MASLOVKIT_FORMAT'
    WORKERS_ENV: str = 'MASLOVKIT_WORKERS'

    OUTPUT_FORMATS = ('text', 'kv')

    @classmethod
    def _default(cls, key: str):
        return settings.MASLOVKIT[key]

    @classmethod
    def _int_env(cls, name: str, fallback: int, minimum: int = 1) -> int:
        raw: Optional[str] = os.getenv(name)
        if raw is None or raw.strip() == '':
            return fallback
        try:
            value = int(raw)
        except ValueError:
            raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
        if value < minimum:
            raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")
        return value

    @classmethod
    def default_truncation(cls) -> int:
        """Truncation degree N for Morse series (MASLOVKIT_TRUNCATION, default 400)"""
        return cls._int_env(cls.TRUNCATION_ENV, cls._default('TRUNCATION'))

    @classmethod
    def default_q_max(cls) -> int:
        """Largest rotation denominator swept in Case 2"""
        return cls._int_env(cls.Q_MAX_ENV, cls._default('Q_MAX'), minimum=2)

    @classmethod
    def default_i1_range(cls) -> tuple[int, int]:
        return cls._default('I1_MIN'), cls._default('I1_MAX')

    @classmethod
    def default_m_max(cls) -> int:
        return cls._default('M_MAX')

    @classmethod
    def default_workers(cls) -> int:
        return cls._int_env(cls.WORKERS_ENV, cls._default('WORKERS'))

    @classmethod
    def min_guard(cls) -> int:
        return cls._default('MIN_GUARD')

    @classmethod
    def default_format(cls) -> str:
        value = os.getenv(cls.FORMAT_ENV, cls._default('FORMAT')).strip().lower()
        if value not in cls.OUTPUT_FORMATS:
            raise ConfigurationError(
                f"{cls.FORMAT_ENV} must be one of {', '.join(cls.OUTPUT_FORMATS)}, got {value!r}"
            )
        return value

