#!/usr/bin/env python3
"""
Guess-Leak Configuration

Search budget, worker count, default grids and the report directory.
Can be overridden via environment variables or .env file; command-line
flags override both.
"""

import os
from pathlib import Path
from typing import Tuple
from dotenv import load_dotenv

# Load .env file from project root
_PROJECT_ROOT = Path(__file__).parent
load_dotenv(_PROJECT_ROOT / '.env')


def _parse_float_list(raw: str) -> Tuple[float, ...]:
    values = tuple(float(part) for part in raw.split(',') if part.strip())
    if not values:
        raise ValueError(f"Empty grid: {raw!r}")
    return values


class Config:
    """Run configuration with environment variable support."""

    _BASE_DIR = Path(__file__).parent

    DEFAULT_BUDGET = 10_000_000
    DEFAULT_WORKERS = 1
    DEFAULT_NU_GRID = 100
    DEFAULT_ETA_GRID = "0.05,0.1,0.5,1,2,5,10"
    DEFAULT_RESTARTS = 20

    @classmethod
    def _get_int(cls, name: str, default: int, minimum: int = 1) -> int:
        """Integer setting from the environment, falling back to default."""
        raw = os.getenv(name)
        if not raw:
            return default
        try:
            value = int(raw.replace('_', ''))
        except ValueError:
            raise ValueError(f"{name} must be an integer, got {raw!r}")
        if value < minimum:
            raise ValueError(f"{name} must be >= {minimum}, got {value}")
        return value

    @classmethod
    def get_budget(cls) -> int:
        """Maximum number of candidates an exact search may enumerate."""
        return cls._get_int('GUESSLEAK_BUDGET', cls.DEFAULT_BUDGET)

    @classmethod
    def get_workers(cls) -> int:
        return cls._get_int('GUESSLEAK_WORKERS', cls.DEFAULT_WORKERS)

    @classmethod
    def get_nu_grid(cls) -> int:
        """Number of points in the default nu sweep."""
        return cls._get_int('GUESSLEAK_NU_GRID', cls.DEFAULT_NU_GRID, minimum=2)

    @classmethod
    def get_eta_grid(cls) -> Tuple[float, ...]:
        return _parse_float_list(os.getenv('GUESSLEAK_ETA_GRID') or cls.DEFAULT_ETA_GRID)

    @classmethod
    def get_restarts(cls) -> int:
        return cls._get_int('GUESSLEAK_RESTARTS', cls.DEFAULT_RESTARTS, minimum=0)

    @classmethod
    def get_output_dir(cls) -> Path:
        """Determine report directory with fallback chain."""
        # 1. Check environment variable first
        env_output = os.getenv('GUESSLEAK_OUTPUT_DIR')
        if env_output:
            return Path(env_output)

        # 2. Default to local reports folder
        return cls._BASE_DIR / 'reports'

    @classmethod
    def print_config(cls):
        """Print current configuration."""
        print("=" * 80)
        print("  Guess-Leak Configuration")
        print("=" * 80)
        print(f"  BUDGET:        {cls.get_budget():,}")
        print(f"  WORKERS:       {cls.get_workers()}")
        print(f"  NU_GRID:       {cls.get_nu_grid()} points")
        print(f"  ETA_GRID:      {', '.join(f'{eta:g}' for eta in cls.get_eta_grid())}")
        print(f"  RESTARTS:      {cls.get_restarts()}")
        print(f"  OUTPUT_DIR:    {cls.get_output_dir()}")
        print("-" * 80)
        env_any = any(os.getenv(name) for name in (
            'GUESSLEAK_BUDGET', 'GUESSLEAK_WORKERS', 'GUESSLEAK_NU_GRID',
            'GUESSLEAK_ETA_GRID', 'GUESSLEAK_RESTARTS', 'GUESSLEAK_OUTPUT_DIR',
        ))
        print(f"  ENV_OVERRIDE:  {'Yes' if env_any else 'No (using defaults)'}")
        print("=" * 80)

    @classmethod
    def ensure_dirs(cls):
        """Create the report directory if it doesn't exist."""
        cls.get_output_dir().mkdir(parents=True, exist_ok=True)


# Convenience functions
def get_budget() -> int:
    return Config.get_budget()

def get_workers() -> int:
    return Config.get_workers()

def get_nu_grid() -> int:
    return Config.get_nu_grid()

def get_eta_grid() -> Tuple[float, ...]:
    return Config.get_eta_grid()

def get_restarts() -> int:
    return Config.get_restarts()

def get_output_dir() -> Path:
    return Config.get_output_dir()


if __name__ == '__main__':
    Config.print_config()
