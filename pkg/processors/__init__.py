"""
Processors package for Guess-Leak
Distributions, encoders, exact/heuristic search, information-spectrum bounds
and verification sweeps
"""

__version__ = "1.0.0"

from .base_processor import BaseProcessor
from .errors import GuessLeakError

__all__ = ['BaseProcessor', 'GuessLeakError', '__version__']
