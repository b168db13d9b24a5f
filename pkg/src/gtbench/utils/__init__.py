"""
Utility modules for the workbench.
"""

from .bits import iter_bits, popcount, submasks, lowest_bit, full_mask
from .logging import setup_logger

__all__ = [
    "iter_bits",
    "popcount",
    "submasks",
    "lowest_bit",
    "full_mask",
    "setup_logger",
]
