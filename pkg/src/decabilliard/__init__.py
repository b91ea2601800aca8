"""Exact outer-billiard engine for the regular decagon."""

from .cyclotomic import CycNum, ZETA, PHI

__all__ = ["CycNum", "ZETA", "PHI"]
__version__ = "0.1.0"
