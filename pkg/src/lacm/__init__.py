"""Lie algebra of classical mechanics: Hall bases, dimensions, trees and realizations."""

from .lie import A, B, bracket, decompose, parse

__all__ = ["A", "B", "bracket", "decompose", "parse"]
__version__ = "0.1.0"
