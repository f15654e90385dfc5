"""Exact and bounded mixing-time analysis for random walks on Kneser graphs."""

__version__ = "0.1.0"

from .model import KneserParams, LumpKind, spectrum  # noqa: E402,F401
