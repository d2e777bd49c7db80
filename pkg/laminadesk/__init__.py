"""Experiments on hyperbolic groups, surface curves, train tracks and ending laminations."""

__version__ = "0.1.0"
