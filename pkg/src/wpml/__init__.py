"""Finite-model workbench for weak positive modal logic."""

__version__ = "0.1.0"
