"""Evaluate rendered design animations against their layout specification."""

__version__ = "0.1.0"
