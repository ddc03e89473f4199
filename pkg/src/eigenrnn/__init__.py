"""Spectral analysis and eigen initialization for recurrent networks."""

__version__ = "0.1.0"
