"""Game-based ballot secrecy and non-malleability harness."""

__version__ = "0.1.0"
