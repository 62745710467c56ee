"""Path-string guided worst-case analysis."""

__version__ = "0.1.0"
