"""hp discretization of space-time fractional parabolic problems in 1D."""

__version__ = "0.1.0"
