"""Exceptions shared across the series kernels."""


class SeriesConvergenceError(ArithmeticError):
    """Raised when a q-series or theta sum cannot reach the requested
    tolerance within its term budget (usually a sign that Im tau is too
    small and the caller should reduce tau first)."""
