"""Metrics, significance tests, collinearity screening and experiment reports."""
