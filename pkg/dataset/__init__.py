"""Labelled instance sets, leakage filtering and split protocols."""
