"""Extremal package initialization."""
