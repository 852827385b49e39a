"""Lie algebra package initialization."""
