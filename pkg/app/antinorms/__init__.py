"""Antinorm package initialization."""
