"""Command-line package initialization."""
