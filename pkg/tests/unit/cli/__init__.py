"""Unit tests for app.cli."""
