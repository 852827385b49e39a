"""Unit tests for app.antinorms."""
