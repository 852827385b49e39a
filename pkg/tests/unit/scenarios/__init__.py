"""Unit tests for app.scenarios."""
