"""Unit tests for app.groups."""
