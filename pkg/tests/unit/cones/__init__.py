"""Unit tests for app.cones."""
