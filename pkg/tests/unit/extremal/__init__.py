"""Unit tests for app.extremal."""
