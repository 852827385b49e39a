"""Unit tests for app.lie."""
