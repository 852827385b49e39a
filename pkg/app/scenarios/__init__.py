"""Scenario package initialization."""
