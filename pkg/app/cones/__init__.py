"""Convex cone package initialization."""
