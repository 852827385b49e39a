"""Core module for shared infrastructure."""
