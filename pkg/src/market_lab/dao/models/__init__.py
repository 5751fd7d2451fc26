"""File models package."""
