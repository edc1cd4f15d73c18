"""Text formats and report rendering helpers."""
