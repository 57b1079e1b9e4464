"""Keyword extraction, relevance filtering and banking-aspect
classification for English, Sinhala and code-mixed comments."""

__version__ = "0.1.0"
