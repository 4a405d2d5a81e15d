"""fieldmon: monitoring engine for wiki-encoded research-project corpora."""

__version__ = "0.1.0"
