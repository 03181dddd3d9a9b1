"""Matroid encodings, container compression on Johnson graphs, and small-n census tools."""

__version__ = "0.1.0"
