"""Prolongational limit sets of wandering flows: finite orbit-space models,
chordal systems, one-dimensional examples and numerical cross-checks."""

__version__ = "0.1.0"
