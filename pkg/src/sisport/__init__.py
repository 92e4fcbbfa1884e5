"""Qualitative analysis of the planar SIS epidemic field on the Poincare disc."""

__version__ = "0.1.0"
