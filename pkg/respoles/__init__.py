"""Resonance poles, stability charts and order-parameter decay for the delayed Kuramoto-Daido model."""

__version__ = "1.0.0"
