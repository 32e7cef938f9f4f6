"""Highest-weight calculus for the super Yangian Y(gl(m|n)) over the rationals."""
__version__ = "0.1.0"
