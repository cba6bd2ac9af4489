"""Exact computations in the Yangian double of gl_n."""
__version__ = "0.1.0"
