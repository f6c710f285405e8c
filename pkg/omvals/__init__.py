"""
omvals: p-adic valuations of discriminants, resultants and local differents
computed from OM representations (Montes algorithm, single-factor lifting).
"""

__version__ = "0.1.0"
