"""Exact invariants of real Bott towers."""
__version__ = '0.1.0'
