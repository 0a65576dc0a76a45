"""
Exact finite-N fluctuation observables of the pinned harmonic chain.
"""

__version__ = "1.0.0"
