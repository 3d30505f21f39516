"""Exact computation of fractional Dehn twist coefficients of surface
mapping classes and closed braids, open book foliation certificate
checking, and 3-manifold decision criteria."""

__version__ = "0.1.0"
