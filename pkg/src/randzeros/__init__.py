"""Random zeros and critical points of SU(2) polynomials, their scaling
limits, and random spherical harmonics."""

__version__ = "0.1.0"
