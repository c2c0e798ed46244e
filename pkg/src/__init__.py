"""Poly Lab - numerical brackets for constants of multivariate polynomial spaces"""

__version__ = "1.0.0"
__author__ = "Poly Lab"
