"""Stochastic surrogate-Hamiltonian simulation of heat transport through a
double-well molecular junction coupled to two spin baths."""

__version__ = "0.1.0"
