"""Thermal Casimir free energy, pressure and entropy between parallel plates."""
__version__ = "0.1.0"
