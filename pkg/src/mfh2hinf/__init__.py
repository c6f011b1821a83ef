"""Finite-horizon mixed H2/H-infinity synthesis for discrete-time
mean-field stochastic systems with multiplicative noise."""

__version__ = "0.1.0"
