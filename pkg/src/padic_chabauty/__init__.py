"""p-adic power-series analysis, decent models of odd-degree hyperelliptic
curves, and certified reduction images of the Jacobian logarithm."""

__version__ = "0.1.0"
