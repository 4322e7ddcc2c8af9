"""Steklov and boundary-Laplacian spectra of planar domains, and checks of
the trace / inverse-trace inequalities that relate them."""

__version__ = "0.1.0"
