"""Level-N quantum dilogarithms, tetrahedral kernels and knot state integrals."""

__version__ = "0.1.0"
