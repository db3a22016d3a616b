"""Interior transmission eigenvalues: Galerkin curve sweeps with a radial
Bessel-determinant oracle, for Schrodinger and Helmholtz scattering."""

__version__ = "0.1.0"
