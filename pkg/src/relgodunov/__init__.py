"""Relativistic perfect fluids in Godunov-variable form.

Modules
-------
spacetime   Minkowski 4-vector algebra, signature (-, +, +, +).
eos         Barotropic, isentropic, product-form and ideal-gas closures.
index       Lichnerowicz index f(p), the nu-current and the (pi, xhat) pair.
godunov     Godunov variables, potentials, fluxes and symmetrizers.
shock       Planar jump conditions, Lax admissibility, production rates.
fvsim       1D HLL finite-volume solver for the barotropic system.
config      Flat key = value configuration files.
verify      Verification suites used by the ``verify`` command.
cli         Command-line entry point.
"""

__version__ = "0.1.0"
