"""Exact-arithmetic Whittaker module calculator for affine sl2.

Subpackages build on each other roughly bottom-up:

    exact      rationals, sparse vectors, exact row reduction
    algebra    generator symbols and the six bracket tables
    rewrite    PBW normal ordering and monomial orders
    whittaker  concrete module constructions and the vector solver
    quadratic  derived quadratic operators (Virasoro / central field)
    freefield  Weyl x Heisenberg free-field realization
    lattice    half-lattice realization
    harness    verification suites and machine-readable reports
    cli        command line front end
"""

__version__ = "0.1.0"
