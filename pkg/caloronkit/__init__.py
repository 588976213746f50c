"""
CaloronKit: numerical caloron correspondence and string-form toolkit.

Discretized differential forms with matrix coefficients on product grids,
Chern-Weil and Chern-Simons forms, string forms and string potentials of
(connection, Higgs field) pairs, and the CS-equivalence test for maps into
the unitary group.
"""

__version__ = "1.0.0"
