"""Finite-dimensional gentle algebras, their homotopy categories and smallness checks."""

__version__ = "0.1.0"

# Conventions: left modules; P(v) spanned by paths starting at v; paths are
# written in traversal order; cohomological grading with (Σ^k C)^i = C^{i+k}.
CONVENTIONS = "left-modules/traversal-order/cohomological-v1"
