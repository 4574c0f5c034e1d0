"""Exact-arithmetic toolkit for even integral lattices: discriminant forms,
glueing, spinor norms, definite-lattice enumeration, and the bundled
catalog/corpus data."""

__version__ = "0.1.0"
