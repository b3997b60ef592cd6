"""Tensor-Hochschild cochains of small monoidal categories, computed exactly.

Modules:

* :mod:`~tensorhoch.aposet` - associahedra, product posets and their admissible paths
* :mod:`~tensorhoch.exactla` - sparse matrices over GF(p) or Q, ranks, complexes, cache
* :mod:`~tensorhoch.moncat` - monoidal presentations, built-in examples, generators
* :mod:`~tensorhoch.tcomplex` - cochain spaces, differentials, signs, total complexes
* :mod:`~tensorhoch.casestudies` - worked computations with independent oracles
* :mod:`~tensorhoch.cli` - the ``tensorhoch`` command
"""

__version__ = "0.1.0"

from .exactla import GF, QQ, SparseMatrix, GradedComplex, cohomology, rank
from .moncat import builtin, validate
from .tcomplex import Window, resolve_signs, total_complex, verify_d_squared

__all__ = ["GF", "QQ", "SparseMatrix", "GradedComplex", "cohomology", "rank", "builtin", "validate", "Window",
           "resolve_signs", "total_complex", "verify_d_squared"]
