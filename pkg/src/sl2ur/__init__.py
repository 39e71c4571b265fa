"""Exact computations in the hyperalgebra U_r of the r-th Frobenius kernel of SL2.

The package works entirely over the prime field F_p.  `pbw` holds the sparse
divided-power PBW engine, `idempotents` the primitive idempotent towers and
their translates, `modules` concrete matrix representations (cyclic modules,
restricted simples, Steinberg products), `oracle` the brute-force linear
algebra ground truth, and `structure` the radical/socle/basis reports that
tie everything together.  `cli` is the batch front end.
"""

from .pbw import AlgebraContext, AlgebraElement

__all__ = ["AlgebraContext", "AlgebraElement"]

__version__ = "0.1.0"
