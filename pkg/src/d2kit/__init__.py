"""Exact computational toolkit for depth-two algebra extensions.

Builds, from a finite-dimensional unital extension of algebras over an exact
field, the centralizer, the endomorphism and bimodule-endomorphism algebras,
the B-central tensor square with its induced algebra structure, one-sided
depth-two quasibases, the associated left and right bialgebroids with machine
checks of every axiom, the Galois coactions on the endomorphism tower and on
the extension itself, and (over a base with a symmetric separability element)
the antipode making the opposite co-opposite tensor-square bialgebroid a Hopf
algebroid.  Everything is computed exactly, over the rationals or a prime
field.
"""

from .fields import GF, QQ, field_from_name
from .algebras import (Algebra, AlgebraElement, group_algebra, make_algebra,
                       matrix_algebra, opposite, product_algebra)
from .extensions import (Extension, identity_extension, make_extension,
                         opposite_extension, scalar_extension)
from .depth2 import (is_h_separable, left_d2_quasibase, right_d2_quasibase,
                     verify_quasibase)

__all__ = [
    "GF", "QQ", "field_from_name", "Algebra", "AlgebraElement",
    "group_algebra", "make_algebra", "matrix_algebra", "opposite",
    "product_algebra", "Extension", "identity_extension", "make_extension",
    "opposite_extension", "scalar_extension", "is_h_separable",
    "left_d2_quasibase", "right_d2_quasibase", "verify_quasibase",
]
