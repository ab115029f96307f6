"""Exact-arithmetic certification of free-product structure for degree-5
integer matrix groups defined by companion matrices of cyclotomic products.

The public surface groups into:

* polynomial and matrix arithmetic (`polynomials`, `matrices`),
* the rational polyhedral cone kernel (`cones`),
* the table verifiers and presentation classifier (`pingpong`),
* the heuristic certificate search (`search`),
* the bundled case catalog, batch runner, and reporting (`catalog`,
  `runner`, `report`, `cli`).
"""

__version__ = "0.1.0"

from .polynomials import (
    IntPolynomial,
    ParamVector,
    cyclotomic,
    polynomial_from_params,
    coprime_roots,
)
from .matrices import (
    Matrix5,
    Signature,
    companion_matrix,
    invariant_form,
    signature,
    unipotency_index,
    order_of,
    minus_identity_power,
)
from .cones import (
    Cone,
    ConeSet,
    cone_from_rays,
    contains_ray,
    is_subcone,
    intersect,
    transform,
    transform_set,
    are_disjoint_open,
    contained_in_set,
)

__all__ = [
    "__version__",
    "IntPolynomial",
    "ParamVector",
    "cyclotomic",
    "polynomial_from_params",
    "coprime_roots",
    "Matrix5",
    "Signature",
    "companion_matrix",
    "invariant_form",
    "signature",
    "unipotency_index",
    "order_of",
    "minus_identity_power",
    "Cone",
    "ConeSet",
    "cone_from_rays",
    "contains_ray",
    "is_subcone",
    "intersect",
    "transform",
    "transform_set",
    "are_disjoint_open",
    "contained_in_set",
]
