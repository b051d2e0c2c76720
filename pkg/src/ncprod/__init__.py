"""Exact verification toolkit for quadratic algebras built from R-matrices of Euclidean product type."""

from .algebra import AlgebraElement, QuadraticAlgebra, graded_dimension, multiply, normal_form, reduce_mod_spheres
from .families import FamilySpec, catalog, make, make_family
from .quaternion import Quaternion, j_matrix
from .rmatrix import RMatrix, check_axioms
from .scalar import ApproxComplex, GaussianRational

__all__ = [
    "AlgebraElement",
    "ApproxComplex",
    "FamilySpec",
    "GaussianRational",
    "Quaternion",
    "QuadraticAlgebra",
    "RMatrix",
    "catalog",
    "check_axioms",
    "graded_dimension",
    "j_matrix",
    "make",
    "make_family",
    "multiply",
    "normal_form",
    "reduce_mod_spheres",
]
