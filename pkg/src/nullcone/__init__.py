"""Exact computational verification of determinantal nullcone ideals:
Groebner machinery, the three nullcone families with their closed-form
height/arithmetic-rank formulas, hsop-based arithmetic-rank certificates,
the appendix matrix factorizations with chart round trips, and finite-field
point counts of the rank strata.
"""

from .fields import GF, QQ, PrimeField, RationalField, field_from_descriptor
from .groebner import Budget, ResourceLimitError, buchberger, normal_form
from .ideals import (Ideal, eliminate, height, intersect, intersect_many,
                     krull_dimension, radical_equal, radical_member, saturate)
from .nullcones import (FamilyParams, ara_formula, formulas_block,
                        generic_nullcone, height_formula, height_pij,
                        invariant_ring_dim, nullcone_ideal, pfaffian_nullcone,
                        stci_predicate, symmetric_nullcone,
                        variety_of_complexes)
from .orders import GREVLEX, LEX, BlockOrder
from .poly import Polynomial, PolyRing, format_poly, parse_poly

__version__ = "0.1.0"

__all__ = [
    "GF", "QQ", "PrimeField", "RationalField", "field_from_descriptor",
    "Budget", "ResourceLimitError", "buchberger", "normal_form",
    "Ideal", "eliminate", "height", "intersect", "intersect_many",
    "krull_dimension", "radical_equal", "radical_member", "saturate",
    "FamilyParams", "ara_formula", "formulas_block", "generic_nullcone",
    "height_formula", "height_pij", "invariant_ring_dim", "nullcone_ideal",
    "pfaffian_nullcone", "stci_predicate", "symmetric_nullcone",
    "variety_of_complexes",
    "GREVLEX", "LEX", "BlockOrder",
    "Polynomial", "PolyRing", "format_poly", "parse_poly",
]
