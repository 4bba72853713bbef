"""Exact unprojection laboratory: Groebner bases, Betti tables and partial elimination ideals."""

from .polyring import (DEFAULT_PRIME, GREVLEX, LEX, Field, Monomial, MonomialOrder, Polynomial,
                       PolyRing, RingMap, apply_map, block_order, coefficient_of_power,
                       monomial_compare, multigrade_select, parse_polynomial)
from .groebner import (ComputationAborted, Ideal, eliminate, groebner_basis, intersection,
                       normal_form, quotient, saturate)

__version__ = "0.1.0"
