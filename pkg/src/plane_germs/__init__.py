"""Exact local algebra of plane curve germs and of map germs (f, g): (C^2, 0) -> (C^2, 0)."""

from .numbers import (AlgebraError, CapacityError, FieldTower, FieldElement,
                      IncompatibleFieldError, minimal_polynomial, tower_degree_cap)
from .bipoly import BiPoly, TruncSeries
from .parser import ParseError, parse_germ, serialize
from .newton import (NewtonDiagram, PrecisionError, factor_edge, initial_newton_polynomial,
                     newton_diagram, rescale_equal, weighted_initial_form)
from .puiseux import Branch, puiseux_expand, semigroup, implicitize
from .invariants import (MethodDisagreement, NonIsolatedError, casas_check, equisingular,
                         equisingularity_type, intersection_multiplicity, milnor_number)
from .discriminant import (DirectImage, ValidationError, direct_image,
                           hironaka_factorization, jacobian, jacobian_newton_diagram)
from .render import render_diagram
from .schema import payload_schema
from .theorems import (InconsistencyError, VerificationReport, atypical_values, key_lemma_check,
                       nu_via_intersection, nu_via_milnor, oracle_discriminant, rescaling_check,
                       tc3_check, verify_main_theorem)

__all__ = [n for n in dir() if not n.startswith("_")]
