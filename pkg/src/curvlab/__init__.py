"""Numerical checks of curvature and log-Sobolev-type inequalities for quantum Markov semigroups."""
__version__ = "0.1.0"

from .algebra import (CondExpectation, DensityState, Element, FiniteAlgebra, conditional_expectation,
                      identity_expectation, maximally_mixed, random_density, tensor, tensor_element,
                      trace_expectation)
from .config import Tolerances, get_tolerances, override_tolerances
from .entropy_curvature import (best_bakry_emery_lambda, entropy, entropy_decay_check, fisher_information,
                                gamma2_form, gamma_form, gradient_estimate_check, mlsi_ratio,
                                mlsi_ratio_search, relative_entropy)
from .errors import CurvlabError
from .semigroup import (QMSemigroup, Superoperator, build_semigroup, cb_return_time, choi_norm,
                        choi_operator, commuting_square_check, fixed_point_expectation,
                        generator_from_spectrum, spectral_gap, tensor_semigroup)
