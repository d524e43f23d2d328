"""Concrete semigroups: Clifford algebras, depolarizing channels, group algebras and friends."""
from .clifford import (CliffordRealization, MonomialSemigroup, anticommutation_residual, clifford_algebra,
                       clifford_derivation, clifford_number_semigroup, clifford_realization,
                       monomial_basis, popcount)
from .depolarizing import (depolarizing_inner_derivation, depolarizing_semigroup, gell_mann_basis,
                           matrix_algebra, trivial_depolarizing)
from .derivation import (Derivation, TripleReport, derivation_triple_check, intertwining_check,
                         linear_map_matrix)
from .groups import (FiniteGroupModel, GroupAlgebra, KMatrix, cnd_check, cnd_violation, cyclic_group,
                     fourier_multiplier_semigroup, integer_k_matrix, k_matrix, left_regular,
                     parse_group_table, rayleigh_ratio, schur_power_bound, symmetric_group, z_truncation)
from .qgram import QGram, inversions, q_gram
from .two_point import two_point_algebra, two_point_ratio, two_point_semigroup, two_point_state
