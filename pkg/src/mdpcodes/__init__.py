"""Exact-arithmetic construction and verification of MDP convolutional codes over GF(p^m)."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .gf import GF, Field, FieldElement, FieldMatrix, determinant, field_create, rank, right_kernel_basis, submatrix
from .state_space import (
    CodeParams,
    MarkovSequence,
    StateSpace,
    encode,
    hankel_matrix,
    is_controllable,
    is_observable,
    markov_parameters,
    pad_realization,
    random_system,
    simulate,
    terminate_inputs,
    toeplitz_matrix,
)
from .minors import MinorIndex, all_nontrivial_minors_nonzero, first_vanishing_minor, is_trivially_zero
from .distance import (
    DistanceProfile,
    code_indices,
    column_distances,
    free_distance,
    is_mdp,
    is_mdp_bruteforce,
    is_mds,
    is_strongly_mds,
)
from .realization import (
    SearchConfig,
    build_mdp_code,
    field_size_sweep,
    minimal_partial_realization,
    search_superregular_markov,
    tether_degree,
)
from .poly import (
    PolyMatrix,
    check_equivalences,
    generator_matrix,
    mdp_from_parity,
    parity_check_matrix,
    sliding_parity_matrix,
)
