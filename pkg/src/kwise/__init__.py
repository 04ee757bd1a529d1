"""Minimal-entropy d-wise independent sample spaces and entropy lower bounds."""

from .space import (
    Marginal,
    SampleSpace,
    SpaceFormatError,
    marginal,
    max_point_probability,
    min_entropy,
    shannon_entropy,
)
from .verify import (
    IndependenceReport,
    WitnessMatrix,
    build_witness_matrix,
    cantelli_bound,
    check_dwise_independence,
    column_gram_defect,
)
from .bounds import (
    BoundReport,
    PhaseAngles,
    entropy_bound_pairwise,
    entropy_bound_pairwise_uniform_q,
    min_entropy_bound_dwise,
    min_entropy_bound_finite,
    min_entropy_bound_pairwise,
    solve_phase_angles,
    witness_matrix_finite,
)

__version__ = "0.1.0"
