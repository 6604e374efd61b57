"""Numerics for the exact trade-off between bipartite entanglement and
pretty-good-measurement guessing probability.

The package verifies, at machine precision, that measuring one half of a
bipartite state in a complete set of mutually unbiased bases (or any other
measurement family generating a complex projective 2-design) ties Bob's
guessing probability to the state's conditional collision entropy through
an exact equality, together with the tight n-basis bounds, an
entanglement witness on joint statistics, and a monogamy equation for
tripartite pure states.
"""

from .designs import (
    MeasurementFamily,
    Setting,
    clifford_orbit_family,
    design_defect,
    mub_family,
    sic_povm,
    unbiasedness_defect,
)
from .entropies import (
    CqEnsemble,
    JointDistribution,
    classical_h2_cond,
    cq_embedding,
    cq_state,
    d0_relative,
    family_guess_prob,
    h2nu,
    h2nu_outcomes,
    joint_from_state,
    measure_family,
    measure_in_basis,
    pg_recovery_fidelity,
    pg_recovery_fidelity_explicit,
    pgm_guess_prob,
)
from .errors import (
    DesignDefectError,
    DimensionError,
    EntguessError,
    FormatError,
    InfiniteDivergence,
    NotPositiveError,
    ParameterError,
    UnsupportedDimensionError,
    UnsupportedFamilyError,
)
from .game import GameResult, simulate_game
from .linops import (
    RANK_TOL,
    EigenDecomposition,
    eigh_decomp,
    func_on_support,
    max_entangled,
    partial_trace,
    pure_target_fidelity,
    support_projector,
    swap_operator,
    tensor,
)
from .relations import (
    EPR,
    HEISENBERG,
    RelationReport,
    achiever_state,
    equality_report,
    guessing_bounds,
    monogamy_report,
    nbasis_bounds,
    two_to_full_bound,
    witness,
)
from .states import (
    DensityMatrix,
    SeedSpec,
    haar_unitary,
    mixed_rank_states,
    purify,
    random_density,
    random_pure,
    random_separable,
    schmidt_values,
)

__version__ = "0.1.0"
