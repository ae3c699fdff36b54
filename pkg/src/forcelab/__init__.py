"""forcelab: a finite-scale laboratory for neighborhood-assignment forcing.

Validation, amalgamation and brute-force oracles for finite forcing
conditions, witness checking and search for pair functions, side-condition
forcing over ranked families, and scattering diagnostics for merged chains.
"""

__version__ = "0.1.0"

from .amalgam import (
    AmalgamationError,
    AmalgamHypotheses,
    amalgamate_asymmetric,
    brute_force_common_extension,
    check_amalgam_hypotheses,
    check_star_projection,
    transfer_holds,
)
from .conditions import (
    Condition,
    Delta2Map,
    OrderIso,
    PairTable,
    ValidationReport,
    Violation,
    canonical_order_iso,
    check_projection,
    delta2,
    extends,
    find_isomorphism,
    star,
    validate_condition,
)
from .deltaprop import (
    DeltaSystem,
    SearchResult,
    WitnessReport,
    brute_force_search_pair_table,
    check_bs_witness,
    check_strong_witness,
    family_has_witness,
    recognize_delta_system,
    search_pair_table,
)
from .errors import PreconditionError, PropertyFault
from .sideforce import (
    PCondition,
    RankedFamily,
    StrongDeltaAmalgamInput,
    amalgamate_p_isomorphic,
    amalgamate_p_strong_delta,
    extract_pair_table,
    p_extends,
    p_isomorphic,
    restrict_p,
    supp,
    validate_p_condition,
    validate_ranked_family,
)
from .spacelab import (
    GenericApproximation,
    KillResult,
    SeparatedSequence,
    UniformizedEnsemble,
    basic_nbhd,
    is_left_separated,
    kill_left_separation,
    level_structure,
    levels_summary,
    merge_chain,
    sequence_violations,
    uniformize_ensemble,
    validate_chain,
)

__all__ = [name for name in dir() if not name.startswith("_")]
