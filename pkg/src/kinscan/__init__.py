"""kinscan: familial DNA database searching.

Scans an STR profile database for relatives of a target profile, turns the
per-member kinship indices into database likelihood ratios and posterior
probabilities of relatedness, and selects candidate subsets whose
probability of containing the true relative is controlled.  A simulation
harness validates the statistical guarantees at desk scale.
"""

from .errors import (
    DataValidationError,
    DegenerateEvidenceError,
    DisjointPanelsError,
    EnumerationCapError,
    KinscanError,
)
from .genetics import (
    FULL_SIBLING,
    HALF_SIBLING,
    IDENTITY,
    PARENT_CHILD,
    RELATIONSHIPS,
    UNRELATED,
    FrequencyTable,
    LrDistribution,
    Profile,
    Relationship,
    canonical_genotype,
    derive_rng,
    enumerate_lr_distribution,
    kinship_index,
    relationship_by_name,
    rmp,
    sample_ki_values,
    sample_relative,
    sample_unrelated,
)
from .database import ProfileDatabase, sample_database
from .inference import (
    LrVector,
    PosteriorResult,
    PriorVector,
    compute_lr_vector,
    db_lr,
    db_lr_uniform,
    member_lr,
    member_lr_uniform,
    posterior,
    posterior_given_in_db,
    subset_posterior,
)
from .strategies import (
    SubsetSelection,
    ThresholdEstimate,
    conditional_subset,
    estimate_s_beta,
    estimate_t_alpha,
    heterogeneous_conditional,
    heterogeneous_target_centered,
    ibs_lr_subset,
    rank,
    target_centered_subset,
)
from .simulation import (
    EXPERIMENTS,
    ExperimentConfig,
    ExperimentReport,
    default_config,
    merge_reports,
    run_experiment,
)

__version__ = "0.1.0"
