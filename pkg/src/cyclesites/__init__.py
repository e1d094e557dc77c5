"""Coupled simulation and exact cumulants for permutation cycle counts and
coalescent segregating sites, with their joint Brownian-sheet limit."""

from .coalescent import (
    CoalescentPath,
    MutationCounts,
    compute_F_n,
    sample_coalescent_times,
    sample_mutations_conditional,
    sample_mutations_geometric,
)
from .coupling import (
    Block,
    GridSpec,
    MomentBoundResult,
    NormalizedField,
    PointField,
    TwoParamField,
    block_increment,
    build_coupled_field,
    exact_site_covariance,
    marginal_M,
    moment_bound_estimate,
    normalize_field,
    sample_point_field,
)
from .cumulants import (
    CumulantTable,
    NegBinomialParams,
    SetPartition,
    enumerate_set_partitions,
    neg_binomial_cumulant,
    neg_binomial_cumulant_via_total_cumulance,
    scaled_sites_cumulant,
    sites_cumulant,
    sites_cumulant_polylog,
    tree_length_cumulant,
    tree_length_cumulant_limit,
)
from .ewens import (
    CycleCountSample,
    brute_force_cycle_pmf,
    exact_cycle_pmf,
    sample_crp_cycles,
    sample_feller_cycles,
)
from .rng import substream, substream_key
from .sheet import SheetSample, sample_sheet, sheet_covariance
from .special_functions import (
    HarmonicSpec,
    StirlingCache,
    floor_power,
    harmonic,
    harmonic_number,
    polylog_neg,
    polylog_neg_series,
    rising_factorial,
    stirling2,
    zeta_partial,
)
from .stats import (
    ChiSquareResult,
    CovarianceEstimate,
    SampleSummary,
    chi_square_critical,
    chi_square_gof,
    chi_square_two_sample,
    cross_covariance,
    cumulants_to_moments,
    ks_statistic,
    moments_to_cumulants,
    summarize,
)

__version__ = "0.1.0"
