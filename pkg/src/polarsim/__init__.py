"""Monte-Carlo simulation of polarization-reconfigurable MIMO links.

The package models each antenna as a pair of orthogonally polarized elements
behind one RF chain with a phase shifter, optimizes the per-antenna phase
shifts for capacity, and compares the result against fixed- and
switched-polarization benchmarks over Rayleigh-fading ensembles.
"""

from .baselines import (
    CPA_PAIR,
    LPA_PAIR,
    PolarizationVectorPair,
    SchemeId,
    dpa_capacity,
    fpa_rate,
    paa_optimize,
    scheme_rate,
    spra_optimize,
)
from .channel import (
    ChannelParams,
    PolarizedChannel,
    apply_correlation,
    apply_xpi,
    depolarization_mask,
    generate,
    psd_sqrt_2x2,
)
from .errors import (
    ConfigError,
    InvalidInputError,
    InvalidParameterError,
    OutOfRangeError,
    UnsupportedConfigurationError,
)
from .experiments import (
    ExperimentConfig,
    RateSample,
    catalog,
    convergence_trace,
    list_experiments,
    read_csv,
    run_experiment,
    run_to_csv,
    snr_gain,
    write_csv,
)
from .matkit import GaussianSource, SvdResult, gram_trace, sample_cscg, svd
from .polarforming import (
    EPSILON,
    MAX_ITERATIONS,
    OptimizeResult,
    PhaseConfig,
    WaterFillResult,
    capacity_upper_bound,
    effective_channel,
    mimo_capacity,
    optimize_mimo,
    optimize_miso_simo,
    optimize_single_sided,
    pfv_rx,
    pfv_tx,
    phase_argmax,
    siso_optimal_phase,
    water_fill,
)

__version__ = "0.1.0"
