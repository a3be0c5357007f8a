"""Secrecy with rate-limited and non-uniform randomization on discrete wiretap channels."""

from .capacity import (
    CapacityResult,
    Envelope,
    RateCurvePoint,
    achievable_rate_renyi,
    rate_curve,
    secrecy_capacity,
    upper_concave_envelope,
)
from .guards import ResourceLimitError
from .info import (
    DiscreteDistribution,
    JointDistribution,
    WiretapChannel,
    bsc,
    bsc_pair,
    conditional_mutual_information,
    entropy,
    is_degraded,
    is_less_capable,
    mutual_information,
    renyi2,
    variational_distance,
)
from .jamming import max_jamming_power, simulate_jamming
from .randomness import (
    Extractor,
    RandomnessSource,
    biased_example_source,
    build_extractor,
    extract,
)
from .wiretap import (
    CodeParams,
    WiretapCode,
    build_random_code,
    decode_ml,
    decode_typicality,
    encode,
    estimate_pe,
    exact_leakage,
    leakage_bound_from_vd,
    resolvability_experiment,
)

__version__ = "0.1.0"
