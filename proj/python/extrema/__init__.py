"""Extreme value statistics for chaotic maps."""

from ._extrema import (
    ConfigurationError,
    DegenerateLimitError,
    DomainError,
    GenerationMode,
    GevLimit,
    InputError,
    MapSystem,
    Observable,
    Scaling,
    StepPath,
    build_path,
    dprime,
    fdd_cdf,
    harmonic_number,
    invert_path,
    ks_test,
    ks_two_sample,
    limit_law,
    naive_forward_orbit,
    poisson_count_test,
    record_times,
    run_cli,
    running_max,
    sample_extremal_path,
    sample_prm,
    selftest,
    series,
    simulate_max,
    simulate_records,
    skorokhod_distance,
    skorokhod_distance_0inf,
    uniform_distance,
    xi_counts,
)

__all__ = [name for name in dir() if not name.startswith("_")]
