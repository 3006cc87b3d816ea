"""Partial information rate decomposition for Gaussian VAR processes.

Channel indices are 0-based. Rates are in nats unless ``bits=True`` is passed
to a ``to_json`` method.
"""

from ._core import (
    DEFAULT_GRID_POINTS,
    ConsistencyError,
    DataError,
    Decomposition,
    DegenerateSpectrumError,
    EstimationError,
    IncompleteInputError,
    NumericalError,
    ParseError,
    PirdError,
    PirdResult,
    RangeError,
    SizeError,
    StabilityError,
    Summary,
    VarModel,
    __version__,
    build_model,
    decompose,
    estimate,
    process_covariance,
    run_sweep,
    sample_covariance,
    select_order,
    shuffle_surrogate,
    significance,
    simulate,
    static_decomposition,
    static_pid,
    zero_lag_covariance,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
