"""Discrete-time quantum walks on cycles with a one-parameter coin and swapping shift."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    CoinParams,
    ConstraintViolation,
    DegenerateCycle,
    DistanceDistribution,
    InitialCondition,
    WalkConfig,
    WalkState,
    cs_a,
    cs_b,
    cs_c,
    hadamard,
    localized_state,
    validate_config,
)
from .evolution import evolve, position_distribution, probability_trace  # noqa: E402
from .spectral import eigen_system, eigenstate_vector, spectral_probability  # noqa: E402
from .limiting import (  # noqa: E402
    cesaro_average,
    limiting_distribution,
    limiting_projector_oracle,
)
from .symmetry import (  # noqa: E402
    envelope_slope,
    mixing_time,
    solve_symmetric_phase,
    symmetry_residual,
    variation_trace,
)
from .kernels import BACKEND  # noqa: E402
