"""
Direct time stepping of the walk operator U = S (C x I).

One step sends

    |x, L> -> a|x-1, R> + b|x+1, L>
    |x, R> -> b|x-1, R> - a|x+1, L>

(indices mod N). Stepping never materializes U; the dense matrix exists
only as a verification oracle for small cycles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .kernels import backend as _kern
from .model import (
    CoinParams,
    DistanceDistribution,
    WalkConfig,
    WalkState,
    localized_state,
)

__all__ = [
    "DENSE_MAX_N",
    "ProbabilityTrace",
    "build_evolution_matrix",
    "apply_step",
    "evolve",
    "position_distribution",
    "probability_trace",
]

DENSE_MAX_N = 2048


@dataclass(frozen=True)
class ProbabilityTrace:
    times: tuple[int, ...]
    dists: tuple[DistanceDistribution, ...]

    def as_array(self) -> NDArray[np.float64]:
        return np.stack([dist.probs for dist in self.dists])


def build_evolution_matrix(coin: CoinParams, n: int) -> NDArray[np.float64]:
    """Dense 2N x 2N matrix of U in the model's basis layout.

    Row (x, L) couples only to column x-1 of both blocks, row (x, R) only to
    column x+1. All entries are real.
    """
    if n < 3:
        raise ValueError(f"cycle size must be at least 3 (got {n})")
    if n > DENSE_MAX_N:
        raise ValueError(f"dense matrix limited to n <= {DENSE_MAX_N} (got {n})")
    a, b = coin.a, coin.b
    x = np.arange(n)
    prev, nxt = (x - 1) % n, (x + 1) % n
    u = np.zeros((2 * n, 2 * n))
    u[x, prev] = b
    u[x, n + prev] = -a
    u[n + x, nxt] = a
    u[n + x, n + nxt] = b
    return u


def apply_step(state: WalkState, coin: CoinParams) -> WalkState:
    return WalkState(_kern.evolve(state.amplitudes, coin.a, coin.b, 1))


def evolve(config: WalkConfig, t: int) -> WalkState:
    """State after ``t`` steps from the localized initial state."""
    if t < 0:
        raise ValueError(f"t must be non-negative (got {t})")
    psi0 = localized_state(config).amplitudes
    return WalkState(_kern.evolve(psi0, config.coin.a, config.coin.b, int(t)))


def _to_distance(p_pos: NDArray[np.float64], x0: int) -> DistanceDistribution:
    return DistanceDistribution(np.roll(p_pos, -x0))


def position_distribution(state: WalkState, x0: int) -> DistanceDistribution:
    """P(d) = |amp(x0+d, L)|² + |amp(x0+d, R)|² for d in [0, N)."""
    return _to_distance(_kern.probabilities(state.amplitudes), x0)


def probability_trace(config: WalkConfig, t_max: int, stride: int = 1) -> ProbabilityTrace:
    """Distributions at t = 0, stride, 2*stride, ... <= t_max from one continuous run."""
    if t_max < 0:
        raise ValueError(f"t_max must be non-negative (got {t_max})")
    if stride < 1:
        raise ValueError(f"stride must be at least 1 (got {stride})")
    psi0 = localized_state(config).amplitudes
    _, probs = _kern.record(psi0, config.coin.a, config.coin.b, int(t_max), int(stride))
    x0 = config.init.x0
    times = tuple(range(0, t_max + 1, stride))
    return ProbabilityTrace(times, tuple(_to_distance(row, x0) for row in probs))
