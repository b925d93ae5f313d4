"""
Symmetry of the walk distribution about the starting node.

The limiting distribution is mirror symmetric, pi(d) = pi(N - d), exactly
when

    2 (b/a) p0 q0 cos(phi) = q0² - p0².

For finite times the asymmetry is measured by

    V(t) = sum_d (P(d, t) - P(-d, t))²,   P(-d) read as P((N - d) mod N),

and the mixing time M_eps is the last time V reaches eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from .kernels import backend as _kern
from .model import CoinParams, InitialCondition, WalkConfig, localized_state

__all__ = [
    "EmptyTrace",
    "InsufficientSamples",
    "SymmetryTrace",
    "MixingReport",
    "symmetry_residual",
    "solve_symmetric_phase",
    "variation_trace",
    "evolution_asymmetry",
    "mixing_time",
    "mixing_profile",
    "envelope_slope",
]

TAIL_FRACTION = 0.1
MIN_WINDOW_SAMPLES = 20
# |r| up to this far past 1 is rounding on a boundary solution
ROUND_SLACK = 1e-12


class EmptyTrace(ValueError):
    pass


class InsufficientSamples(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SymmetryTrace:
    times: NDArray[np.int64]
    v: NDArray[np.float64]
    config: WalkConfig | None = None

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.int64)
        v = np.asarray(self.v, dtype=np.float64)
        if times.shape != v.shape or times.ndim != 1:
            raise ValueError("times and v must be 1-D and of equal length")
        if times.size and (times[0] < 1 or np.any(np.diff(times) <= 0)):
            raise ValueError("times must be strictly increasing and >= 1")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "v", v)

    @property
    def horizon(self) -> int:
        return int(self.times[-1]) if self.times.size else 0

    def __len__(self) -> int:
        return int(self.times.size)


@dataclass(frozen=True)
class MixingReport:
    epsilon: float
    m_epsilon: int | None  # None means not converged within the horizon
    t_horizon: int

    @property
    def converged(self) -> bool:
        return self.m_epsilon is not None


def symmetry_residual(coin: CoinParams, init: InitialCondition) -> float:
    lhs = 2.0 * (coin.b / coin.a) * init.p0 * init.q0 * math.cos(init.phi)
    return abs(lhs - (init.q0**2 - init.p0**2))


def solve_symmetric_phase(coin: CoinParams, p0: float) -> tuple[float, ...]:
    """Phases phi making (p0, sqrt(1 - p0²), phi) symmetric, in ascending order.

    Empty when no phase works.
    """
    if not 0.0 < p0 < 1.0:
        raise ValueError(f"p0 must lie in (0, 1) (got {p0})")
    q0 = math.sqrt(1.0 - p0 * p0)
    r = coin.a * (q0 * q0 - p0 * p0) / (2.0 * coin.b * p0 * q0)
    if abs(r) > 1.0 + ROUND_SLACK:
        return ()
    phi = math.acos(min(1.0, max(-1.0, r)))
    return (phi,) if phi == 0.0 else (-phi, phi)


def variation_trace(config: WalkConfig, t_max: int) -> SymmetryTrace:
    """V(t) for t = 1..t_max from one continuous evolution."""
    if t_max < 1:
        raise ValueError(f"t_max must be at least 1 (got {t_max})")
    psi0 = localized_state(config).amplitudes
    _, v = _kern.variation(psi0, config.coin.a, config.coin.b, config.init.x0, int(t_max))
    return SymmetryTrace(np.arange(1, t_max + 1), v, config)


def evolution_asymmetry(config: WalkConfig, t_max: int) -> NDArray[np.float64]:
    """max_d |P(d, t) - P(N - d, t)| for t = 0..t_max."""
    psi0 = localized_state(config).amplitudes
    _, probs = _kern.record(psi0, config.coin.a, config.coin.b, int(t_max), 1)
    n, x0 = config.n, config.init.x0
    d = np.arange(n)
    return np.max(np.abs(probs[:, (x0 + d) % n] - probs[:, (x0 - d) % n]), axis=1)


def mixing_time(trace: SymmetryTrace, epsilon: float) -> MixingReport:
    """Smallest tau with V(t) < epsilon for every recorded t > tau.

    A tau inside the last 10% of the horizon cannot be certified and is
    reported as not converged.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive (got {epsilon})")
    if len(trace) == 0:
        raise EmptyTrace("mixing time needs a non-empty trace")
    above = np.flatnonzero(trace.v >= epsilon)
    tau = int(trace.times[above[-1]]) if above.size else 0
    horizon = trace.horizon
    if tau > (1.0 - TAIL_FRACTION) * horizon:
        return MixingReport(epsilon, None, horizon)
    return MixingReport(epsilon, tau, horizon)


def mixing_profile(trace: SymmetryTrace, epsilons: Iterable[float]) -> list[MixingReport]:
    return [mixing_time(trace, float(eps)) for eps in epsilons]


def envelope_slope(
    trace: SymmetryTrace, t_lo: int, t_hi: int, bins: int = 20
) -> float:
    """Log-log slope of the decaying envelope of V over [t_lo, t_hi].

    The window is cut into logarithmic bins; each bin contributes its peak
    (t, V) pair and a least-squares line is fitted through the log of those
    peaks. Peaks are insensitive to the frequent near-zero dips of V.
    """
    if not 1 <= t_lo < t_hi:
        raise ValueError(f"need 1 <= t_lo < t_hi (got {t_lo}, {t_hi})")
    if t_hi > trace.horizon:
        raise ValueError(f"t_hi={t_hi} beyond trace horizon {trace.horizon}")
    mask = (trace.times >= t_lo) & (trace.times <= t_hi)
    times, v = trace.times[mask], trace.v[mask]
    if times.size < MIN_WINDOW_SAMPLES:
        raise InsufficientSamples(
            f"{times.size} samples in [{t_lo}, {t_hi}], need {MIN_WINDOW_SAMPLES}"
        )
    edges = np.geomspace(t_lo, t_hi, bins + 1)
    slot = np.clip(np.searchsorted(edges, times, side="right") - 1, 0, bins - 1)
    peak_t: list[float] = []
    peak_v: list[float] = []
    for k in range(bins):
        sel = np.flatnonzero(slot == k)
        if sel.size == 0:
            continue
        i = sel[np.argmax(v[sel])]
        if v[i] > 0:
            peak_t.append(float(times[i]))
            peak_v.append(float(v[i]))
    if len(peak_t) < 2:
        raise InsufficientSamples("fewer than two non-zero envelope points")
    slope, _ = np.polyfit(np.log(peak_t), np.log(peak_v), 1)
    return float(slope)


def log_grid(hi: float, lo: float, count: int) -> Sequence[float]:
    """Descending logarithmic grid from hi to lo."""
    return [float(x) for x in np.geomspace(hi, lo, count)]
