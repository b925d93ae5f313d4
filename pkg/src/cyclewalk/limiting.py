"""
Limiting (time-averaged) distribution of the walk.

The closed form splits the long-time average into a non-degenerate part
(S1 = 1/N), the contribution of degenerate pairs (j, N - j) with the same
sign (S2), and for even N a correction for the self-paired j = N/2 mode
(S3 = 1/N²):

    pi(d) = 1/N - [N even]/N² + S2(d)

    S2(d) = a²/(2N²) sum_{j=1}^{N-1} [cos 2d th + A cos 2(d+1) th + B cos 2(d-1) th]
                                       / (1 - b² cos² th)

with th = theta_j, A = p0² + (b/a) p0 q0 cos phi and B = q0² - (b/a) p0 q0 cos phi.

Two independent oracles are provided: an eigenprojector sum over exactly
degenerate pairs, and a finite Cesàro average of the simulated walk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .kernels import backend as _kern
from .model import DistanceDistribution, WalkConfig, localized_state
from .spectral import EigenSystem, eigen_system, eigenstate_vector

__all__ = [
    "ORACLE_MAX_N",
    "OracleScaleExceeded",
    "LimitingBreakdown",
    "coefficients",
    "s2_closed_form",
    "s2_values",
    "s2_complex",
    "limiting_distribution",
    "limiting_projector_oracle",
    "cesaro_average",
    "site_weight_residual",
    "overlap_weights",
    "overlap_weights_closed",
    "odd_term_sums",
    "paired_overlap",
    "paired_overlap_closed",
]

ORACLE_MAX_N = 512


class OracleScaleExceeded(ValueError):
    """Projector oracle requested above its supported cycle size."""


@dataclass(frozen=True, eq=False)
class LimitingBreakdown:
    s1: float
    s3: float
    s2: NDArray[np.float64]
    pi: DistanceDistribution
    parity_deduction_applied: bool
    imag_residue: float


def coefficients(config: WalkConfig) -> tuple[float, float]:
    """The (A, B) weights of the cos 2(d+1) theta and cos 2(d-1) theta terms."""
    a, b = config.coin.a, config.coin.b
    init = config.init
    cross = (b / a) * init.p0 * init.q0 * np.cos(init.phi)
    return init.p0**2 + cross, init.q0**2 - cross


def _cos_table(n: int) -> NDArray[np.float64]:
    # cos(2 pi k / n) with table[k] == table[n - k] bit for bit
    k = np.arange(n)
    return np.cos(2.0 * np.pi * np.minimum(k, n - k) / n)


def _mode_weights(config: WalkConfig) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
    n, b = config.n, config.coin.b
    j = np.arange(1, n)
    cos_th = _cos_table(n)[j]
    return j, 1.0 / (1.0 - b * b * cos_th * cos_th)


def s2_values(config: WalkConfig) -> NDArray[np.float64]:
    """S2(d) for every d in [0, N); O(N²) with an exact cosine table."""
    n, a = config.n, config.coin.a
    A, B = coefficients(config)
    table = _cos_table(n)
    j, w = _mode_weights(config)
    d = np.arange(n)[:, None]
    terms = (
        table[(2 * d * j) % n]
        + A * table[(2 * (d + 1) * j) % n]
        + B * table[(2 * (d - 1) * j) % n]
    )
    return (a * a / (2.0 * n * n)) * (terms @ w)


def s2_closed_form(config: WalkConfig, d: int) -> float:
    if not 0 <= d < config.n:
        raise ValueError(f"distance must lie in [0, {config.n}) (got {d})")
    return float(s2_values(config)[d])


def s2_complex(config: WalkConfig) -> NDArray[np.complex128]:
    """S2(d) from the complex exponential form; the imaginary part should vanish."""
    n, a = config.n, config.coin.a
    A, B = coefficients(config)
    j, w = _mode_weights(config)
    th = 2.0 * np.pi * j / n
    d = np.arange(n)[:, None]
    e = np.exp(2j * np.pi * ((2 * d * j) % n) / n)
    bracket = 1.0 + A * np.exp(2j * th) + B * np.exp(-2j * th)
    return (a * a / (2.0 * n * n)) * ((e * bracket) @ w)


def limiting_distribution(config: WalkConfig) -> LimitingBreakdown:
    n = config.n
    even = n % 2 == 0
    s1, s3 = 1.0 / n, 1.0 / n**2
    s2 = s2_values(config)
    pi = s1 + s2 - (s3 if even else 0.0)
    imag = float(np.max(np.abs(s2_complex(config).imag)))
    return LimitingBreakdown(
        s1=s1,
        s3=s3,
        s2=s2,
        pi=DistanceDistribution(pi),
        parity_deduction_applied=even,
        imag_residue=imag,
    )


def _degenerate_classes(system: EigenSystem) -> list[list[int]]:
    # eigenvalue classes by structural pairing (j, s) ~ (N - j, s)
    seen: dict[int, list[int]] = {}
    for idx in range(len(system)):
        key = min(idx, system.partner_index(idx))
        seen.setdefault(key, [])
        if idx not in seen[key]:
            seen[key].append(idx)
    return list(seen.values())


def limiting_projector_oracle(config: WalkConfig) -> DistanceDistribution:
    """Long-time average as sum over eigenvalues of |P_u psi(0)|² per site."""
    n = config.n
    if n > ORACLE_MAX_N:
        raise OracleScaleExceeded(f"projector oracle limited to n <= {ORACLE_MAX_N} (got {n})")
    system = eigen_system(config.coin, n)
    vecs = system.vectors()
    psi0 = localized_state(config).amplitudes
    coeff = vecs.conj().T @ psi0
    pi = np.zeros(n)
    for members in _degenerate_classes(system):
        proj = vecs[:, members] @ coeff[members]
        pi += np.abs(proj[:n]) ** 2 + np.abs(proj[n:]) ** 2
    return DistanceDistribution(np.roll(pi, -config.init.x0))


def cesaro_average(config: WalkConfig, t_horizon: int) -> DistanceDistribution:
    """(1/(T+1)) sum_{t=0}^{T} P(d, t) from one continuous evolution."""
    if t_horizon < 0:
        raise ValueError(f"t_horizon must be non-negative (got {t_horizon})")
    psi0 = localized_state(config).amplitudes
    _, total = _kern.cesaro(psi0, config.coin.a, config.coin.b, int(t_horizon))
    return DistanceDistribution(np.roll(total / (t_horizon + 1), -config.init.x0))


# Overlap algebra behind the closed form. These are verification helpers.

def site_weight_residual(system: EigenSystem) -> float:
    """max |(|<x,L|j,±>|² + |<x,R|j,±>|²) - 1/N| over all eigenstates and sites."""
    n = system.n
    worst = 0.0
    for p in system:
        v = eigenstate_vector(p, n)
        w = np.abs(v.left) ** 2 + np.abs(v.right) ** 2
        worst = max(worst, float(np.max(np.abs(w - 1.0 / n))))
    return worst


def overlap_weights(config: WalkConfig) -> NDArray[np.float64]:
    """|<psi(0)|j,±>|² in eigen-system order, from the eigenvectors."""
    system = eigen_system(config.coin, config.n)
    coeff = system.vectors().conj().T @ localized_state(config).amplitudes
    return np.abs(coeff) ** 2


def _overlap_terms(config: WalkConfig) -> tuple[NDArray, NDArray, NDArray, NDArray]:
    # per (j, sign): constant 1/(2N), the b(q0²-p0²) term and the a p0 q0 term
    n, a, b = config.n, config.coin.a, config.coin.b
    init = config.init
    system = eigen_system(config.coin, n)
    sign = np.array([p.sign for p in system], dtype=float)
    root = np.array([p.root for p in system])
    sin_th = np.array([p.sin_theta for p in system])
    cos_th = np.array([p.cos_theta for p in system])
    # sin(theta - phi) from the exact cos/sin of theta
    sin_shift = sin_th * np.cos(init.phi) - cos_th * np.sin(init.phi)
    const = np.full(2 * n, 1.0 / (2 * n))
    second = sign * b * (init.q0**2 - init.p0**2) * sin_th / (2 * n * root)
    third = sign * a * init.p0 * init.q0 * sin_shift / (n * root)
    return sign, const, second, third


def overlap_weights_closed(config: WalkConfig) -> NDArray[np.float64]:
    """|<psi(0)|j,±>|² from the simplified three-term expression."""
    _, const, second, third = _overlap_terms(config)
    return const + second + third


def odd_term_sums(config: WalkConfig) -> dict[str, float]:
    """Sums over j of the two sign-carrying overlap terms.

    ``second_plus``/``second_minus`` are per-sign sums of the sin(theta) term,
    ``third_plus``/``third_minus`` of the sin(theta - phi) term, and
    ``total`` is the sum of both terms over j and sign.
    """
    sign, _, second, third = _overlap_terms(config)
    plus, minus = sign > 0, sign < 0
    return {
        "second_plus": float(second[plus].sum()),
        "second_minus": float(second[minus].sum()),
        "third_plus": float(third[plus].sum()),
        "third_minus": float(third[minus].sum()),
        "total": float((second + third).sum()),
    }


def paired_overlap(config: WalkConfig, j: int) -> complex:
    """sum_± <j,±|psi(0)><psi(0)|N-j,±> from the eigenvectors."""
    n = config.n
    system = eigen_system(config.coin, n)
    psi0 = localized_state(config).amplitudes
    jj = (n - j) % n or n
    total = 0j
    for s in (1, -1):
        v = eigenstate_vector(system.point(j, s), n).amplitudes
        w = eigenstate_vector(system.point(jj, s), n).amplitudes
        total += np.vdot(v, psi0) * np.vdot(psi0, w)
    return complex(total)


def paired_overlap_closed(config: WalkConfig, j: int) -> complex:
    """Closed form of :func:`paired_overlap`."""
    n, a, b = config.n, config.coin.a, config.coin.b
    A, B = coefficients(config)
    p = eigen_system(config.coin, n).point(j, 1)
    x0 = config.init.x0
    lead = a * np.exp(-2j * np.pi * ((2 * x0 * j) % n) / n) / (n * p.root)
    return complex(lead * (A + B * np.exp(-2j * p.theta)))
