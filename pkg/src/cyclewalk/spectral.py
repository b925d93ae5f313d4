"""
Closed-form spectrum of the walk operator.

For theta_j = 2 pi j / N, j = 1..N, and s_j = sqrt(1 - b² cos² theta_j) the
eigenpairs are

    u_{j,±}   = b cos theta_j ± i s_j
    M_{j,±}   = (s_j ± b sin theta_j) / a
    Z_{j,±}   = a / sqrt(N [a² + (a M_{j,±})²])
    |j,±>     = sum_k Z e^{i k theta_j} (|k,L> + M e^{i theta_j ∓ i pi/2} |k,R>)

The eigenvalue condition comes from Chebyshev recurrences: with
2x = (u² + 1) / (b u) the left components obey a U_n recurrence and the
closing condition reduces to T_N(x) = 1, i.e. x_j = cos theta_j.

Degenerate partners (j, s) and (N - j, s) are evaluated from the same
reduced index so their eigenvalues agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .model import CoinParams, DistanceDistribution, WalkConfig, WalkState, localized_state

__all__ = [
    "chebyshev_t",
    "chebyshev_u",
    "eigen_condition",
    "chebyshev_argument",
    "SpectralPoint",
    "EigenSystem",
    "IdentityReport",
    "eigen_system",
    "eigenstate_vector",
    "zm_identity_report",
    "recurrence_residual",
    "chebyshev_chain_residual",
    "spectral_probability",
]


def chebyshev_t(n: int, x: ArrayLike) -> np.ndarray | float:
    """Chebyshev polynomial of the first kind by forward recurrence."""
    if n < 0:
        raise ValueError(f"degree must be non-negative (got {n})")
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), x.copy()
    if n == 0:
        return _scalar(prev)
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return _scalar(cur)


def chebyshev_u(n: int, x: ArrayLike) -> np.ndarray | float:
    """Chebyshev polynomial of the second kind by forward recurrence.

    Negative degrees follow the recurrence backwards: U_{-1} = 0 and
    U_{-2} = -1. Both appear when the left-component chain is written for
    the first two sites.
    """
    if n < -2:
        raise ValueError(f"degree must be >= -2 (got {n})")
    x = np.asarray(x, dtype=float)
    if n == -2:
        return _scalar(-np.ones_like(x))
    if n == -1:
        return _scalar(np.zeros_like(x))
    prev, cur = np.ones_like(x), 2.0 * x
    if n == 0:
        return _scalar(prev)
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return _scalar(cur)


def _scalar(arr: np.ndarray) -> np.ndarray | float:
    return float(arr) if arr.ndim == 0 else arr


def eigen_condition(n: int, x: ArrayLike) -> np.ndarray | float:
    """Determinant of the two closing equations for the first two left amplitudes.

    Equals 2 (1 - T_n(x)); vanishes exactly on the eigenvalue set.
    """
    u2, u3, u1 = chebyshev_u(n - 2, x), chebyshev_u(n - 3, x), chebyshev_u(n - 1, x)
    return (u2 + 1.0) ** 2 - (2.0 * np.asarray(x) + u3) * u1


def chebyshev_argument(u: complex, b: float) -> float:
    """x with 2x = (u² + 1)/(b u); real for unimodular u."""
    return ((u * u + 1.0) / (2.0 * b * u)).real


def _trig(j: int, n: int) -> tuple[float, float]:
    # cos/sin of 2 pi j / n from the reduced index min(r, n - r)
    r = j % n
    rr, sgn = (r, 1.0) if r <= n - r else (n - r, -1.0)
    if rr == 0:
        return 1.0, 0.0
    if 2 * rr == n:
        return -1.0, 0.0
    if 4 * rr == n:
        return 0.0, sgn
    ang = 2.0 * math.pi * rr / n
    return math.cos(ang), sgn * math.sin(ang)


@dataclass(frozen=True)
class SpectralPoint:
    j: int
    sign: int
    theta: float
    u: complex
    z: float
    m: float
    cos_theta: float = field(repr=False)
    sin_theta: float = field(repr=False)

    @property
    def label(self) -> str:
        return "+" if self.sign > 0 else "-"

    @property
    def root(self) -> float:
        """sqrt(1 - b² cos² theta), the |Im u| of the eigenvalue."""
        return abs(self.u.imag)


def _point(coin: CoinParams, n: int, j: int, sign: int) -> SpectralPoint:
    a, b = coin.a, coin.b
    c, s = _trig(j, n)
    root = math.sqrt(1.0 - b * b * c * c)
    am = root + sign * b * s
    return SpectralPoint(
        j=j,
        sign=sign,
        theta=2.0 * math.pi * j / n,
        u=complex(b * c, sign * root),
        z=a / math.sqrt(n * (a * a + am * am)),
        m=am / a,
        cos_theta=c,
        sin_theta=s,
    )


@dataclass(frozen=True)
class EigenSystem:
    """All 2N eigenpairs, ordered j = 1..N and + before - within each j."""

    points: tuple[SpectralPoint, ...]
    n: int
    coin: CoinParams

    def __iter__(self) -> Iterator[SpectralPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def point(self, j: int, sign: int) -> SpectralPoint:
        return self.points[2 * (j - 1) + (0 if sign > 0 else 1)]

    def eigenvalues(self) -> NDArray[np.complex128]:
        return np.array([p.u for p in self.points])

    def vectors(self) -> NDArray[np.complex128]:
        """2N x 2N matrix whose columns are the eigenstates in point order."""
        return np.column_stack([eigenstate_vector(p, self.n).amplitudes for p in self.points])

    def partner_index(self, idx: int) -> int:
        """Index of (N - j, same sign); N maps to itself, N/2 to itself."""
        p = self.points[idx]
        jj = (self.n - p.j) % self.n or self.n
        return 2 * (jj - 1) + idx % 2


def eigen_system(coin: CoinParams, n: int) -> EigenSystem:
    if n < 3:
        raise ValueError(f"cycle size must be at least 3 (got {n})")
    pts = tuple(_point(coin, n, j, s) for j in range(1, n + 1) for s in (1, -1))
    return EigenSystem(points=pts, n=n, coin=coin)


def eigenstate_vector(point: SpectralPoint, n: int) -> WalkState:
    k = np.arange(n)
    # e^{i k theta_j} with the exponent reduced mod n first
    phase = np.exp(2j * np.pi * ((k * point.j) % n) / n)
    shift = np.exp(2j * np.pi * (point.j % n) / n)
    left = point.z * phase
    right = (point.z * point.m) * (-1j * point.sign) * shift * phase
    return WalkState(np.concatenate((left, right)))


@dataclass(frozen=True)
class IdentityReport:
    """Worst residual of each Z/M identity over every j."""

    z_squared: float
    zm_squared: float
    z_product: float
    normalization: float
    m_product: float
    z_swap: float

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)

    def max(self) -> float:
        return max(self.__dict__.values())


def zm_identity_report(coin: CoinParams, n: int) -> IdentityReport:
    a, b = coin.a, coin.b
    res = dict.fromkeys(IdentityReport.__dataclass_fields__, 0.0)

    def bump(key: str, value: float) -> None:
        res[key] = max(res[key], abs(value))

    system = eigen_system(coin, n)
    for j in range(1, n + 1):
        p, q = system.point(j, 1), system.point(j, -1)
        root, bs = p.root, b * p.sin_theta
        half = 2.0 * n * root
        bump("z_squared", p.z**2 - (root - bs) / half)
        bump("z_squared", q.z**2 - (root + bs) / half)
        bump("zm_squared", (p.z * p.m) ** 2 - (root + bs) / half)
        bump("zm_squared", (q.z * q.m) ** 2 - (root - bs) / half)
        target = a / half
        bump("z_product", p.z * q.z - target)
        bump("z_product", p.z**2 * p.m - target)
        bump("z_product", q.z**2 * q.m - target)
        bump("normalization", p.z**2 * (1.0 + p.m**2) - 1.0 / n)
        bump("normalization", q.z**2 * (1.0 + q.m**2) - 1.0 / n)
        bump("m_product", p.m * q.m - 1.0)
        bump("z_swap", p.z * p.m - q.z)
        bump("z_swap", q.z * q.m - p.z)
    return IdentityReport(**res)


def recurrence_residual(system: EigenSystem) -> float:
    """Worst violation of the 2N linear eigen-equations, cyclically.

    b α_{k,L} - a α_{k,R} = u α_{k+1,L}  and  a α_{k,L} + b α_{k,R} = u α_{k-1,R}.
    """
    a, b, n = system.coin.a, system.coin.b, system.n
    worst = 0.0
    for p in system:
        vec = eigenstate_vector(p, n)
        al, ar = vec.left, vec.right
        lhs1 = b * al - a * ar
        lhs2 = a * al + b * ar
        worst = max(
            worst,
            float(np.max(np.abs(lhs1 - p.u * np.roll(al, -1)))),
            float(np.max(np.abs(lhs2 - p.u * np.roll(ar, 1)))),
        )
    return worst


def chebyshev_chain_residual(point: SpectralPoint, n: int, b: float) -> float:
    """Check α_{k,L} = U_{k-2}(x) α_{2,L} - U_{k-3}(x) α_{1,L} for k = 1..N.

    Sites are numbered from 1 here, so α_{k,L} is the amplitude at index k - 1
    of the eigenvector, and x is recovered from the eigenvalue itself.
    """
    al = eigenstate_vector(point, n).left
    x = chebyshev_argument(point.u, b)
    worst = 0.0
    for k in range(1, n + 1):
        pred = chebyshev_u(k - 2, x) * al[1] - chebyshev_u(k - 3, x) * al[0]
        worst = max(worst, abs(pred - al[k - 1]))
    return worst


def spectral_probability(config: WalkConfig, t: int) -> DistanceDistribution:
    """P(d, t) from the eigen-expansion sum_{j,±} u^t |j,±><j,±|psi(0)>."""
    if t < 0:
        raise ValueError(f"t must be non-negative (got {t})")
    system = eigen_system(config.coin, config.n)
    vecs = system.vectors()
    psi0 = localized_state(config).amplitudes
    coeff = vecs.conj().T @ psi0
    phases = np.exp(1j * t * np.angle(system.eigenvalues()))
    psi_t = vecs @ (phases * coeff)
    n = config.n
    p = np.abs(psi_t[:n]) ** 2 + np.abs(psi_t[n:]) ** 2
    return DistanceDistribution(np.roll(p, -config.init.x0))
