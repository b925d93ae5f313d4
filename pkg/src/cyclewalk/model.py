"""
Domain types for coined walks on an N-node cycle.

Positions are 0-indexed, x in [0, N-1], with all arithmetic taken mod N.
A walk state is a flat vector of 2N complex amplitudes laid out as

    index x      -> |x, L>
    index N + x  -> |x, R>
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Mapping

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "ConstraintViolation",
    "DegenerateCycle",
    "Chirality",
    "CoinParams",
    "InitialCondition",
    "WalkConfig",
    "WalkState",
    "DistanceDistribution",
    "encode",
    "decode",
    "validate_config",
    "localized_state",
    "hadamard",
    "cs_a",
    "cs_b",
    "cs_c",
]

UNIT_TOL = 1e-12
NORM_TOL = 1e-10


class ConstraintViolation(ValueError):
    """A walk parameter breaks one of the model invariants."""


class DegenerateCycle(ConstraintViolation):
    """Cycle sizes below 3 are not simple cycles."""


class Chirality(IntEnum):
    L = 0
    R = 1


def encode(x: int, chirality: Chirality | int, n: int) -> int:
    """Flat basis index of |x, chirality> on a cycle of size n."""
    return int(chirality) * n + (x % n)


def decode(index: int, n: int) -> tuple[int, Chirality]:
    """Inverse of :func:`encode`."""
    if not 0 <= index < 2 * n:
        raise IndexError(f"basis index {index} outside [0, {2 * n})")
    return index % n, Chirality(index // n)


def _check_unit_pair(p: float, q: float, names: tuple[str, str]) -> None:
    lo, hi = names
    for name, value in zip(names, (p, q)):
        if not math.isfinite(value):
            raise ConstraintViolation(f"{name} must be finite (got {value!r})")
        if not 0.0 < value < 1.0:
            raise ConstraintViolation(f"{name} must satisfy 0 < {name} < 1 (got {value!r})")
    if abs(p * p + q * q - 1.0) > UNIT_TOL:
        raise ConstraintViolation(f"{lo}²+{hi}² ≠ 1 (got {p * p + q * q!r})")


def _wrap_phase(phi: float) -> float:
    # result lies in [-pi, pi]; odd multiples of pi map to +pi
    wrapped = math.remainder(phi, 2.0 * math.pi)
    if wrapped == -math.pi:
        return math.pi
    return wrapped


@dataclass(frozen=True)
class CoinParams:
    """The real coin [[a, b], [b, -a]] with 0 < a, b < 1 and a² + b² = 1."""

    a: float
    b: float

    def __post_init__(self) -> None:
        _check_unit_pair(self.a, self.b, ("a", "b"))

    @classmethod
    def from_a(cls, a: float) -> "CoinParams":
        return cls(a, math.sqrt(1.0 - a * a))

    def matrix(self) -> NDArray[np.float64]:
        return np.array([[self.a, self.b], [self.b, -self.a]])


@dataclass(frozen=True)
class InitialCondition:
    """Walker localized at ``x0`` with coin state p0|L> + e^{i phi} q0|R>."""

    x0: int
    p0: float
    q0: float
    phi: float

    def __post_init__(self) -> None:
        if int(self.x0) != self.x0 or self.x0 < 0:
            raise ConstraintViolation(f"x0 must be a non-negative integer (got {self.x0!r})")
        _check_unit_pair(self.p0, self.q0, ("p0", "q0"))
        if not -math.pi <= self.phi <= math.pi:
            raise ConstraintViolation(f"phi must lie in [-pi, pi] (got {self.phi!r})")

    @classmethod
    def from_p0(cls, p0: float, phi: float, x0: int = 0) -> "InitialCondition":
        return cls(x0, p0, math.sqrt(1.0 - p0 * p0), _wrap_phase(phi))

    def coin_state(self) -> NDArray[np.complex128]:
        return np.array([self.p0, self.q0 * np.exp(1j * self.phi)], dtype=np.complex128)


@dataclass(frozen=True)
class WalkConfig:
    n: int
    coin: CoinParams
    init: InitialCondition

    def __post_init__(self) -> None:
        if int(self.n) != self.n:
            raise ConstraintViolation(f"n must be an integer (got {self.n!r})")
        if self.n < 3:
            raise DegenerateCycle(f"cycle size must be at least 3 (got {self.n})")
        if self.init.x0 >= self.n:
            raise ConstraintViolation(f"x0={self.init.x0} is not a node of a {self.n}-cycle")

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "coin": {"a": self.coin.a, "b": self.coin.b},
            "init": {
                "x0": self.init.x0,
                "p0": self.init.p0,
                "q0": self.init.q0,
                "phi": self.init.phi,
            },
        }


def _frozen(arr: NDArray) -> NDArray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class WalkState:
    """2N complex amplitudes in the (position, chirality) basis."""

    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size % 2:
            raise ConstraintViolation("amplitudes must be a flat vector of even length")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def n(self) -> int:
        return self.amplitudes.size // 2

    @property
    def left(self) -> NDArray[np.complex128]:
        return self.amplitudes[: self.n]

    @property
    def right(self) -> NDArray[np.complex128]:
        return self.amplitudes[self.n :]

    def amplitude(self, x: int, chirality: Chirality | int) -> complex:
        return complex(self.amplitudes[encode(x, chirality, self.n)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol


@dataclass(frozen=True, eq=False)
class DistanceDistribution:
    """Probabilities indexed by cyclic distance d = (x - x0) mod N."""

    probs: NDArray[np.float64]

    def __post_init__(self) -> None:
        p = np.array(self.probs, dtype=np.float64)
        if p.ndim != 1:
            raise ConstraintViolation("probs must be one-dimensional")
        if np.any(p < -1e-14):
            raise ConstraintViolation(f"negative probability {p.min()!r}")
        object.__setattr__(self, "probs", _frozen(np.maximum(p, 0.0)))

    @property
    def n(self) -> int:
        return self.probs.size

    def __getitem__(self, d: int) -> float:
        return float(self.probs[d % self.n])

    def mirrored(self) -> NDArray[np.float64]:
        """probs[(N - d) mod N] for every d, i.e. P(-d)."""
        return self.probs[(-np.arange(self.n)) % self.n]

    def max_asymmetry(self) -> float:
        return float(np.max(np.abs(self.probs - self.mirrored())))

    def signed(self) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
        """Signed distances in [-floor(N/2), ceil(N/2) - 1] with their probabilities."""
        d = np.arange(-(self.n // 2), (self.n + 1) // 2)
        return d, self.probs[d % self.n]


def validate_config(raw: Mapping[str, Any]) -> WalkConfig:
    """Build a :class:`WalkConfig` from a flat record.

    Expected keys are ``n, a, b, x0, p0, q0, phi``. ``b`` and ``q0`` may be
    omitted, in which case they are completed to unit norm. The phase is
    reduced into [-pi, pi] instead of being rejected.
    """
    try:
        n = raw["n"]
        a = float(raw["a"])
        p0 = float(raw["p0"])
        phi = float(raw.get("phi", 0.0))
        x0 = raw.get("x0", 0)
    except KeyError as exc:
        raise ConstraintViolation(f"missing field {exc.args[0]!r}") from None
    b = float(raw["b"]) if raw.get("b") is not None else math.sqrt(max(0.0, 1.0 - a * a))
    q0 = float(raw["q0"]) if raw.get("q0") is not None else math.sqrt(max(0.0, 1.0 - p0 * p0))
    for name, value in (("n", n), ("x0", x0)):
        if isinstance(value, bool) or float(value) != int(float(value)):
            raise ConstraintViolation(f"{name} must be an integer (got {value!r})")
    if not math.isfinite(phi):
        raise ConstraintViolation(f"phi must be finite (got {phi!r})")
    n, x0 = int(n), int(x0)
    if n < 3:
        raise DegenerateCycle(f"cycle size must be at least 3 (got {n})")
    return WalkConfig(
        n=n,
        coin=CoinParams(a, b),
        init=InitialCondition(x0, p0, q0, _wrap_phase(phi)),
    )


def localized_state(config: WalkConfig) -> WalkState:
    n, init = config.n, config.init
    amps = np.zeros(2 * n, dtype=np.complex128)
    amps[init.x0] = init.p0
    amps[n + init.x0] = init.q0 * np.exp(1j * init.phi)
    return WalkState(amps)


# Hadamard coin and the three symmetric initial coin states used throughout.

def hadamard() -> CoinParams:
    h = math.sqrt(0.5)
    return CoinParams(h, h)


def cs_a(x0: int = 0) -> InitialCondition:
    return InitialCondition(x0, math.sin(math.pi / 8), math.cos(math.pi / 8), 0.0)


def cs_b(x0: int = 0, sign: int = 1) -> InitialCondition:
    s5 = math.sqrt(5.0)
    return InitialCondition(
        x0, math.sqrt((5 - s5) / 10), math.sqrt((5 + s5) / 10), sign * math.pi / 3
    )


def cs_c(x0: int = 0, sign: int = 1) -> InitialCondition:
    h = math.sqrt(0.5)
    return InitialCondition(x0, h, h, sign * math.pi / 2)
