"""Joint sign statistics for paired measurements along planar axes.

The joint distribution over the four sign outcomes depends on the two
measurement directions only through the angle between them.  A mixing
parameter ``p`` interpolates between perfect anti-correlation along a
common axis (``p = 1``) and independent fair signs (``p = 0``):

    P(sigma_a, sigma_b) = (1 - p * sigma_a * sigma_b * cos(delta)) / 4

with ``delta`` the angle between the two axes.  Directions are kept as
angles rather than 2-vectors so the dot product is a single cosine and
cannot drift off the unit circle.

All samplers take an explicit ``numpy.random.Generator``; nothing in this
module owns global random state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PlanarDirection:
    """Unit direction in the plane, stored as its polar angle in [0, 2pi)."""

    angle: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.angle):
            raise ValueError(f"direction angle must be finite, got {self.angle}")
        object.__setattr__(self, "angle", float(self.angle) % TWO_PI)

    @property
    def unit_vector(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle)])


@dataclass(frozen=True)
class SignPair:
    """One joint outcome: both fields are exactly +1 or -1."""

    sigma_a: int
    sigma_b: int

    def __post_init__(self) -> None:
        if self.sigma_a not in (-1, 1) or self.sigma_b not in (-1, 1):
            raise ValueError(
                f"signs must be +1 or -1, got ({self.sigma_a}, {self.sigma_b})"
            )


@dataclass(frozen=True)
class WernerParameter:
    """Mixing weight in [0, 1]: 1 = fully correlated pair, 0 = fair coins."""

    p: float

    def __post_init__(self) -> None:
        if not (isinstance(self.p, (int, float)) and 0.0 <= self.p <= 1.0):
            raise ValueError(f"mixing parameter must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "p", float(self.p))


def outcome_probability(
    pair: SignPair,
    n_a: PlanarDirection,
    n_b: PlanarDirection,
    p: WernerParameter,
) -> float:
    """Probability of ``pair`` when measuring along ``n_a`` and ``n_b``.

    The four probabilities for fixed directions sum to 1 and each
    single-side marginal is exactly 1/2 for any mixing parameter.
    """
    delta = n_a.angle - n_b.angle
    return 0.25 * (1.0 - p.p * pair.sigma_a * pair.sigma_b * math.cos(delta))


def sample_direction(rng: np.random.Generator) -> PlanarDirection:
    """Draw a direction with angle uniform on [0, 2pi)."""
    return PlanarDirection(rng.uniform(0.0, TWO_PI))


def sample_sign_arrays(
    delta: np.ndarray,
    p: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sign sampling for an array of direction differences.

    Factorized exactly as the joint law dictates: ``sigma_a`` is a fair
    sign, then ``sigma_b = -sigma_a`` with probability
    ``(1 + p cos(delta)) / 2``.  Consumes two uniform blocks from ``rng``
    in a fixed order (all sigma_a draws, then all sigma_b draws), which is
    the determinism contract relied on by the ensemble code.
    """
    delta = np.asarray(delta, dtype=float)
    sigma_a = np.where(rng.random(delta.shape) < 0.5, 1, -1)
    p_anti = 0.5 * (1.0 + p * np.cos(delta))
    sigma_b = np.where(rng.random(delta.shape) < p_anti, -sigma_a, sigma_a)
    return sigma_a, sigma_b


def sample_outcomes(
    n_a: PlanarDirection,
    n_b: PlanarDirection,
    p: WernerParameter,
    rng: np.random.Generator,
) -> SignPair:
    """Draw one correlated sign pair for the given measurement axes."""
    sigma_a, sigma_b = sample_sign_arrays(
        np.asarray(n_a.angle - n_b.angle), p.p, rng
    )
    return SignPair(int(sigma_a), int(sigma_b))
