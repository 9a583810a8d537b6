"""Location-weight distributions over the content-word positions.

Four article structures encode where important words tend to sit:
rectangle (uniform), inverted pyramid (front-loaded), pyramid
(back-loaded), and hourglass (both ends).  Each yields a strictly
positive weight vector over positions 1..n summing to 1, used as the
teleport distribution of the biased PageRank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .document import STRUCTURES

DEFAULT_GAMMA = 5.0


@dataclass(frozen=True)
class LocationWeights:
    weights: np.ndarray
    structure: str
    gamma: float

    def __len__(self) -> int:
        return len(self.weights)


def _inverted_pyramid(n: int, gamma: float) -> np.ndarray:
    # Decreasing quadratic with vertex at i=n, endpoint ratio
    # LW(1)/LW(n) = gamma, unit sum.  Solving c*(n-1)^2 + d = gamma*d and
    # c*sum((i-n)^2) + n*d = 1 with sum_{i=1..n}(i-n)^2 = (n-1)n(2n-1)/6:
    d = 1.0 / (n + (gamma - 1.0) * n * (2 * n - 1) / (6.0 * (n - 1)))
    c = (gamma - 1.0) * d / (n - 1) ** 2
    i = np.arange(1, n + 1, dtype=float)
    return c * (i - n) ** 2 + d


def location_weights(structure: str, n: int, gamma: float = DEFAULT_GAMMA) -> LocationWeights:
    """Weight vector of length n for the given article structure.

    gamma is the front/back endpoint ratio of the (inverted) pyramid
    curve and must exceed 1; it is ignored for rectangle and hourglass.
    """
    if structure not in STRUCTURES:
        raise ValueError(f"unknown structure '{structure}' (expected one of {STRUCTURES})")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if structure in ("inverted_pyramid", "pyramid") and gamma <= 1.0:
        raise ValueError(f"gamma must be > 1 for {structure}, got {gamma}")

    if n == 1:
        w = np.array([1.0])
    elif structure == "rectangle":
        w = np.full(n, 1.0 / n)
    elif structure == "inverted_pyramid":
        w = _inverted_pyramid(n, gamma)
    elif structure == "pyramid":
        w = _inverted_pyramid(n, gamma)[::-1].copy()
    else:  # hourglass
        i = np.arange(1, n + 1, dtype=float)
        raw = (i - n / 2.0) ** 2 + 1.0
        w = raw / raw.sum()
    w.setflags(write=False)
    return LocationWeights(weights=w, structure=structure, gamma=gamma)
