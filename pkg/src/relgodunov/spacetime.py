"""Minkowski 4-vector algebra, signature (-,+,+,+), c = 1."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SuperluminalError

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])


@dataclass(frozen=True)
class FourVector:
    """Four real components plus a variance flag.

    Because the metric is diagonal with entries +-1, raising and lowering
    only flips the sign of the time component.
    """

    components: np.ndarray
    covariant: bool = False

    def __post_init__(self):
        c = np.array(self.components, dtype=float).reshape(4)
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.components, dtype=dtype)

    def __getitem__(self, i):
        return self.components[i]

    def lower(self) -> FourVector:
        if self.covariant:
            return self
        return FourVector(METRIC @ self.components, covariant=True)

    def raise_(self) -> FourVector:
        if not self.covariant:
            return self
        return FourVector(METRIC @ self.components, covariant=False)

    def norm2(self) -> float:
        return dot(self.components, self.components)


def flip(a):
    """Raise or lower an index of a raw component array (last axis)."""
    a = np.array(a, dtype=float)
    a[..., 0] = -a[..., 0]
    return a


def dot(a, b) -> float:
    """Contract two vectors of equal variance with the metric."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return -a[..., 0] * b[..., 0] + np.sum(a[..., 1:] * b[..., 1:], axis=-1)


def lorentz_factor(v) -> float:
    v = np.asarray(v, dtype=float)
    v2 = float(np.dot(v, v))
    if not v2 < 1.0:
        raise SuperluminalError(f"|v| = {np.sqrt(v2):.17g} >= 1")
    return 1.0 / np.sqrt(1.0 - v2)


def four_velocity(v) -> FourVector:
    """Contravariant 4-velocity ``(W, W v)`` for a 3-velocity ``v``."""
    v = np.zeros(3) + np.asarray(v, dtype=float)
    w = lorentz_factor(v)
    return FourVector(np.concatenate([[w], w * v]))


def sample_timelike(seed: int) -> FourVector:
    """Deterministic random covector with negative norm.

    The time component is at least 5% larger in magnitude than the spatial
    norm and its sign is drawn at random, so both orientations occur.
    """
    rng = np.random.default_rng(seed)
    spatial = rng.normal(size=3) * rng.uniform(0.0, 3.0)
    t0 = np.linalg.norm(spatial) * rng.uniform(1.05, 3.0) + rng.uniform(0.05, 1.0)
    if rng.random() < 0.5:
        t0 = -t0
    return FourVector(np.concatenate([[t0], spatial]), covariant=True)
