"""(1+1)-D Minkowski geometry and compactly supported bump test functions.

Coordinates are ``(t, x)``, metric ``diag(+, -)``, natural units.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise ValueError(f"non-finite spacetime point ({self.t}, {self.x})")

    def __neg__(self) -> "SpacetimePoint":
        return SpacetimePoint(-self.t, -self.x)

    def __sub__(self, other: "SpacetimePoint") -> "SpacetimePoint":
        return SpacetimePoint(self.t - other.t, self.x - other.x)


def invariant_interval(p: SpacetimePoint) -> float:
    """t^2 - x^2: positive inside the light cone, negative at spacelike separation."""
    return p.t * p.t - p.x * p.x


class Wedge(enum.Enum):
    RIGHT = "right"
    LEFT = "left"
    NEITHER = "neither"


def wedge_membership(p: SpacetimePoint) -> Wedge:
    """Right wedge x >= |t|, left wedge -x >= |t| (the apex belongs to both; reported as RIGHT)."""
    if p.x >= abs(p.t):
        return Wedge.RIGHT
    if -p.x >= abs(p.t):
        return Wedge.LEFT
    return Wedge.NEITHER


@dataclass(frozen=True)
class BumpFunction:
    """amplitude * exp(-1 / (1 - r^2)) with r the scaled Euclidean distance to ``center``.

    The support is the closed disc of ``radius`` around the center in the
    (t, x) plane; the function and all its derivatives vanish on its rim.
    """

    center: SpacetimePoint
    radius: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"bump radius must be positive, got {self.radius}")
        if not math.isfinite(self.amplitude):
            raise ValueError("bump amplitude must be finite")

    def _r2(self, t, x):
        dt = (np.asarray(t) - self.center.t) / self.radius
        dx = (np.asarray(x) - self.center.x) / self.radius
        return dt, dx, dt * dt + dx * dx

    def profile(self, r2):
        """Radial profile as a function of the scaled squared radius (works for complex r2)."""
        r2 = np.asarray(r2)
        inside = np.real(r2) < 1.0
        safe = np.where(inside, 1.0 - r2, 1.0)
        return np.where(inside, self.amplitude * np.exp(-1.0 / safe), 0.0)

    def __call__(self, t, x):
        _, _, r2 = self._r2(t, x)
        return self.profile(r2)

    def gradient(self, t, x):
        """(d/dt, d/dx) of the bump, analytically."""
        dt, dx, r2 = self._r2(t, x)
        value = self.profile(r2)
        inside = np.real(r2) < 1.0
        denom = np.where(inside, (1.0 - r2) ** 2, 1.0)
        # d/dr2 exp(-1/(1-r2)) = -exp(...) / (1-r2)^2; chain rule d r2/dt = 2 dt / R
        factor = np.where(inside, -value / denom, 0.0) * (2.0 / self.radius)
        return factor * dt, factor * dx

    def dt(self, t, x):
        return self.gradient(t, x)[0]

    def dx(self, t, x):
        return self.gradient(t, x)[1]

    def scaled(self, c: float) -> "BumpFunction":
        return BumpFunction(self.center, self.radius, c * self.amplitude)

    def inside_wedge(self, wedge: Wedge) -> bool:
        """Whether the whole support disc lies strictly inside ``wedge``."""
        t0, x0 = self.center.t, self.center.x
        margin = self.radius * math.sqrt(2.0)
        if wedge is Wedge.RIGHT:
            return x0 - abs(t0) > margin
        if wedge is Wedge.LEFT:
            return -x0 - abs(t0) > margin
        raise ValueError("only the right and left wedges have an interior test")


def random_bump(rng: np.random.Generator, wedge: Wedge | None = None) -> BumpFunction:
    """Bump with radius in [0.3, 0.9], amplitude in [0.5, 1.5].

    With ``wedge`` given the support lies strictly inside it, apex gap at
    least 0.05; otherwise the center is uniform in [-1, 1]^2.
    """
    radius = float(rng.uniform(0.3, 0.9))
    amplitude = float(rng.uniform(0.5, 1.5))
    if wedge is None:
        t0, x0 = rng.uniform(-1.0, 1.0, size=2)
    else:
        t0 = float(rng.uniform(-1.0, 1.0))
        x0 = abs(t0) + math.sqrt(2.0) * radius + float(rng.uniform(0.05, 1.0))
        if wedge is Wedge.LEFT:
            x0 = -x0
        elif wedge is not Wedge.RIGHT:
            raise ValueError("wedge must be RIGHT or LEFT")
    return BumpFunction(SpacetimePoint(float(t0), float(x0)), radius, amplitude)
