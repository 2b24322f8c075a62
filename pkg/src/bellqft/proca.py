"""Massive vector (Proca) test functions in 1+1 dimensions.

Components are stored with lower indices, ``f_mu = (f_0, f_1)``, metric
``diag(+, -)``.  The one-particle inner product is

    <f|g>_V = -int dk / (4 pi w) conj(f^_mu) g^_nu (eta^{mu nu} - k^mu k^nu / M^2)

at on-shell momentum ``k^mu = (w, k)``.  For ``f_mu = (1/M)(d_x f, d_t f)``
it reduces to the scalar product of mass ``M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bellqft.fourier import (
    FourierSampler,
    MomentumResult,
    SpaceTimeFunction,
    omega,
    on_shell_integral,
    scalar_inner,
    transform_tolerance,
)
from bellqft.quadrature import QuadratureError
from bellqft.spacetime import BumpFunction, SpacetimePoint

LIGHT_CONE_EXCLUSION = 1e-8
RELATIVE_ERROR_FLOOR = 1e-300


@dataclass(frozen=True)
class ProcaMass:
    M: float

    def __post_init__(self):
        if not (self.M > 0 and math.isfinite(self.M)):
            raise ValueError(f"Proca mass must be positive, got {self.M}")


def _mass(M) -> float:
    return M.M if isinstance(M, ProcaMass) else ProcaMass(float(M)).M


class VectorTestFunction:
    """Pair of lower-index components with a common support disc.

    ``fourier(k0, k1, tol)`` returns the transforms with shape (2, n_k).
    """

    def __init__(self, f0: SpaceTimeFunction, f1: SpaceTimeFunction, center: SpacetimePoint, radius: float):
        if not (radius > 0):
            raise ValueError("support radius must be positive")
        self.f0, self.f1 = f0, f1
        self.center, self.radius = center, radius
        self._sampler = FourierSampler([f0, f1], center.t, center.x, radius)

    def __call__(self, t, x) -> np.ndarray:
        return np.array([self.f0(t, x), self.f1(t, x)])

    def fourier(self, k0, k1, tol: float) -> np.ndarray:
        return self._sampler.transform(k0, k1, tol)[0]

    def l1_bound(self) -> float:
        return float(self._sampler.l1_bounds().max())

    def __add__(self, other: "VectorTestFunction") -> "VectorTestFunction":
        return VectorSum(self, other)


class VectorSum(VectorTestFunction):
    def __init__(self, a: VectorTestFunction, b: VectorTestFunction):
        self.a, self.b = a, b
        # a disc covering both supports
        dt, dx = b.center.t - a.center.t, b.center.x - a.center.x
        dist = math.hypot(dt, dx)
        if dist + b.radius <= a.radius:
            self.center, self.radius = a.center, a.radius
        elif dist + a.radius <= b.radius:
            self.center, self.radius = b.center, b.radius
        else:
            radius = 0.5 * (dist + a.radius + b.radius)
            shift = (radius - a.radius) / dist
            self.center = SpacetimePoint(a.center.t + shift * dt, a.center.x + shift * dx)
            self.radius = radius

    def __call__(self, t, x):
        return self.a(t, x) + self.b(t, x)

    def fourier(self, k0, k1, tol):
        return self.a.fourier(k0, k1, 0.5 * tol) + self.b.fourier(k0, k1, 0.5 * tol)

    def l1_bound(self):
        return self.a.l1_bound() + self.b.l1_bound()


def transverse_from_scalar(f: BumpFunction, M) -> VectorTestFunction:
    """f_mu = (1/M)(d_x f, d_t f), divergence free: d^0 f_0 - d^1 f_1 = (1/M)(d_t d_x f - d_x d_t f)."""
    mass = _mass(M)
    return VectorTestFunction(
        lambda t, x: f.dx(t, x) / mass,
        lambda t, x: f.dt(t, x) / mass,
        f.center,
        f.radius,
    )


def gradient_of_scalar(h: BumpFunction) -> VectorTestFunction:
    """h_mu = d_mu h = (d_t h, d_x h), a purely longitudinal vector."""
    return VectorTestFunction(h.dt, h.dx, h.center, h.radius)


def divergence(fv: VectorTestFunction, t: np.ndarray, x: np.ndarray, step: float = 1e-20) -> np.ndarray:
    """d^mu f_mu = d_t f_0 - d_x f_1, by complex-step differentiation of the components."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    d0 = np.imag(fv.f0(t + 1j * step, x)) / step
    d1 = np.imag(fv.f1(t, x + 1j * step)) / step
    return d0 - d1


def _contract(a: np.ndarray, b: np.ndarray, w: np.ndarray, k: np.ndarray, M: float) -> np.ndarray:
    """conj(a_mu) b_nu (eta^{mu nu} - k^mu k^nu / M^2), lower-index components."""
    metric = np.conj(a[0]) * b[0] - np.conj(a[1]) * b[1]
    ka = w * a[0] + k * a[1]  # k^mu a_mu with k^mu = (w, k)
    kb = w * b[0] + k * b[1]
    return metric - np.conj(ka) * kb / (M * M)


def proca_inner(
    fv: VectorTestFunction,
    gv: VectorTestFunction,
    M,
    tol: float = 1e-10,
    strict: bool = True,
) -> MomentumResult:
    if not (tol > 0):
        raise ValueError("tol must be positive")
    mass = _mass(M)
    radius = min(fv.radius, gv.radius)
    k_cap = 4000.0 / radius
    bound = max(fv.l1_bound(), gv.l1_bound(), 1e-300)
    ft_tol = transform_tolerance(tol, bound, radius, mass, vector=True)

    def density(k):
        w = omega(k, mass)
        a = fv.fourier(w, k, ft_tol)
        b = gv.fourier(w, k, ft_tol)
        return -_contract(a, b, w, k, mass) / (4.0 * math.pi * w)

    res = on_shell_integral(density, radius, tol, k_cap)
    if strict and not res.converged:
        raise QuadratureError("Proca inner product did not converge", res.value, res.error)
    return res


@dataclass
class Projection:
    """Longitudinal or transverse part of a vector function, defined on the Fourier side.

    ``(k_mu k^nu / k^2) h_nu`` is set to zero where ``|k^2| < epsilon``.
    """

    base: VectorTestFunction
    longitudinal: bool
    epsilon: float = LIGHT_CONE_EXCLUSION

    @property
    def center(self):
        return self.base.center

    @property
    def radius(self):
        return self.base.radius

    def l1_bound(self) -> float:
        return self.base.l1_bound()

    def fourier(self, k0, k1, tol):
        k0 = np.atleast_1d(np.asarray(k0, dtype=float))
        k1 = np.atleast_1d(np.asarray(k1, dtype=float))
        h = self.base.fourier(k0, k1, tol)
        k2 = k0 * k0 - k1 * k1
        keep = np.abs(k2) >= self.epsilon
        safe = np.where(keep, k2, 1.0)
        kh = k0 * h[0] + k1 * h[1]  # k^nu h_nu with k^nu = (k0, k1); lower k_mu = (k0, -k1)
        lower_k = np.array([k0, -k1])
        part = np.where(keep, lower_k * kh / safe, 0.0)
        return part if self.longitudinal else h - part

    def excluded_measure(self, k_box: float) -> float:
        """Lebesgue measure of {|k0^2 - k1^2| < epsilon} inside [-K, K]^2.

        In a = k0 - k1, b = k0 + k1 (dk0 dk1 = da db / 2) the set is |ab| <
        epsilon; the box is approximated by |a|, |b| <= sqrt(2) K.
        """
        if k_box <= 0:
            return 0.0
        a2 = 2.0 * k_box * k_box
        if self.epsilon >= a2:
            return 4.0 * k_box * k_box
        return 2.0 * self.epsilon * (1.0 + math.log(a2 / self.epsilon))


def longitudinal_projection(h: VectorTestFunction, epsilon: float = LIGHT_CONE_EXCLUSION) -> Projection:
    return Projection(h, True, epsilon)


def transverse_projection(h: VectorTestFunction, epsilon: float = LIGHT_CONE_EXCLUSION) -> Projection:
    return Projection(h, False, epsilon)


@dataclass
class DualityReport:
    proca_value: complex
    scalar_value: complex
    relative_error: float
    proca_error: float
    scalar_error: float
    k_max: float

    def as_dict(self) -> dict:
        return {
            "proca_value": [self.proca_value.real, self.proca_value.imag],
            "scalar_value": [self.scalar_value.real, self.scalar_value.imag],
            "relative_error": self.relative_error,
            "proca_error": self.proca_error,
            "scalar_error": self.scalar_error,
            "k_max": self.k_max,
        }


def duality_report(
    f: BumpFunction,
    g: BumpFunction,
    M,
    tol: float = 1e-10,
    floor: float = RELATIVE_ERROR_FLOOR,
) -> DualityReport:
    """Proca product of the transverse images against the scalar product of mass M."""
    mass = _mass(M)
    proca = proca_inner(transverse_from_scalar(f, mass), transverse_from_scalar(g, mass), mass, tol)
    scalar = scalar_inner(f, g, mass, tol)
    rel = abs(proca.value - scalar.value) / max(abs(scalar.value), floor)
    return DualityReport(proca.value, scalar.value, rel, proca.error, scalar.error, max(proca.k_max, scalar.k_max))
