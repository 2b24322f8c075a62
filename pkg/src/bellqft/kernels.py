"""Pauli-Jordan and Hadamard kernels of a free scalar of mass m in 1+1 dimensions,
and their smearing against pairs of bump functions.

    Delta(t, x) = -1/2 sign(t) theta(t^2 - x^2) J0(m sqrt(t^2 - x^2))
    H(t, x)     = -1/2 Y0(m sqrt(lambda))        lambda = t^2 - x^2 > 0
                =  1/pi K0(m sqrt(-lambda))      lambda < 0

Smeared pairing
---------------
``int int f(x) K(x - y) g(y) dx dy`` is rewritten as ``int K(z) C(z) dz`` with
the cross-correlation ``C(z) = int f(y + z) g(y) dy``.  For two bumps ``C``
only depends on ``|z - (c_f - c_g)|``, so it is tabulated once as a radial
function (piecewise Chebyshev, checked against direct polar quadrature).
The outer 2-D integral is done in light-cone coordinates ``u = t - x``,
``v = t + x`` after cutting the support box along ``u = 0`` and ``v = 0``:
every piece lies in a single causal quadrant, the Pauli-Jordan kernel is
smooth on each timelike piece and exactly zero on spacelike ones, and the
logarithmic light-cone singularity of H sits on piece edges, where a cubic
grading ``u = edge + L s^3`` makes it harmless for the adaptive rule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev

from bellqft.bessel import bessel_j0, bessel_k0, bessel_y0
from bellqft.quadrature import DEFAULT_MAX_DEPTH, QuadratureError, integrate_2d
from bellqft.spacetime import BumpFunction, SpacetimePoint, invariant_interval


class SingularPointError(ValueError):
    """Kernel evaluated on the light cone, where it is not defined."""


class KernelKind(enum.Enum):
    PAULI_JORDAN = "pauli-jordan"
    HADAMARD = "hadamard"


@dataclass(frozen=True)
class KernelChoice:
    kind: KernelKind
    mass: float

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"kernel mass must be positive, got {self.mass}")


def _check_mass(m: float):
    if not (m > 0 and math.isfinite(m)):
        raise ValueError(f"mass must be positive, got {m}")


def pauli_jordan_kernel(p: SpacetimePoint, m: float) -> float:
    _check_mass(m)
    lam = invariant_interval(p)
    if lam <= 0 or p.t == 0:
        return 0.0
    return -0.5 * math.copysign(1.0, p.t) * float(bessel_j0(m * math.sqrt(lam)))


def hadamard_kernel(p: SpacetimePoint, m: float) -> float:
    _check_mass(m)
    lam = invariant_interval(p)
    if lam == 0:
        raise SingularPointError(f"Hadamard kernel is singular on the light cone at ({p.t}, {p.x})")
    if lam > 0:
        return -0.5 * float(bessel_y0(m * math.sqrt(lam)))
    return float(bessel_k0(m * math.sqrt(-lam))) / math.pi


def _pj_lightcone(u: np.ndarray, v: np.ndarray, m: float) -> np.ndarray:
    lam = u * v
    out = np.zeros_like(lam)
    inside = lam > 0
    if np.any(inside):
        out[inside] = -0.5 * np.sign(u[inside]) * bessel_j0(m * np.sqrt(lam[inside]))
    return out


def _hadamard_lightcone(u: np.ndarray, v: np.ndarray, m: float) -> np.ndarray:
    lam = u * v
    if np.any(lam == 0):
        raise SingularPointError("quadrature node on the light cone")
    out = np.empty_like(lam)
    inside = lam > 0
    if np.any(inside):
        out[inside] = -0.5 * bessel_y0(m * np.sqrt(lam[inside]))
    if np.any(~inside):
        out[~inside] = bessel_k0(m * np.sqrt(-lam[~inside])) / math.pi
    return out


# ---------------------------------------------------------------------------
# Radial cross-correlation of two bumps


def _polar_rule(radius: float, n_rho: int, n_theta: int):
    # Gauss-Legendre in rho, trapezoid in theta over [0, pi] (integrand even in theta)
    x, w = np.polynomial.legendre.leggauss(n_rho)
    rho = 0.5 * radius * (x + 1.0)
    w_rho = 0.5 * radius * w * rho
    theta = np.linspace(0.0, math.pi, n_theta + 1)
    w_theta = np.full(n_theta + 1, 2.0 * math.pi / n_theta)
    w_theta[[0, -1]] *= 0.5
    return rho, w_rho, np.cos(theta), w_theta


def _correlation_direct(f: BumpFunction, g: BumpFunction, d: np.ndarray, n_rho: int, n_theta: int) -> np.ndarray:
    """Gamma(d) = int f0(w + d e) g0(w) d^2w with f0, g0 the bumps moved to the origin."""
    rho, w_rho, cos_t, w_t = _polar_rule(g.radius, n_rho, n_theta)
    g_vals = g.profile((rho / g.radius) ** 2) * w_rho
    out = np.empty(d.size)
    step = max(1, 200_000 // (rho.size * cos_t.size))
    for i in range(0, d.size, step):
        dd = d[i:i + step, None, None]
        r2 = (rho[None, :, None] ** 2 + dd ** 2 + 2.0 * rho[None, :, None] * dd * cos_t[None, None, :]) / f.radius ** 2
        out[i:i + step] = np.einsum("drt,r,t->d", f.profile(r2), g_vals, w_t)
    return out


@dataclass
class RadialCorrelation:
    """Tabulated Gamma(d) on [0, r_f + r_g] (zero beyond), piecewise Chebyshev.

    ``error`` is the largest deviation seen between the interpolant and
    direct polar quadrature at off-node check points.
    """

    f: BumpFunction
    g: BumpFunction
    tol: float
    degree: int = 16
    n_rho: int = 64
    n_theta: int = 96
    edges: np.ndarray = field(init=False)
    coeffs: np.ndarray = field(init=False)
    error: float = field(init=False)

    def __post_init__(self):
        reach = self.f.radius + self.g.radius
        self._settle_rule()
        edges = np.linspace(0.0, reach, 9)
        lo, hi = edges[:-1], edges[1:]
        done: list[tuple[float, float, np.ndarray]] = []
        worst = 0.0
        for _ in range(12):
            coeffs = self._fit(lo, hi)
            checks = lo[:, None] + (hi - lo)[:, None] * np.array([0.13, 0.41, 0.77, 0.97])[None, :]
            direct = _correlation_direct(self.f, self.g, checks.ravel(), self.n_rho, self.n_theta).reshape(checks.shape)
            approx = np.array([chebyshev.chebval(self._to_unit(checks[i], lo[i], hi[i]), coeffs[i]) for i in range(lo.size)])
            err = np.max(np.abs(direct - approx), axis=1)
            ok = err <= self.tol
            worst = max(worst, float(np.max(err[ok]))) if np.any(ok) else worst
            done.extend((lo[i], hi[i], coeffs[i]) for i in np.flatnonzero(ok))
            if np.all(ok):
                break
            mid = 0.5 * (lo[~ok] + hi[~ok])
            lo, hi = np.concatenate([lo[~ok], mid]), np.concatenate([mid, hi[~ok]])
        else:
            coeffs = self._fit(lo, hi)
            done.extend((lo[i], hi[i], coeffs[i]) for i in range(lo.size))
            worst = max(worst, float(np.max(err)))
        done.sort(key=lambda item: item[0])
        self.edges = np.array([item[0] for item in done] + [reach])
        self.coeffs = np.array([item[2] for item in done])
        self.error = worst

    def _settle_rule(self):
        # grow the polar rule until two successive sizes agree at probe distances
        probe = np.linspace(0.0, self.f.radius + self.g.radius, 7)[:-1] + 0.01
        prev = _correlation_direct(self.f, self.g, probe, self.n_rho, self.n_theta)
        for _ in range(4):
            n_rho, n_theta = int(self.n_rho * 1.5), int(self.n_theta * 1.5)
            cur = _correlation_direct(self.f, self.g, probe, n_rho, n_theta)
            if np.max(np.abs(cur - prev)) <= 0.1 * self.tol:
                return
            self.n_rho, self.n_theta, prev = n_rho, n_theta, cur

    @staticmethod
    def _to_unit(d, lo, hi):
        return (2.0 * d - (lo + hi)) / (hi - lo)

    def _fit(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        n = self.degree + 1
        nodes = np.cos(math.pi * (np.arange(n) + 0.5) / n)
        d = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * nodes[None, :]
        vals = _correlation_direct(self.f, self.g, d.ravel(), self.n_rho, self.n_theta).reshape(d.shape)
        return np.array([chebyshev.chebfit(nodes, row, self.degree) for row in vals])

    def __call__(self, d: np.ndarray) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        flat = d.ravel()
        out = np.zeros(flat.size)
        inside = flat < self.edges[-1]
        if np.any(inside):
            dd = flat[inside]
            idx = np.clip(np.searchsorted(self.edges, dd, side="right") - 1, 0, self.coeffs.shape[0] - 1)
            lo, hi = self.edges[idx], self.edges[idx + 1]
            out[inside] = chebyshev.chebval(self._to_unit(dd, lo, hi), self.coeffs[idx].T, tensor=False)
        return out.reshape(d.shape)


# ---------------------------------------------------------------------------
# Smeared pairing


@dataclass
class PairingResult:
    value: float
    error: float
    evaluations: int
    pieces: int
    correlation_error: float
    converged: bool


def _pieces(uc: float, vc: float, half: float):
    """Light-cone-aligned sub-rectangles of the support box, cut at u = 0 and v = 0."""
    def cuts(c):
        lo, hi = c - half, c + half
        return [(lo, 0.0), (0.0, hi)] if lo < 0.0 < hi else [(lo, hi)]
    return [(ur, vr) for ur in cuts(uc) for vr in cuts(vc)]


def _graded(lo: float, hi: float, singular: bool):
    """Map s in [0, 1] onto [lo, hi]; cubic grading toward an endpoint sitting at 0."""
    if singular and (lo == 0.0 or hi == 0.0):
        edge, other = (lo, hi) if lo == 0.0 else (hi, lo)
        length = other - edge
        return (lambda s: edge + length * s ** 3), (lambda s: 3.0 * abs(length) * s * s)
    return (lambda s: lo + (hi - lo) * s), (lambda s: np.full_like(s, hi - lo))


def smeared_pairing(
    f: BumpFunction,
    g: BumpFunction,
    kernel: KernelChoice,
    tol: float = 1e-10,
    max_depth: int = DEFAULT_MAX_DEPTH,
    strict: bool = True,
) -> PairingResult:
    """int int f(x) K(x - y) g(y) d^2x d^2y to absolute accuracy ``tol``.

    Raises :class:`QuadratureError` (carrying the estimate and its error)
    when the depth cap is hit first, unless ``strict`` is False.
    """
    if not (tol > 0):
        raise ValueError("tol must be positive")
    reach = f.radius + g.radius
    area = math.pi * reach * reach
    corr = RadialCorrelation(f, g, tol=0.05 * tol / area)
    ct, cx = f.center.t - g.center.t, f.center.x - g.center.x
    uc, vc = ct - cx, ct + cx
    half = math.sqrt(2.0) * reach  # |dz|^2 = (du^2 + dv^2) / 2
    hadamard = kernel.kind is KernelKind.HADAMARD
    m = kernel.mass

    total, error, evaluations, used = 0.0, 0.0, 0, 0
    pieces = _pieces(uc, vc, half)
    for (u0, u1), (v0, v1) in pieces:
        timelike = (u0 >= 0.0 and v0 >= 0.0) or (u1 <= 0.0 and v1 <= 0.0)
        if not hadamard and not timelike:
            continue  # Pauli-Jordan kernel vanishes identically here
        # nearest point of the piece to the support center, in the Euclidean z metric
        du = max(u0 - uc, 0.0, uc - u1)
        dv = max(v0 - vc, 0.0, vc - v1)
        if du * du + dv * dv >= 2.0 * reach * reach:
            continue  # correlation vanishes on the whole piece
        u_map, u_jac = _graded(u0, u1, hadamard)
        v_map, v_jac = _graded(v0, v1, hadamard)

        def integrand(s, w, u_map=u_map, u_jac=u_jac, v_map=v_map, v_jac=v_jac):
            u, v = u_map(s), v_map(w)
            dist = np.sqrt(0.5 * ((u - uc) ** 2 + (v - vc) ** 2))
            c = corr(dist)
            out = np.zeros_like(c)
            live = c != 0.0
            if np.any(live):
                kern = _hadamard_lightcone(u[live], v[live], m) if hadamard else _pj_lightcone(u[live], v[live], m)
                out[live] = 0.5 * kern * c[live] * u_jac(s[live]) * v_jac(w[live])
            return out

        res = integrate_2d(integrand, (0.0, 1.0), (0.0, 1.0), tol / (2.0 * len(pieces)), max_depth=max_depth)
        total += float(res.value)
        error += res.error
        evaluations += res.evaluations
        used += 1
    error += corr.error * area
    converged = error <= tol
    result = PairingResult(total, error, evaluations, used, corr.error, converged)
    if strict and not converged:
        raise QuadratureError("smeared pairing did not reach tolerance", total, error)
    return result
