"""Fourier transforms of compactly supported test functions and on-shell
momentum integrals.

Convention: ``f^(k0, k1) = int dt dx exp(i (k0 t - k1 x)) f(t, x)``, and the
scalar one-particle inner product is

    <f|g> = int dk / (4 pi w_k) conj(f^(w_k, k)) g^(w_k, k),   w_k = sqrt(k^2 + m^2).

Transforms are computed by the trapezoidal rule on the support square,
doubling the resolution until two levels agree.  For integrands that are
smooth with all derivatives vanishing on the boundary the trapezoidal error
is set by aliasing, ``|f^(2 pi / h - k)|``, which falls faster than any power
of the step, so the rule outperforms panel Gauss-Kronrod here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from bellqft.quadrature import QuadratureError, integrate_1d

SpaceTimeFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

MIN_LEVEL = 5  # 2**5 + 1 nodes per side
MAX_LEVEL = 12


@dataclass
class FourierSampler:
    """Trapezoidal transforms of several functions sharing one support square.

    ``functions`` are sampled lazily on nested grids of ``2**level + 1``
    nodes per side of ``[t0 - half, t0 + half] x [x0 - half, x0 + half]``.
    """

    functions: Sequence[SpaceTimeFunction]
    t0: float
    x0: float
    half: float
    _grids: dict = field(default_factory=dict, repr=False)
    level: int = MIN_LEVEL

    def _axis(self, level: int):
        n = 2 ** level + 1
        s = np.linspace(-self.half, self.half, n)
        w = np.full(n, 2.0 * self.half / (n - 1))
        w[[0, -1]] *= 0.5
        return s, w

    def _samples(self, level: int) -> np.ndarray:
        if level not in self._grids:
            s, w = self._axis(level)
            tt, xx = np.meshgrid(self.t0 + s, self.x0 + s, indexing="ij")
            vals = np.array([np.asarray(fn(tt, xx), dtype=complex) for fn in self.functions])
            self._grids[level] = vals * (w[:, None] * w[None, :])[None, :, :]
        return self._grids[level]

    def _at_level(self, level: int, k0: np.ndarray, k1: np.ndarray) -> np.ndarray:
        s, _ = self._axis(level)
        et = np.exp(1j * np.outer(k0, s))  # (nk, n) over t
        ex = np.exp(-1j * np.outer(k1, s))  # (nk, n) over x
        vals = self._samples(level)  # (nf, n, n)
        partial = np.einsum("fij,kj->fik", vals, ex)
        phase = np.exp(1j * (k0 * self.t0 - k1 * self.x0))
        return np.einsum("fik,ki->fk", partial, et) * phase[None, :]

    def transform(self, k0, k1, tol: float) -> tuple[np.ndarray, float]:
        """(transforms of shape (n_functions, n_k), error estimate)."""
        k0 = np.atleast_1d(np.asarray(k0, dtype=float))
        k1 = np.atleast_1d(np.asarray(k1, dtype=float))
        level = max(MIN_LEVEL, self.level - 1)
        prev = self._at_level(level, k0, k1)
        while level < MAX_LEVEL:
            level += 1
            cur = self._at_level(level, k0, k1)
            err = float(np.max(np.abs(cur - prev))) if cur.size else 0.0
            if err <= tol:
                self.level = max(self.level, level)
                return cur, err
            prev = cur
        raise QuadratureError("Fourier transform did not converge at the finest grid", prev, err)

    def l1_bounds(self) -> np.ndarray:
        """int |f| for each function, a bound on sup |f^|."""
        return np.sum(np.abs(self._samples(7)), axis=(1, 2))


@dataclass
class MomentumResult:
    value: complex
    error: float
    k_max: float
    evaluations: int
    converged: bool


def _tail(density, k_max: float) -> float:
    # integrand mass on [K, 4K] on both sides, by a fixed Gauss-Legendre rule
    x, w = np.polynomial.legendre.leggauss(48)
    ks = k_max * (2.5 + 1.5 * x)
    ws = 1.5 * k_max * w
    vals = density(np.concatenate([ks, -ks]))
    return float(np.sum(np.abs(vals[: ks.size]) * ws) + np.sum(np.abs(vals[ks.size:]) * ws))


def on_shell_integral(
    density: Callable[[np.ndarray], np.ndarray],
    length_scale: float,
    tol: float,
    k_cap: float | None = None,
) -> MomentumResult:
    """int_{-K}^{K} density(k) dk with K grown until the tail is below tol / 10.

    ``length_scale`` is the smallest support radius involved; transforms
    decay on momentum scales of order 1 / length_scale.
    """
    if not (tol > 0):
        raise ValueError("tol must be positive")
    k_max = 8.0 / length_scale
    k_cap = k_cap if k_cap is not None else 4000.0 / length_scale
    while _tail(density, k_max) >= 0.1 * tol:
        k_max *= 1.5
        if k_max > k_cap:
            raise QuadratureError("momentum tail did not decay below tolerance", math.nan, math.inf)
    res = integrate_1d(density, -k_max, k_max, 0.8 * tol, initial_panels=8)
    return MomentumResult(complex(res.value), res.error + 0.1 * tol, k_max, res.evaluations, res.converged)


def transform_tolerance(tol: float, bound: float, radius: float, m: float, vector: bool = False) -> float:
    """Absolute accuracy asked of each transform so the momentum integral stays within ``tol``.

    A transform error ``d`` shifts the integrand by about ``d * bound * weight
    / (4 pi w)``, and the integrand lives on ``|k| <~ 10 / radius``.  For
    vector integrands the projector adds ``weight ~ (w^2 + k^2) / m^2``.
    The result is floored a few hundred ulps above ``bound``, the
    attainable accuracy of any finite sum for the transform.
    """
    k_typ = 10.0 / radius
    weight = 1.0 + 2.0 * (k_typ * k_typ + m * m) / (m * m) if vector else 1.0
    wanted = 0.02 * tol * 4.0 * math.pi * m / (bound * weight * 2.0 * k_typ)
    return max(wanted, 256.0 * np.finfo(float).eps * bound)


def omega(k: np.ndarray, m: float) -> np.ndarray:
    return np.sqrt(k * k + m * m)


def scalar_inner(
    f: SpaceTimeFunction,
    g: SpaceTimeFunction,
    m: float,
    tol: float = 1e-10,
    strict: bool = True,
) -> MomentumResult:
    """<f|g> for two bump-like functions with ``center`` and ``radius`` attributes."""
    if not (m > 0):
        raise ValueError("mass must be positive")
    fs = _sampler_for([f], f)
    gs = _sampler_for([g], g)
    radius = min(f.radius, g.radius)
    k_cap = 4000.0 / radius
    bound = float(max(fs.l1_bounds().max(), gs.l1_bounds().max(), 1e-300))
    ft_tol = transform_tolerance(tol, bound, radius, m)

    def density(k):
        w = omega(k, m)
        a, _ = fs.transform(w, k, ft_tol)
        b, _ = gs.transform(w, k, ft_tol)
        return np.conj(a[0]) * b[0] / (4.0 * math.pi * w)

    res = on_shell_integral(density, radius, tol, k_cap)
    if strict and not res.converged:
        raise QuadratureError("scalar inner product did not converge", res.value, res.error)
    return res


def _sampler_for(functions, support) -> FourierSampler:
    return FourierSampler(functions, support.center.t, support.center.x, support.radius)
