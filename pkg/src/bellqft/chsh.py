"""Vacuum Bell-CHSH correlator for the free scalar field.

The Bell operators are ``1 - 2P`` with projector families

    P_A = W(-F_A)|0><0|W(F_A),       P_B = W(G_B)|0><0|W(-G_B),

built on Alice's ``f, f'`` and Bob's ``jf, jf'``.  Unitary deformation by
``exp(i(alpha phi(f) + beta phi(f')))`` etc. keeps this form and only shifts
the test vectors (see :func:`bellqft.weyl.dressed_vector`), so every
correlator reduces to Gaussian factors of norms and overlaps.

Two evaluation routes are provided and cross-checked in the test suite:

* closed form, from the norms and overlaps of ``f, f', jf, jf'``
  (functions :func:`script_p`, :func:`chsh_base`, :func:`chsh_unitary`);
* the vacuum-word engine acting on :class:`~bellqft.modular.ModularVector`
  data (functions ending in ``_words``).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Mapping, Sequence

import numpy as np

from bellqft.modular import DomainError, ModularParams, build_test_functions
from bellqft.weyl import (
    alice_projector,
    bob_projector,
    dressed_vector,
    projector_pair_expectation,
    projector_product_word,
    single_projector_expectation,
    vacuum_word_expectation,
)

TSIRELSON = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class UnitaryParams:
    alpha: float = 0.0
    beta: float = 0.0
    alpha_prime: float = 0.0
    beta_prime: float = 0.0
    sigma: float = 0.0
    tau: float = 0.0
    sigma_prime: float = 0.0
    tau_prime: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(getattr(self, f.name)) for f in fields(self)):
            raise DomainError(f"unitary parameters must be finite: {self}")

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "UnitaryParams":
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in self.names()])

    def is_zero(self) -> bool:
        return not np.any(self.as_array())


@dataclass(frozen=True)
class CorrelatorBreakdown:
    p_a: float
    p_b: float
    p_ab: float
    p_apb: float
    p_abp: float
    p_apbp: float
    script_p: float
    chsh: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def _assemble(p_a, p_b, p_ab, p_apb, p_abp, p_apbp) -> CorrelatorBreakdown:
    script = p_ab + p_apb + p_abp - p_apbp
    chsh = 2.0 + 4.0 * script - 4.0 * p_a - 4.0 * p_b
    return CorrelatorBreakdown(p_a, p_b, p_ab, p_apb, p_abp, p_apbp, script, chsh)


# -- closed form -------------------------------------------------------------


def _pair(n: float, lam: float, a: tuple[float, float], b: tuple[float, float]) -> float:
    """<P_A P_B> for Alice vector a.(f-hat, f'-hat) and Bob vector b.(jf-hat, jf'-hat).

    With ``f = eta u`` and ``f' = eta' v`` one has |u|^2 = |v|^2 = 1 + lam^2,
    <u|ju> = <v|jv> = 2 lam, <u|jv> = <v|ju> = 0 and Re<u|v> = 0, so in the
    (u, v) coordinates the three Gaussian factors combine to the expression
    below; the Weyl phase vanishes since all overlaps are real.
    """
    aa = a[0] * a[0] + a[1] * a[1]
    bb = b[0] * b[0] + b[1] * b[1]
    ab = a[0] * b[0] + a[1] * b[1]
    return math.exp(-n * (aa + bb) - 2.0 * lam * ab)


def _single(n: float, a: tuple[float, float]) -> float:
    """<P_A> for a single dressed vector in (u, v) coordinates."""
    return math.exp(-n * (a[0] * a[0] + a[1] * a[1]))


def script_p(params: ModularParams) -> float:
    """<0| (P_A + P_A') P_B + (P_A - P_A') P_B' |0> in closed form."""
    lam, e2, ep2 = params.lam, params.eta**2, params.eta_prime**2
    n = 1.0 + lam * lam
    return (
        math.exp(-2.0 * e2 * (n + lam))
        + 2.0 * math.exp(-n * (e2 + ep2))
        - math.exp(-2.0 * ep2 * (n + lam))
    )


def chsh_base(params: ModularParams) -> CorrelatorBreakdown:
    """Undeformed correlator.

    Evaluated through the same pair formula as :func:`chsh_unitary` at the
    undressed coordinates, so zero unitary parameters reproduce it bit for
    bit; :func:`script_p` keeps the three-term form as an independent check.
    """
    lam, eta, etap = params.lam, params.eta, params.eta_prime
    n = 1.0 + lam * lam
    a, ap = (eta, 0.0), (0.0, etap)
    single = _single(n, a)
    return _assemble(single, single, _pair(n, lam, a, a), _pair(n, lam, ap, a), _pair(n, lam, a, ap), _pair(n, lam, ap, ap))


def _dressed_coordinates(params: ModularParams, u: UnitaryParams):
    eta, etap = params.eta, params.eta_prime
    a = ((1.0 + u.alpha) * eta, u.beta * etap)
    ap = (u.beta_prime * eta, (1.0 + u.alpha_prime) * etap)
    b = ((1.0 + u.sigma) * eta, u.tau * etap)
    bp = (u.tau_prime * eta, (1.0 + u.sigma_prime) * etap)
    return a, ap, b, bp


def chsh_unitary(params: ModularParams, u: UnitaryParams) -> CorrelatorBreakdown:
    """Correlator for the unitarily deformed Bell operators, closed form.

    Dressed vectors: F_A = (1+alpha) f + beta f',  F_A' = (1+alpha') f' + beta' f,
    G_B = (1+sigma) jf + tau jf',  G_B' = (1+sigma') jf' + tau' jf.
    """
    lam = params.lam
    n = 1.0 + lam * lam
    a, ap, b, bp = _dressed_coordinates(params, u)
    p_a = _single(n, a)
    p_b = _single(n, b)
    return _assemble(
        p_a,
        p_b,
        _pair(n, lam, a, b),
        _pair(n, lam, ap, b),
        _pair(n, lam, a, bp),
        _pair(n, lam, ap, bp),
    )


def chsh_unitary_value(x: Sequence[float]) -> float:
    """Objective on the flat 11-vector (lam, eta, eta', alpha, ..., tau')."""
    return chsh_unitary(ModularParams(x[0], x[1], x[2]), UnitaryParams.from_array(x[3:])).chsh


def chsh_base_value(x: Sequence[float]) -> float:
    return chsh_base(ModularParams(x[0], x[1], x[2])).chsh


# -- word-engine route --------------------------------------------------------


def _dichotomic_correlator(p_x: complex, p_y: complex, p_xy: complex) -> complex:
    """<(1 - 2P_X)(1 - 2P_Y)> from the projector expectations."""
    return 1.0 - 2.0 * p_x - 2.0 * p_y + 4.0 * p_xy


def _words_breakdown(alice, alice_p, bob, bob_p) -> tuple[CorrelatorBreakdown, float]:
    """Breakdown from projector words, plus the directly expanded CHSH value.

    Each argument is a ``(left, right)`` projector factor pair.
    """
    single = lambda proj: vacuum_word_expectation(projector_product_word(proj))
    pair = lambda x, y: vacuum_word_expectation(projector_product_word(x, y))
    pa, pap, pb, pbp = single(alice), single(alice_p), single(bob), single(bob_p)
    pab, papb = pair(alice, bob), pair(alice_p, bob)
    pabp, papbp = pair(alice, bob_p), pair(alice_p, bob_p)
    direct = (
        _dichotomic_correlator(pa, pb, pab)
        + _dichotomic_correlator(pap, pb, papb)
        + _dichotomic_correlator(pa, pbp, pabp)
        - _dichotomic_correlator(pap, pbp, papbp)
    )
    values = [v.real for v in (pa, pb, pab, papb, pabp, papbp)]
    return _assemble(*values), direct.real


def chsh_base_words(params: ModularParams) -> tuple[CorrelatorBreakdown, float]:
    """Word-engine evaluation of the undeformed correlator.

    Returns the breakdown and the CHSH value of the direct 8-term expansion
    of (A+A')B + (A-A')B'.
    """
    f, fp, jf, jfp = build_test_functions(params)
    return _words_breakdown(alice_projector(f), alice_projector(fp), bob_projector(jf), bob_projector(jfp))


def chsh_unitary_words(params: ModularParams, u: UnitaryParams) -> tuple[CorrelatorBreakdown, float]:
    """Word-engine evaluation with dressed test vectors."""
    f, fp, jf, jfp = build_test_functions(params)
    return _words_breakdown(
        alice_projector(dressed_vector(f, fp, u.alpha, u.beta)),
        alice_projector(dressed_vector(fp, f, u.alpha_prime, u.beta_prime)),
        bob_projector(dressed_vector(jf, jfp, u.sigma, u.tau)),
        bob_projector(dressed_vector(jfp, jf, u.sigma_prime, u.tau_prime)),
    )


def chsh_unitary_undressed(params: ModularParams, u: UnitaryParams) -> tuple[CorrelatorBreakdown, float]:
    """Word-engine evaluation keeping the unitaries as explicit Weyl factors.

    U^dagger P U with U = W(g) becomes W(-g) W(-f)|0><0|W(f) W(g) on Alice's
    side and W(g) W(jf)|0><0|W(-jf) W(-g) on Bob's; no dressing identity is
    used, so every Weyl phase goes through the engine.
    """
    f, fp, jf, jfp = build_test_functions(params)

    def alice(x, gen):
        return [-gen, -x], [x, gen]

    def bob(y, gen):
        return [gen, y], [-y, -gen]

    return _words_breakdown(
        alice(f, u.alpha * f + u.beta * fp),
        alice(fp, u.alpha_prime * fp + u.beta_prime * f),
        bob(jf, u.sigma * jf + u.tau * jfp),
        bob(jfp, u.sigma_prime * jfp + u.tau_prime * jf),
    )


def projector_expectations(params: ModularParams, u: UnitaryParams | None = None) -> dict[str, complex]:
    """Pairwise projector expectations via :func:`projector_pair_expectation`."""
    u = u or UnitaryParams()
    f, fp, jf, jfp = build_test_functions(params)
    fa = dressed_vector(f, fp, u.alpha, u.beta)
    fap = dressed_vector(fp, f, u.alpha_prime, u.beta_prime)
    gb = dressed_vector(jf, jfp, u.sigma, u.tau)
    gbp = dressed_vector(jfp, jf, u.sigma_prime, u.tau_prime)
    return {
        "p_a": single_projector_expectation(fa),
        "p_b": single_projector_expectation(gb),
        "p_ab": projector_pair_expectation(fa, gb),
        "p_apb": projector_pair_expectation(fap, gb),
        "p_abp": projector_pair_expectation(fa, gbp),
        "p_apbp": projector_pair_expectation(fap, gbp),
    }


# -- surfaces -----------------------------------------------------------------

GRID_PARAMS = ("lambda", "eta", "eta_prime")


@dataclass(frozen=True)
class GridAxis:
    name: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.name not in GRID_PARAMS:
            raise DomainError(f"grid parameter must be one of {GRID_PARAMS}, got {self.name!r}")
        if self.n < 1 or not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"invalid grid axis {self}")
        if self.n > 1 and not self.lo < self.hi:
            raise DomainError(f"grid axis needs lo < hi, got {self}")
        if self.name == "lambda" and not (0.0 < self.lo and self.hi < 1.0):
            raise DomainError(f"lambda range must lie inside (0, 1), got [{self.lo}, {self.hi}]")

    @classmethod
    def parse(cls, text: str) -> "GridAxis":
        """``name:lo:hi:n``"""
        try:
            name, lo, hi, n = text.split(":")
            return cls(name, float(lo), float(hi), int(n))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"cannot parse grid axis {text!r}; expected name:lo:hi:n") from exc

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


BASE_OPTIMUM = {"lambda": 0.998634, "eta": 0.00100492, "eta_prime": 0.318599}


@dataclass
class SurfaceGrid:
    axis1: GridAxis
    axis2: GridAxis
    values: np.ndarray  # shape (axis1.n, axis2.n), row-major in axis1

    def rows(self):
        for i, x in enumerate(self.axis1.values()):
            for k, y in enumerate(self.axis2.values()):
                yield x, y, self.values[i, k]


def surface_grid(
    axis1: GridAxis,
    axis2: GridAxis,
    fixed: Mapping[str, float] | None = None,
    unitary: UnitaryParams | None = None,
) -> SurfaceGrid:
    """CHSH values over a rectangular grid of two of (lambda, eta, eta').

    Parameters not on an axis take their value from ``fixed``, falling back
    to the base-case optimum.  With ``unitary`` given the deformed
    correlator is evaluated instead of the base one.
    """
    if axis1.name == axis2.name:
        raise DomainError("grid axes must be distinct parameters")
    settings = dict(BASE_OPTIMUM)
    settings.update(fixed or {})
    out = np.empty((axis1.n, axis2.n))
    for i, x in enumerate(axis1.values()):
        for k, y in enumerate(axis2.values()):
            point = dict(settings, **{axis1.name: x, axis2.name: y})
            params = ModularParams(point["lambda"], point["eta"], point["eta_prime"])
            if unitary is None:
                out[i, k] = chsh_base(params).chsh
            else:
                out[i, k] = chsh_unitary(params, unitary).chsh
    return SurfaceGrid(axis1, axis2, out)
