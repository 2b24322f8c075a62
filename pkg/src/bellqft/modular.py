"""Two-vector model of the modular structure on one-particle test functions.

A :class:`ModularVector` ``(a, b)`` stands for ``a*phi + b*(j phi)`` where
``phi`` is a unit vector in the spectral subspace of the modular operator at
``lambda**2`` and ``j phi`` its modular conjugate.  The two are orthonormal.
The spectral window is taken with zero width, so ``delta^{1/2}`` acts
diagonally with eigenvalues ``lambda`` on ``phi`` and ``1/lambda`` on
``j phi``.

The conjugation ``j`` is antilinear, ``(a, b) -> (conj b, conj a)``; the
Tomita operator ``s = j delta^{1/2}`` is an antilinear involution whose fixed
points are the Alice (right wedge) test functions, while
``s^dagger = j delta^{-1/2}`` fixes the Bob (left wedge) ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class ModularVector:
    a: complex = 0.0
    b: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError(f"non-finite ModularVector components ({self.a}, {self.b})")

    def __add__(self, other: "ModularVector") -> "ModularVector":
        return ModularVector(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "ModularVector") -> "ModularVector":
        return ModularVector(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "ModularVector":
        return ModularVector(-self.a, -self.b)

    def __mul__(self, c: complex) -> "ModularVector":
        return ModularVector(c * self.a, c * self.b)

    __rmul__ = __mul__

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    @classmethod
    def from_array(cls, v) -> "ModularVector":
        return cls(complex(v[0]), complex(v[1]))

    def norm2(self) -> float:
        return abs(self.a) ** 2 + abs(self.b) ** 2


PHI = ModularVector(1.0, 0.0)
J_PHI = ModularVector(0.0, 1.0)
ZERO = ModularVector(0.0, 0.0)


class DomainError(ValueError):
    """Raised for modular parameters outside their admissible range."""


@dataclass(frozen=True)
class ModularParams:
    """Spectral parameter ``lam`` in (0, 1) and the signed amplitudes of f, f'."""

    lam: float
    eta: float
    eta_prime: float

    def __post_init__(self):
        if not np.isfinite(self.lam) or not 0.0 < self.lam < 1.0:
            raise DomainError(f"lambda must lie in the open interval (0, 1), got {self.lam}")
        if not (np.isfinite(self.eta) and np.isfinite(self.eta_prime)):
            raise DomainError(f"eta and eta' must be finite, got ({self.eta}, {self.eta_prime})")


class WedgeFunctions(NamedTuple):
    f: ModularVector
    f_prime: ModularVector
    jf: ModularVector
    jf_prime: ModularVector


def inner(u: ModularVector, v: ModularVector) -> complex:
    """<u|v>, conjugate-linear in the first slot."""
    return u.a.conjugate() * v.a + u.b.conjugate() * v.b


def pauli_jordan_form(u: ModularVector, v: ModularVector) -> float:
    """Smeared commutator function: [phi(u), phi(v)] = i * pauli_jordan_form(u, v)."""
    return 2.0 * inner(u, v).imag


def apply_j(v: ModularVector) -> ModularVector:
    return ModularVector(v.b.conjugate(), v.a.conjugate())


def apply_delta_half(v: ModularVector, params: ModularParams) -> ModularVector:
    return ModularVector(params.lam * v.a, v.b / params.lam)


def apply_delta_minus_half(v: ModularVector, params: ModularParams) -> ModularVector:
    return ModularVector(v.a / params.lam, params.lam * v.b)


def apply_s(v: ModularVector, params: ModularParams) -> ModularVector:
    """s = j delta^{1/2}."""
    return apply_j(apply_delta_half(v, params))


def apply_s_dagger(v: ModularVector, params: ModularParams) -> ModularVector:
    """s^dagger = j delta^{-1/2}."""
    return apply_j(apply_delta_minus_half(v, params))


def build_test_functions(params: ModularParams) -> WedgeFunctions:
    """Alice's f = eta(1+s)phi, f' = eta'(1+s)(i phi) and Bob's jf, jf'."""
    f = params.eta * (PHI + apply_s(PHI, params))
    i_phi = 1j * PHI
    f_prime = params.eta_prime * (i_phi + apply_s(i_phi, params))
    return WedgeFunctions(f, f_prime, apply_j(f), apply_j(f_prime))
