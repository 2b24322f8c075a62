"""Spin-1/2 singlet Bell-CHSH reference setup.

All matrices are written in the ordered basis ``(|+>, |->)``; two-party
operators act on the product basis ``(++, +-, -+, --)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

Party = Literal["alice", "bob"]

PLUS = np.array([1.0, 0.0], dtype=complex)
MINUS = np.array([0.0, 1.0], dtype=complex)

#: (|+>|-> - |->|+>) / sqrt(2) in the product basis.
SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)

#: Reference dichotomic operator |-><+| + |+><-|.
A0 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class BellAngles:
    alpha: float
    alpha_prime: float
    beta: float
    beta_prime: float

    def __post_init__(self):
        values = (self.alpha, self.alpha_prime, self.beta, self.beta_prime)
        if not all(np.isfinite(v) for v in values):
            raise ValueError(f"Bell angles must be finite, got {values}")

    @classmethod
    def standard(cls) -> "BellAngles":
        """The textbook choice reaching the Tsirelson bound."""
        return cls(alpha=0.0, alpha_prime=np.pi / 2, beta=np.pi / 4, beta_prime=-np.pi / 4)

    def shifted(self, c: float) -> "BellAngles":
        return BellAngles(self.alpha + c, self.alpha_prime + c, self.beta + c, self.beta_prime + c)


def _check_party(party: str) -> None:
    if party not in ("alice", "bob"):
        raise ValueError(f"party must be 'alice' or 'bob', got {party!r}")


def build_bell_operator(angle: float, party: Party = "alice") -> np.ndarray:
    """e^{i angle} |-><+| + e^{-i angle} |+><-|.

    Alice and Bob use the same single-site form; ``party`` only selects the
    tensor slot when the operator is lifted to the two-spin space.
    """
    _check_party(party)
    op = np.zeros((2, 2), dtype=complex)
    op[1, 0] = np.exp(1j * angle)
    op[0, 1] = np.exp(-1j * angle)
    return op


def conjugate_by_unitary(angle: float, party: Party = "alice") -> np.ndarray:
    """U^dagger A0 U with U = exp(-i angle |-><-|)."""
    _check_party(party)
    projector_minus = np.outer(MINUS, MINUS.conj())
    # exp of a diagonal projector: identity off the |-> line, a phase on it
    u = np.eye(2, dtype=complex) + (np.exp(-1j * angle) - 1.0) * projector_minus
    return u.conj().T @ A0 @ u


def lift(op: np.ndarray, party: Party) -> np.ndarray:
    _check_party(party)
    eye = np.eye(2, dtype=complex)
    return np.kron(op, eye) if party == "alice" else np.kron(eye, op)


def singlet_correlator(alpha: float, beta: float) -> float:
    """<psi| A(alpha) (x) B(beta) |psi> by explicit tensor-product action."""
    a = build_bell_operator(alpha, "alice")
    b = build_bell_operator(beta, "bob")
    value = SINGLET.conj() @ np.kron(a, b) @ SINGLET
    return float(value.real)


def chsh_operator(angles: BellAngles) -> np.ndarray:
    a = build_bell_operator(angles.alpha, "alice")
    ap = build_bell_operator(angles.alpha_prime, "alice")
    b = build_bell_operator(angles.beta, "bob")
    bp = build_bell_operator(angles.beta_prime, "bob")
    return np.kron(a + ap, b) + np.kron(a - ap, bp)


def chsh_value(angles: BellAngles) -> float:
    """Signed singlet expectation of (A+A')B + (A-A')B'."""
    e = singlet_correlator
    return (
        e(angles.alpha, angles.beta)
        + e(angles.alpha_prime, angles.beta)
        + e(angles.alpha, angles.beta_prime)
        - e(angles.alpha_prime, angles.beta_prime)
    )
