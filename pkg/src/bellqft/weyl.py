"""Vacuum expectations of Weyl-operator words in the two-vector model.

A Weyl factor ``W(h) = exp(i phi(h))`` is represented by its test vector
``h``.  Products obey ``W(h) W(g) = exp(-(i/2) PJ(h, g)) W(h + g)`` and the
vacuum expectation of a single factor is ``exp(-|h|^2 / 2)``.

A :data:`VacuumWord` is a list of segments separated by vacuum-projector
insertions ``|0><0|``; its vacuum expectation factorizes into the product
of the segment expectations.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Sequence

from bellqft.modular import ZERO, ModularVector, pauli_jordan_form

#: Segments separated by ``|0><0|``; each segment is an ordered product.
VacuumWord = Sequence[Sequence[ModularVector]]


def weyl_string_expectation(hs: Iterable[ModularVector]) -> complex:
    """<0| W(h_1) W(h_2) ... W(h_n) |0>."""
    total = ZERO
    phase = 0.0
    for h in hs:
        # W(total) W(h) = exp(-(i/2) PJ(total, h)) W(total + h)
        phase += pauli_jordan_form(total, h)
        total = total + h
    return cmath.exp(-0.5j * phase) * math.exp(-0.5 * total.norm2())


def vacuum_word_expectation(word: VacuumWord) -> complex:
    if len(word) == 0:
        raise ValueError("a vacuum word needs at least one segment")
    value = 1.0 + 0.0j
    for segment in word:
        value *= weyl_string_expectation(segment)
    return value


def alice_projector(F: ModularVector) -> tuple[list[ModularVector], list[ModularVector]]:
    """W(-F)|0><0|W(F) as the (left, right) factor lists around the projector."""
    return [-F], [F]


def bob_projector(G: ModularVector) -> tuple[list[ModularVector], list[ModularVector]]:
    """W(G)|0><0|W(-G)."""
    return [G], [-G]


def projector_product_word(*projectors) -> list[list[ModularVector]]:
    """Vacuum word for the operator product of the given projectors.

    Each projector is a ``(left, right)`` pair as returned by
    :func:`alice_projector`; neighbouring right/left factor lists merge
    into one segment.
    """
    word: list[list[ModularVector]] = [[]]
    for left, right in projectors:
        word[-1].extend(left)
        word.append(list(right))
    return word


def dressed_vector(f: ModularVector, f_prime: ModularVector, c1: float, c2: float) -> ModularVector:
    """(1 + c1) f + c2 f'.

    Conjugating ``W(-f)|0><0|W(f)`` by ``W(c1 f + c2 f')`` gives the same
    projector form with this shifted vector: the two Weyl phases picked up
    on either side of ``|0><0|`` are opposite and cancel.
    """
    return (1.0 + c1) * f + c2 * f_prime


def projector_pair_expectation(F: ModularVector, G: ModularVector) -> complex:
    """<0| W(-F)|0><0|W(F) W(G)|0><0|W(-G) |0>.

    Real and positive when ``PJ(F, G) = 0``; the Weyl phase is kept in
    general so the result matches :func:`vacuum_word_expectation` exactly.
    """
    exponent = -0.5 * (F.norm2() + (F + G).norm2() + G.norm2())
    return cmath.exp(-0.5j * pauli_jordan_form(F, G)) * math.exp(exponent)


def single_projector_expectation(F: ModularVector) -> float:
    """<0| W(-F)|0><0|W(F) |0> = exp(-|F|^2); identical for Bob's sign convention."""
    return math.exp(-F.norm2())
