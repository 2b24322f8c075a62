import math

import numpy as np
import pytest

from bellqft.bessel import bessel_k0
from bellqft.fourier import scalar_inner
from bellqft.kernels import (
    KernelChoice,
    KernelKind,
    SingularPointError,
    hadamard_kernel,
    pauli_jordan_kernel,
    smeared_pairing,
)
from bellqft.spacetime import BumpFunction, SpacetimePoint, Wedge, random_bump, wedge_membership

PJ = KernelChoice(KernelKind.PAULI_JORDAN, 1.0)
H = KernelChoice(KernelKind.HADAMARD, 1.0)


def test_pj_odd_and_causal():
    p = SpacetimePoint(2.0, 0.5)
    assert pauli_jordan_kernel(-p, 1.3) == -pauli_jordan_kernel(p, 1.3)
    assert pauli_jordan_kernel(SpacetimePoint(0.5, 2.0), 1.3) == 0.0
    assert pauli_jordan_kernel(SpacetimePoint(1.0, 1.0), 1.3) == 0.0


def test_pj_near_cone_limit():
    assert pauli_jordan_kernel(SpacetimePoint(1.0 + 1e-12, 1.0), 2.0) == pytest.approx(-0.5, abs=1e-10)


def test_hadamard_even():
    for p in (SpacetimePoint(2.0, 0.5), SpacetimePoint(0.3, 1.7)):
        assert hadamard_kernel(-p, 0.7) == hadamard_kernel(p, 0.7)


def test_hadamard_spacelike_ratio():
    r = hadamard_kernel(SpacetimePoint(0.0, 3.0), 1.0) / hadamard_kernel(SpacetimePoint(0.0, 4.0), 1.0)
    assert r == pytest.approx(bessel_k0(3.0) / bessel_k0(4.0), rel=1e-14)
    assert r > 1


def test_hadamard_log_growth_near_cone():
    # -1/2 Y0(z) ~ -(1/pi) ln z as z -> 0
    a = hadamard_kernel(SpacetimePoint(1.0 + 1e-6, 1.0), 1.0)
    b = hadamard_kernel(SpacetimePoint(1.0 + 1e-10, 1.0), 1.0)
    assert b - a == pytest.approx(-(1 / math.pi) * math.log(1e-2), rel=1e-4)


def test_hadamard_light_cone_raises():
    with pytest.raises(SingularPointError):
        hadamard_kernel(SpacetimePoint(1.0, -1.0), 1.0)


def test_bad_mass():
    with pytest.raises(ValueError):
        KernelChoice(KernelKind.HADAMARD, 0.0)
    with pytest.raises(ValueError):
        pauli_jordan_kernel(SpacetimePoint(1, 0), -1.0)


def test_wedge_membership():
    assert wedge_membership(SpacetimePoint(0.5, 1.0)) is Wedge.RIGHT
    assert wedge_membership(SpacetimePoint(-0.5, -1.0)) is Wedge.LEFT
    assert wedge_membership(SpacetimePoint(1.0, 0.5)) is Wedge.NEITHER
    assert wedge_membership(SpacetimePoint(0.0, 0.0)) is Wedge.RIGHT


def test_random_wedge_bumps_inside():
    rng = np.random.default_rng(3)
    for _ in range(200):
        assert random_bump(rng, Wedge.RIGHT).inside_wedge(Wedge.RIGHT)
        assert random_bump(rng, Wedge.LEFT).inside_wedge(Wedge.LEFT)


def test_microcausality():
    rng = np.random.default_rng(8)
    for _ in range(5):
        f, g = random_bump(rng, Wedge.RIGHT), random_bump(rng, Wedge.LEFT)
        assert abs(smeared_pairing(f, g, PJ, tol=1e-10).value) < 1e-8


def test_symmetries():
    rng = np.random.default_rng(4)
    for _ in range(3):
        f, g = random_bump(rng), random_bump(rng)
        fg, gf = smeared_pairing(f, g, PJ), smeared_pairing(g, f, PJ)
        assert abs(fg.value + gf.value) <= fg.error + gf.error
        hfg, hgf = smeared_pairing(f, g, H), smeared_pairing(g, f, H)
        assert abs(hfg.value - hgf.value) <= hfg.error + hgf.error


def test_bilinear_in_amplitude():
    f = BumpFunction(SpacetimePoint(0.2, 0.1), 0.5)
    g = BumpFunction(SpacetimePoint(-0.3, 0.4), 0.6)
    one = smeared_pairing(f, g, H).value
    three = smeared_pairing(f.scaled(3.0), g, H).value
    assert three == pytest.approx(3 * one, abs=1e-9)


def test_halving_tolerance_is_consistent():
    f = BumpFunction(SpacetimePoint(0.3, -0.2), 0.7)
    g = BumpFunction(SpacetimePoint(-0.4, 0.1), 0.5, 1.2)
    for kernel in (PJ, H):
        a = smeared_pairing(f, g, kernel, tol=1e-10)
        b = smeared_pairing(f, g, kernel, tol=5e-11)
        assert abs(a.value - b.value) <= a.error + b.error


def test_momentum_space_consistency():
    # 2 Re<f|g> is the Hadamard pairing and 2 Im<f|g> the Pauli-Jordan pairing
    rng = np.random.default_rng(21)
    for _ in range(5):
        f, g = random_bump(rng), random_bump(rng)
        inner = scalar_inner(f, g, 1.0, tol=1e-10)
        h = smeared_pairing(f, g, H, tol=1e-10)
        pj = smeared_pairing(f, g, PJ, tol=1e-10)
        assert abs(2 * inner.value.real - h.value) <= 1e-8
        assert abs(2 * inner.value.imag - pj.value) <= 1e-8


def test_strict_failure_raises():
    from bellqft.quadrature import QuadratureError

    f = BumpFunction(SpacetimePoint(0.0, 0.0), 0.5)
    with pytest.raises(QuadratureError):
        smeared_pairing(f, f, H, tol=1e-10, max_depth=1)
    res = smeared_pairing(f, f, H, tol=1e-10, max_depth=1, strict=False)
    assert not res.converged and res.error > 1e-10


def test_invariant_interval_examples():
    from bellqft.spacetime import invariant_interval

    assert invariant_interval(SpacetimePoint(1, 0)) == 1
    assert invariant_interval(SpacetimePoint(1, 1)) == 0
    assert invariant_interval(SpacetimePoint(0, 2)) == -4


def test_pj_time_axis_limit():
    assert pauli_jordan_kernel(SpacetimePoint(1e-9, 0.0), 1.0) == pytest.approx(-0.5, abs=1e-12)
    assert pauli_jordan_kernel(SpacetimePoint(0.0, 0.0), 1.0) == 0.0


def test_hadamard_self_pairing_positive():
    f = BumpFunction(SpacetimePoint(0.0, 0.0), 0.6)
    h = smeared_pairing(f, f, H)
    assert h.value > 0
    assert abs(h.value - 2 * scalar_inner(f, f, 1.0).value.real) < 1e-8


def test_wedge_examples():
    assert wedge_membership(SpacetimePoint(0, 1)) is Wedge.RIGHT
    assert wedge_membership(SpacetimePoint(0, -1)) is Wedge.LEFT
    assert wedge_membership(SpacetimePoint(2, 1)) is Wedge.NEITHER
