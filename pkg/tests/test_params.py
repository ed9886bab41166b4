"""Parameter bundle validation and derived quantities."""

import cmath
import math

import pytest

from polar_olct import InverseParams, KernelParams, OffsetParams


def test_determinant_enforced():
    with pytest.raises(ValueError):
        OffsetParams(1.0, 2.0, 0.0, 0.5)  # det = 0.5
    with pytest.raises(ValueError):
        KernelParams(1.0, 1.0, 1.0, 1.0)


def test_b_sign():
    with pytest.raises(ValueError):
        OffsetParams(0.0, -1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        OffsetParams(1.0, 0.0, 0.0, 1.0)
    # the raw bundle accepts negative b (inverse machinery)
    kp = KernelParams(0.0, -1.0, 1.0, 0.0)
    assert kp.b == -1.0


def test_derived_scalars():
    p = OffsetParams(1.0, 1.0, 0.0, 1.0, (0.3, 0.4), (0.1, -0.2))
    assert math.isclose(p.mu1, 0.5)
    shift = (1.0 * 0.3 - 1.0 * 0.1, 1.0 * 0.4 - 1.0 * (-0.2))
    assert math.isclose(p.mu2, math.hypot(*shift))
    assert math.isclose(p.phi1, math.atan2(0.3, 0.4))
    assert math.isclose(p.phi2, math.atan2(shift[0], shift[1]))
    assert abs(p.ell1 - cmath.exp(1j * p.d * p.mu1 ** 2 / p.b)) < 1e-15
    assert abs(p.ell2 - cmath.exp(-1j * p.a * p.mu2 ** 2 / p.b)) < 1e-15
    assert abs(p.sigma - p.ell1 * p.ell2) < 1e-15
    for u in (p.ell1, p.ell2, p.sigma):
        assert abs(abs(u) - 1.0) < 1e-12


def test_degenerate_offset_angles_resolved_by_atan2():
    p = OffsetParams(0.0, 1.0, -1.0, 0.0, (1.0, 0.0), (0.0, 0.0))
    assert math.isclose(p.phi1, math.pi / 2.0)  # tau2 = 0 is fine
    q = OffsetParams(0.0, 1.0, -1.0, 0.0, (0.0, 0.0), (0.5, 0.0))
    assert math.isclose(q.phi2, -math.pi / 2.0)  # shift vector (-0.5, 0)


def test_inverse_bundle():
    p = OffsetParams(1.0, 1.0, 0.0, 1.0, (0.3, 0.4), (0.1, -0.2))
    inv = InverseParams(p)
    assert inv.matrix == (p.d, -p.b, -p.c, p.a)
    assert inv.xi == (p.b * p.eta[0] - p.d * p.tau[0], p.b * p.eta[1] - p.d * p.tau[1])
    assert inv.gamma == (p.c * p.tau[0] - p.a * p.eta[0], p.c * p.tau[1] - p.a * p.eta[1])
    bundle = inv.bundle()
    det = bundle.a * bundle.d - bundle.b * bundle.c
    assert abs(det - 1.0) < 1e-12
    # mu roles swap between the forward and inverse bundles
    assert math.isclose(bundle.mu1, p.mu2)
    assert math.isclose(bundle.mu2, p.mu1)


def test_inverse_applied_twice_recovers_forward():
    p = OffsetParams(0.7, 1.3, -0.1, (1.0 + 1.3 * -0.1) / 0.7, (0.2, -0.6), (0.15, 0.05))
    back = InverseParams(p).twice()
    assert back.a == pytest.approx(p.a, abs=1e-15)
    assert back.b == pytest.approx(p.b, abs=1e-15)
    assert back.c == pytest.approx(p.c, abs=1e-15)
    assert back.d == pytest.approx(p.d, abs=1e-15)
    assert back.tau == pytest.approx(p.tau, abs=1e-15)
    assert back.eta == pytest.approx(p.eta, abs=1e-15)
