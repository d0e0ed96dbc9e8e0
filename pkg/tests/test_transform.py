import math

import numpy as np
import pytest

from gsb.coeffs import CoefVec, basis_entry
from gsb.groups import random_algebra, random_k, su2, torus
from gsb.polar import PointKC, polar_compose
from gsb.quadrature import QuadSpec
from gsb.transform import (
    QuadratureError,
    ct_forward,
    ct_inverse_integral,
    ct_inverse_spectral,
    eval_holo,
    holo_inner,
    holo_l2_norm,
    inverse_integral_trace,
    l2_norm_K,
)


def _random_point(spec, rng, scale=1.0):
    return PointKC(spec, random_k(spec, rng), random_algebra(spec, rng, scale))


def test_forward_damps_blocks():
    spec = su2()
    f = basis_entry(spec, 3, 0, 0)
    F = ct_forward(f, 2.0)
    assert F.coefs.block(3)[0, 0] == pytest.approx(math.exp(-2.0))
    with pytest.raises(ValueError):
        ct_forward(f, 0.0)


def test_spectral_inverse_exact():
    spec = su2()
    rng = np.random.default_rng(0)
    f = CoefVec(spec, {2: rng.normal(size=(2, 2)), 3: rng.normal(size=(3, 3))})
    g = ct_inverse_spectral(ct_forward(f, 1.3))
    assert g.support == f.support
    for label in f.support:
        assert np.allclose(g.block(label), f.block(label), rtol=0, atol=1e-15)


def test_eval_holo_restricts_to_K():
    spec = su2()
    rng = np.random.default_rng(1)
    f = basis_entry(spec, 2, 1, 0)
    F = ct_forward(f, 1.0)
    x = random_k(spec, rng)
    p = PointKC(spec, x, np.zeros(3))
    assert eval_holo(F, p) == pytest.approx(F.coefs.eval_k(x), abs=1e-12)


@pytest.mark.parametrize(
    "spec,label", [(torus(1), (3,)), (torus(2), (2, -1)), (su2(), 3)]
)
def test_unitarity_single_entries(spec, label):
    f = basis_entry(spec, label, 0, 0)
    for t in (0.5, 2.0):
        lhs = holo_l2_norm(ct_forward(f, t), QuadSpec(tolerance=1e-6))
        rhs = l2_norm_K(f)
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_holo_inner_orthogonality():
    spec = su2()
    q = QuadSpec(tolerance=1e-6)
    F1 = ct_forward(basis_entry(spec, 2, 0, 0), 1.0)
    F2 = ct_forward(basis_entry(spec, 2, 0, 1), 1.0)
    res = holo_inner(F1, F2, q)
    assert abs(res.value) < 1e-10
    with pytest.raises(ValueError):
        holo_inner(F1, ct_forward(basis_entry(spec, 2, 0, 0), 2.0), q)


def test_holo_inner_weight_is_expectation():
    # <F,F> with weight u equals E[|Y|^2] times the norm for a constant F
    spec = torus(1)
    t = 0.9
    F = ct_forward(basis_entry(spec, (0,)), t)
    res = holo_inner(F, F, QuadSpec(), weight=lambda u: u)
    assert res.value.real == pytest.approx(2 * math.pi * t / 2.0, rel=1e-12)


def test_quadrature_error_raised():
    spec = torus(1)
    F = ct_forward(basis_entry(spec, (5,)), 2.0)
    with pytest.raises(QuadratureError):
        holo_l2_norm(F, QuadSpec(levels=(8, 12), tolerance=1e-10))


def test_inverse_integral_torus():
    spec = torus(1)
    f = basis_entry(spec, (1,)) + basis_entry(spec, (-2,)) * (0.5 + 0.5j)
    F = ct_forward(f, 1.0)
    rng = np.random.default_rng(3)
    for _ in range(3):
        x = random_k(spec, rng)
        rec = ct_inverse_integral(F, x, 10.0)
        assert abs(rec - f.eval_k(x)) < 1e-10


def test_inverse_integral_su2_character():
    spec = su2()
    f = CoefVec(spec, {2: np.eye(2)})
    F = ct_forward(f, 1.0)
    rng = np.random.default_rng(4)
    x = random_k(spec, rng)
    values, stabilized = inverse_integral_trace(F, x, [4.0, 7.0, 10.0])
    assert stabilized
    assert abs(values[-1] - f.eval_k(x)) < 1e-6


def test_inverse_radius_guard():
    spec = torus(1)
    F = ct_forward(basis_entry(spec, (1,)), 1.0)
    with pytest.raises(ValueError):
        ct_inverse_integral(F, np.zeros(1), 60.0)
