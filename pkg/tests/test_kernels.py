import math

import numpy as np
import pytest

from gsb.coeffs import basis_entry
from gsb.groups import random_algebra, random_k, su2, torus
from gsb.heat import rho_eval
from gsb.kernels import (
    KernelQuery,
    envelope_l2,
    envelope_sobolev,
    k_sobolev_integral,
    k_sobolev_spectral,
    k_t,
    pair_point,
    reproduce_check,
)
from gsb.polar import PointKC, identity_point, phi
from gsb.quadrature import QuadSpec
from gsb.transform import ct_forward


def _random_point(spec, rng, scale=0.6):
    return PointKC(spec, random_k(spec, rng), random_algebra(spec, rng, scale))


def test_query_validation():
    spec = su2()
    e = identity_point(spec)
    with pytest.raises(ValueError):
        KernelQuery(e, e, -1.0)
    with pytest.raises(ValueError):
        KernelQuery(e, e, 1.0, n=1, c=0.1)  # needs c > |delta|^2


def test_pair_point_diagonal():
    # g g^* for g = e^{iY} is e^{2iY}
    spec = su2()
    y = np.array([0.3, -0.4, 0.5])
    g = PointKC(spec, np.eye(2, dtype=complex), y)
    p = pair_point(spec, g, g)
    assert np.allclose(p.y, 2 * y, atol=1e-10)


def test_k_t_is_heat_kernel_at_double_time():
    rng = np.random.default_rng(0)
    for spec in (torus(1), su2()):
        g = _random_point(spec, rng)
        h = _random_point(spec, rng)
        q = KernelQuery(g, h, 0.7)
        expected, _ = rho_eval(spec, 1.4, pair_point(spec, g, h))
        assert k_t(q) == pytest.approx(expected, rel=1e-12)


def test_sobolev_kernel_n0_reduces_to_k_t():
    spec = su2()
    rng = np.random.default_rng(1)
    g, h = _random_point(spec, rng), _random_point(spec, rng)
    q = KernelQuery(g, h, 1.0, n=0, c=1.0)
    assert k_sobolev_spectral(q) == pytest.approx(k_t(q), rel=1e-9)


@pytest.mark.parametrize("spec", [torus(1), torus(2), su2()])
@pytest.mark.parametrize("n", [1, 2])
def test_two_route_agreement(spec, n):
    rng = np.random.default_rng(10 * n)
    c = spec.delta_sq + 1.0
    for _ in range(5):
        q = KernelQuery(_random_point(spec, rng), _random_point(spec, rng), 1.0, n, c)
        lhs = k_sobolev_spectral(q)
        rhs, res = k_sobolev_integral(q, QuadSpec(levels=(48, 64, 96)))
        assert res.gap < 1e-7
        assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), abs(rhs))


def test_integral_route_rejects_n0():
    spec = torus(1)
    e = identity_point(spec)
    with pytest.raises(ValueError):
        k_sobolev_integral(KernelQuery(e, e, 1.0, n=0))


def test_diagonal_kernel_positive():
    spec = su2()
    rng = np.random.default_rng(2)
    g = _random_point(spec, rng, scale=1.0)
    q = KernelQuery(g, g, 1.0, n=1, c=1.25)
    val = k_sobolev_spectral(q)
    assert val.real > 0
    assert abs(val.imag) < 1e-10 * val.real


def test_envelopes():
    spec = su2()
    y = np.array([0.0, 0.0, 1.5])
    t = 1.0
    assert envelope_l2(spec, t, y) == pytest.approx(phi(spec, y) * math.exp(2.25 / t), rel=1e-12)
    assert envelope_sobolev(spec, t, 2, y) == pytest.approx(
        envelope_l2(spec, t, y) / (1 + 2.25) ** 4, rel=1e-12
    )


@pytest.mark.parametrize("spec", [torus(1), su2()])
def test_reproducing_identity(spec):
    rng = np.random.default_rng(3)
    label = (2,) if spec.kind == "torus" else 3
    F = ct_forward(basis_entry(spec, label, 0, 0), 1.0)
    for _ in range(5):
        y = random_algebra(spec, rng)
        y *= rng.uniform(0.0, 3.0) / np.linalg.norm(y)
        p = PointKC(spec, random_k(spec, rng), y)
        assert reproduce_check(F, p, QuadSpec()) < 1e-9
