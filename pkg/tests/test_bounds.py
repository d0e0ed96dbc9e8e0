import math

import numpy as np
import pytest

from gsb.bounds import (
    LatticePoly,
    alpha_t_estimate,
    growth_functional,
    kernel_bound_check,
    lattice_limit_check,
    lattice_points,
    lattice_sum,
    polar_grid,
    smoothness_report,
)
from gsb.coeffs import basis_entry
from gsb.groups import su2, torus
from gsb.transform import ct_forward


def test_lattice_points_structure():
    pts = lattice_points(torus(2), 4.5 * 2 * math.pi)
    assert pts.shape[1] == 2
    assert any(np.allclose(p, [0.0, 0.0]) for p in pts)
    su2_pts = lattice_points(su2(), 10 * math.pi)
    assert su2_pts.shape[1] == 1
    assert su2_pts.min() == 0.0  # closed-chamber half line


def test_lattice_sum_small_tau():
    # only gamma = 0 survives; on the chamber half line it counts 1/2
    P = LatticePoly((2.0, 0.0, 3.0))
    assert lattice_sum(torus(1), 1e-4, P) == pytest.approx(2.0, rel=1e-12)
    assert lattice_sum(su2(), 1e-4, P) == pytest.approx(1.0, rel=1e-12)


def test_lattice_sum_torus_theta_value():
    # sum over 2 pi Z of e^{-gamma^2} = theta_3(0, e^{-4 pi^2})
    got = lattice_sum(torus(1), 1.0)
    expect = 1.0 + 2.0 * sum(math.exp(-((2 * math.pi * k) ** 2)) for k in range(1, 5))
    assert got == pytest.approx(expect, rel=1e-14)


@pytest.mark.parametrize("spec", [torus(1), torus(2), su2()])
def test_lattice_limit(spec):
    rows = lattice_limit_check(spec, tau_list=(16.0, 64.0, 256.0))
    gaps = [row[3] for row in rows]
    assert gaps[-1] < 0.01
    assert gaps[0] >= gaps[1] >= gaps[2]


def test_alpha_estimate_dominates_large_tau():
    spec = su2()
    alpha = alpha_t_estimate(spec, 1.0)
    for tau in (1.0, 8.0, 512.0):
        assert lattice_sum(spec, tau) / math.sqrt(tau) <= alpha * (1 + 1e-12)


def test_growth_functional_constant():
    spec = torus(1)
    F = ct_forward(basis_entry(spec, (0,), 0, 0), 1.0)
    # F is the constant 1; at Y = 0 the functional equals 1 and the
    # Gaussian envelope beats polynomial growth elsewhere
    grid = polar_grid(spec, 6.0)
    value, arg = growth_functional(F, 1.0, 0, grid)
    assert value == pytest.approx(1.0, rel=1e-10)
    assert np.allclose(arg, 0.0)


@pytest.mark.parametrize("spec", [torus(1), su2()])
def test_smoothness_report_stable(spec):
    label = (2,) if spec.kind == "torus" else 3
    f = basis_entry(spec, label, 0, 0) + basis_entry(spec, (0,) if spec.kind == "torus" else 1, 0, 0)
    rep = smoothness_report(ct_forward(f, 1.0), 1.0, n_max=3, n_radial=20, n_angular=8)
    assert len(rep.rows) == 4 * 2
    assert all(rep.stable[n] for n in range(4))
    by_n = {}
    for n, r, v in rep.rows:
        by_n.setdefault(n, {})[r] = v
    for n in range(3):
        assert by_n[n][6.0] <= by_n[n + 1][6.0] * (1 + 1e-9)


@pytest.mark.parametrize("spec", [torus(1), su2()])
def test_kernel_bound(spec):
    rows, ok = kernel_bound_check(spec, 1.0)
    assert ok
    assert all(ratio <= 1.05 for _, ratio in rows)


def test_lattice_poly_eval():
    P = LatticePoly((1.0, 0.0, 2.0))
    x = np.array([0.0, 1.0, 2.0])
    assert np.allclose(P(x), [1.0, 3.0, 9.0])
