import math

import numpy as np
import pytest
import sympy as sp

from gsb.coeffs import basis_entry
from gsb.groups import laplacian_eigenvalue, su2, torus
from gsb.sobolev import (
    apply_vector_field,
    first_order_forms,
    holo_sobolev_norm,
    laplacian_apply,
    sobolev_norm,
    sobolev_shift,
    symbol_coefficient_exprs,
    symbol_positivity_threshold,
    toeplitz_quadratic_form,
    toeplitz_symbol,
    weighted_norm,
)
from gsb.transform import ct_forward, holo_l2_norm


def test_symbol_phi1_torus_closed_form():
    spec = torus(1)
    sym = toeplitz_symbol(spec, 2.0, 3.0, 1)
    # phi_1 = c - d/(2t) + u/t^2 with d = 1, |delta|^2 = 0
    assert sym.coefficients == pytest.approx((3.0 - 0.25, 0.25))


def test_symbol_phi1_su2_closed_form():
    spec = su2()
    sym = toeplitz_symbol(spec, 2.0, 3.0, 1)
    # phi_1 = c - 3/(2t) - 1/4 + u/t^2
    assert sym.coefficients == pytest.approx((3.0 - 0.75 - 0.25, 0.25))


@pytest.mark.parametrize("spec", [torus(1), torus(2), su2()])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_symbol_degree_and_top_coefficient(spec, n):
    (t, c), exprs = symbol_coefficient_exprs(spec, n)
    assert len(exprs) == n + 1
    assert sp.simplify(exprs[n] - t ** (-2 * n)) == 0
    assert all(sp.simplify(e) != 0 for e in exprs)


def test_positivity_threshold_torus_n1():
    # phi_1 coefficients (c - 1/2, 1) at t = 1: positive iff c > 1/2.
    spec = torus(1)
    grid = np.arange(0.1, 3.0, 0.1)
    thr = symbol_positivity_threshold(spec, 1.0, 1, grid)
    assert thr == pytest.approx(0.6, abs=1e-12)
    assert symbol_positivity_threshold(spec, 1.0, 1, [0.2, 0.4]) is None


@pytest.mark.parametrize("spec", [torus(1), su2()])
def test_thresholds_nondecreasing_in_n(spec):
    grid = spec.delta_sq + 0.25 * np.arange(1, 200)
    thrs = [symbol_positivity_threshold(spec, 1.0, n, grid) for n in (1, 2, 3, 4)]
    assert all(x is not None for x in thrs)
    assert all(a <= b for a, b in zip(thrs, thrs[1:]))


def test_laplacian_and_shift_on_basis():
    spec = su2()
    f = basis_entry(spec, 3, 0, 1)
    lam = laplacian_eigenvalue(spec, 3)
    g = laplacian_apply(f, 2)
    assert np.allclose(g.block(3), lam**2 * f.block(3))
    h = sobolev_shift(f, 1, 2.0)
    assert np.allclose(h.block(3), (2.0 + lam) * f.block(3))


def test_shift_commutes_with_transform_bitwise():
    spec = su2()
    f = basis_entry(spec, 2, 0, 0) + basis_entry(spec, 4, 1, 1) * 0.5
    t, n, c = 1.0, 2, 1.5
    a = ct_forward(sobolev_shift(f, n, c), t)
    b = sobolev_shift(ct_forward(f, t), n, c)
    for lbl in a.coefs.support:
        assert np.array_equal(a.coefs.block(lbl), b.coefs.block(lbl))


def test_sobolev_norm_torus_closed_form():
    spec = torus(1)
    f = basis_entry(spec, (3,), 0, 0)
    # ||(c - Delta)^n e_3||^2 = vol * (c + 9)^{2n}
    got = sobolev_norm(f, 2, 1.0)
    assert got == pytest.approx(math.sqrt(2 * math.pi) * 10.0**2, rel=1e-12)


@pytest.mark.parametrize("spec", [torus(1), su2()])
def test_sobolev_isometry(spec):
    label = (2,) if spec.kind == "torus" else 3
    f = basis_entry(spec, label, 0, 0)
    t, n, c = 1.0, 1, spec.delta_sq + 1.0
    F = ct_forward(f, t)
    assert holo_sobolev_norm(F, n, c) == pytest.approx(sobolev_norm(f, n, c), rel=1e-8)


@pytest.mark.parametrize("spec", [torus(1), su2()])
def test_toeplitz_identity(spec):
    label = (1,) if spec.kind == "torus" else 2
    f = basis_entry(spec, label, 0, 0)
    t, n, c = 1.0, 1, spec.delta_sq + 1.0
    F = ct_forward(f, t)
    lhs = sobolev_shift(f, n, c).plancherel_norm() ** 2
    rhs = toeplitz_quadratic_form(sobolev_shift(F, n, c), F, toeplitz_symbol(spec, t, c, n)).value
    assert rhs.real == pytest.approx(lhs, rel=1e-8)
    assert abs(rhs.imag) < 1e-8 * lhs


@pytest.mark.parametrize("spec", [torus(1), su2()])
@pytest.mark.parametrize("k", [0])
def test_first_order_identity(spec, k):
    labels = [(1,), (2,)] if spec.kind == "torus" else [2, 3]
    f1 = basis_entry(spec, labels[0], 0, 0)
    f2 = basis_entry(spec, labels[1], 0, 0) + f1 * 0.3
    F1, F2 = ct_forward(f1, 1.0), ct_forward(f2, 1.0)
    lhs, rhs = first_order_forms(F1, F2, k)
    scale = f1.plancherel_norm() * f2.plancherel_norm()
    assert abs(lhs - rhs) <= 1e-8 * scale


def test_vector_field_torus_eigen():
    spec = torus(2)
    f = basis_entry(spec, (2, -1), 0, 0)
    g = apply_vector_field(f, 1)
    assert np.allclose(g.block((2, -1)), -1j * f.block((2, -1)))


def test_weighted_norm_n0_is_l2():
    spec = su2()
    F = ct_forward(basis_entry(spec, 3, 1, 0), 1.0)
    base = holo_l2_norm(F)
    assert weighted_norm(F, 0) == pytest.approx(base, rel=1e-10)
    assert weighted_norm(F, 1) > base
