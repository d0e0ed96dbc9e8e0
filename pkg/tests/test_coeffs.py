import math

import numpy as np
import pytest

from gsb.coeffs import CoefVec, basis_entry, from_torus_samples
from gsb.groups import random_k, rep_matrix, su2, torus
from gsb.quadrature import integrate_K


def test_block_shape_validation():
    with pytest.raises(ValueError):
        CoefVec(su2(), {3: np.eye(2)})


def test_zero_blocks_dropped():
    f = CoefVec(torus(1), {(1,): np.zeros((1, 1)), (2,): np.ones((1, 1))})
    assert f.support == [(2,)]


def test_plancherel_matches_haar_integral():
    rng = np.random.default_rng(0)
    spec = su2()
    f = CoefVec(spec, {2: rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)), 1: [[0.7]]})
    direct = integrate_K(spec, lambda g: abs(f.eval_k(g)) ** 2, 24)
    assert f.plancherel_norm() ** 2 == pytest.approx(direct.real, rel=1e-8)


def test_inner_linear_second_slot():
    spec = torus(1)
    f = basis_entry(spec, (1,))
    g = basis_entry(spec, (1,)) * (2.0 + 1j)
    assert f.inner(g) == pytest.approx((2.0 + 1j) * 2 * math.pi)
    assert g.inner(f) == pytest.approx((2.0 - 1j) * 2 * math.pi)


def test_basis_entry_evaluates_to_matrix_entry():
    rng = np.random.default_rng(1)
    spec = su2()
    g = random_k(spec, rng)
    for (i, j) in ((0, 0), (0, 2), (2, 1)):
        f = basis_entry(spec, 3, i, j)
        assert f.eval_k(g) == pytest.approx(rep_matrix(spec, 3, g)[i, j], abs=1e-12)


def test_eval_k_batch_matches_scalar():
    rng = np.random.default_rng(2)
    spec = su2()
    f = CoefVec(spec, {2: rng.normal(size=(2, 2)), 4: rng.normal(size=(4, 4))})
    gs = np.stack([random_k(spec, rng) for _ in range(6)])
    batch = f.eval_k_batch(gs)
    for k in range(6):
        assert batch[k] == pytest.approx(f.eval_k(gs[k]), abs=1e-12)


def test_from_torus_samples_roundtrip():
    spec = torus(2)
    f = CoefVec(spec, {(1, 0): [[1.5]], (0, -2): [[2.0 - 1j]], (3, 3): [[0.25j]]})
    n = 9
    axes = [2 * math.pi * np.arange(n) / n] * 2
    xs = np.meshgrid(*axes, indexing="ij")
    grid = np.stack(xs, axis=-1).reshape(-1, 2)
    values = f.eval_k_batch(grid.astype(complex)).reshape(n, n)
    g = from_torus_samples(spec, values, cutoff=4)
    assert g.support == f.support
    for label in f.support:
        assert np.allclose(g.block(label), f.block(label), atol=1e-12)


def test_addition_and_scaling():
    spec = torus(1)
    f = basis_entry(spec, (1,)) + basis_entry(spec, (2,)) * 3.0
    assert f.block((2,))[0, 0] == pytest.approx(3.0)
    assert f.plancherel_norm() == pytest.approx(math.sqrt(2 * math.pi * 10))
