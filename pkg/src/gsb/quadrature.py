"""Shared deterministic quadrature rules.

Three families:

* k-space rules integrating against the normalized measure
  c_t exp(-|Y|^2/t) / Phi(Y) dY on the Lie algebra (tensor Gauss-Hermite on
  tori; a shifted-Hermite radial rule times a product sphere rule for SU(2),
  using exp(-r^2/t) sinh(r) r dr = Gaussian centered at t/2 after folding);
* generalized Gauss-Laguerre for integrals with weight s^{2n-1} e^{-cs};
* sampling rules on K itself (exact trigonometric on tori, Euler-angle
  product rule on SU(2)).

Every exposed integral reports the relative gap between its two finest
levels; callers decide whether a flagged gap is fatal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre, roots_hermite, roots_legendre

from .groups import GroupSpec

__all__ = [
    "QuadSpec",
    "QuadResult",
    "KSpaceRule",
    "kspace_rule",
    "integrate_kspace",
    "integrate_laguerre",
    "integrate_K",
    "k_haar_nodes",
]


@dataclass(frozen=True)
class QuadSpec:
    levels: tuple = (64, 96)
    radius_guard: float = 50.0
    tolerance: float = 1e-6

    def __post_init__(self):
        if len(self.levels) < 2:
            raise ValueError("need at least two refinement levels")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class QuadResult:
    value: complex
    gap: float
    tolerance: float
    by_level: tuple

    @property
    def ok(self) -> bool:
        return self.gap <= self.tolerance


@dataclass(frozen=True)
class KSpaceRule:
    """Nodes Y_i and weights w_i with sum_i w_i f(Y_i) ~ integral f dmu_t."""

    spec: GroupSpec
    t: float
    level: int
    nodes: np.ndarray  # (N, dim)
    weights: np.ndarray  # (N,)


@lru_cache(maxsize=64)
def _kspace_rule_cached(kind: str, rank: int, t: float, level: int) -> KSpaceRule:
    spec = GroupSpec(kind, rank)
    if kind == "torus":
        u, w = roots_hermite(level)
        axes_nodes = [math.sqrt(t) * u] * rank
        grids = np.meshgrid(*axes_nodes, indexing="ij")
        nodes = np.stack([g.ravel() for g in grids], axis=-1)
        wgrids = np.meshgrid(*([w] * rank), indexing="ij")
        weights = np.ones(nodes.shape[0])
        for g in wgrids:
            weights = weights * g.ravel()
        weights /= math.pi ** (rank / 2.0)
        return KSpaceRule(spec, t, level, nodes, weights)

    # SU(2): integral of f d(mu_t) = pref * int_R r S(r) exp(-(r-t/2)^2/t) dr,
    # S(r) = int_{S^2} f(r n) dOmega, pref = 1/(2 pi^{3/2} t).
    u, w = roots_hermite(level)
    r = t / 2.0 + math.sqrt(t) * u
    radial_w = w * r / (2.0 * math.pi**1.5 * t)

    ntheta = min(level, 20)
    nphi = 2 * ntheta
    x, v = roots_legendre(ntheta)  # x = cos(theta)
    phi_ang = 2.0 * math.pi * np.arange(nphi) / nphi
    st = np.sqrt(1.0 - x**2)
    dirs = np.stack(
        [
            np.outer(st, np.cos(phi_ang)).ravel(),
            np.outer(st, np.sin(phi_ang)).ravel(),
            np.outer(x, np.ones(nphi)).ravel(),
        ],
        axis=-1,
    )
    ang_w = np.outer(v, np.full(nphi, 2.0 * math.pi / nphi)).ravel()

    nodes = (r[:, None, None] * dirs[None, :, :]).reshape(-1, 3)
    weights = (radial_w[:, None] * ang_w[None, :]).ravel()
    return KSpaceRule(spec, t, level, nodes, weights)


def kspace_rule(spec: GroupSpec, t: float, level: int) -> KSpaceRule:
    return _kspace_rule_cached(spec.kind, spec.rank, float(t), int(level))


def integrate_kspace(spec: GroupSpec, t: float, integrand, q: QuadSpec) -> QuadResult:
    """Integrate f against the normalized measure c_t e^{-|Y|^2/t}/Phi(Y) dY.

    integrand takes a batch (N, dim) of Y points and returns (N,) values.
    """
    values = []
    for level in q.levels:
        rule = kspace_rule(spec, t, level)
        vals = np.asarray(integrand(rule.nodes))
        values.append(complex(np.dot(rule.weights, vals)))
    gap = _relative_gap(values[-1], values[-2])
    return QuadResult(values[-1], gap, q.tolerance, tuple(values))


def _relative_gap(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def integrate_laguerre(c: float, n: int, f, q: QuadSpec | None = None) -> QuadResult:
    """int_0^inf s^{2n-1} e^{-cs} f(s) ds by generalized Gauss-Laguerre.

    The substitution u = c s moves the weight to u^{2n-1} e^{-u}.
    f may be scalar or batch (applied to an array of s values).
    """
    if c <= 0 or n < 1:
        raise ValueError("need c > 0 and n >= 1")
    q = q or QuadSpec(levels=(16, 32, 64), tolerance=1e-8)
    values = []
    for level in q.levels:
        u, w = roots_genlaguerre(level, 2 * n - 1)
        s = u / c
        fs = np.asarray([f(si) for si in s])
        values.append(complex(np.dot(w, fs)) / c ** (2 * n))
    gap = _relative_gap(values[-1], values[-2])
    return QuadResult(values[-1], gap, q.tolerance, tuple(values))


@lru_cache(maxsize=32)
def _k_haar_nodes_cached(kind: str, rank: int, level: int):
    spec = GroupSpec(kind, rank)
    if kind == "torus":
        pts = 2.0 * math.pi * np.arange(level) / level
        grids = np.meshgrid(*([pts] * rank), indexing="ij")
        nodes = np.stack([g.ravel() for g in grids], axis=-1)
        weights = np.full(nodes.shape[0], (2.0 * math.pi / level) ** rank)
        return nodes, weights

    # Euler angles g = e^{phi E3} e^{theta E2} e^{psi E3}; Haar = sin(theta)
    # d(phi) d(theta) d(psi), total mass 16 pi^2.
    nphi = level
    npsi = 2 * level
    x, v = roots_legendre(level)  # cos(theta)
    phis = 2.0 * math.pi * np.arange(nphi) / nphi
    psis = 4.0 * math.pi * np.arange(npsi) / npsi

    half = np.arccos(x) / 2.0
    ct, st = np.cos(half), np.sin(half)
    mats = []
    weights = []
    wphi = 2.0 * math.pi / nphi
    wpsi = 4.0 * math.pi / npsi
    for i, p in enumerate(phis):
        zp = np.exp(0.5j * p)
        for j in range(len(x)):
            mid = np.array([[ct[j], st[j]], [-st[j], ct[j]]], dtype=complex)
            for s in psis:
                zs = np.exp(0.5j * s)
                left = np.array([[zp, 0], [0, np.conj(zp)]])
                right = np.array([[zs, 0], [0, np.conj(zs)]])
                mats.append(left @ mid @ right)
                weights.append(wphi * v[j] * wpsi)
    return np.array(mats), np.array(weights)


def k_haar_nodes(spec: GroupSpec, level: int):
    """Sample nodes and Haar (Riemannian-volume) weights on K."""
    return _k_haar_nodes_cached(spec.kind, spec.rank, int(level))


def integrate_K(spec: GroupSpec, f, level: int) -> complex:
    """Integral over K with Riemannian-volume Haar; f takes a group element."""
    nodes, weights = k_haar_nodes(spec, level)
    total = 0.0 + 0.0j
    for node, w in zip(nodes, weights):
        total += w * f(node)
    return complex(total)
