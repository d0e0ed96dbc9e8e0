"""Coherent states and reproducing kernels.

k_t(g,h) = rho_{2t}(g h^*) reproduces point evaluation on the holomorphic
L^2 space; the Sobolev kernel k_t^{2n} = (cI - Delta)^{-2n} rho_{2t} is
computed by two independent routes (blockwise spectral factors, and the
Gamma-integral over shifted heat kernels) whose agreement is itself one of
the verification targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import (
    GroupSpec,
    character_from_trace,
    enumerate_irreps,
    irrep_dim,
    laplacian_eigenvalue,
)
from .heat import TruncationReport, _choose_cutoff, _tail_bound, rho_eval
from .polar import PointKC, log_phi, norm_y, phi, polar_compose, polar_decompose, star
from .quadrature import QuadSpec, integrate_laguerre, kspace_rule
from .transform import HoloFunc, eval_holo, exp_iy_batch

__all__ = [
    "KernelQuery",
    "pair_point",
    "k_t",
    "k_sobolev_spectral",
    "k_sobolev_integral",
    "envelope_l2",
    "envelope_sobolev",
    "reproduce_check",
]


@dataclass(frozen=True)
class KernelQuery:
    g: PointKC
    h: PointKC
    t: float
    n: int = 0
    c: float = 1.0

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("t must be positive")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.n >= 1 and self.c <= self.g.spec.delta_sq:
            raise ValueError("need c > |delta|^2 for the Sobolev kernel")

    @property
    def spec(self) -> GroupSpec:
        return self.g.spec


def pair_point(spec: GroupSpec, g: PointKC, h: PointKC) -> PointKC:
    """Polar form of g h^*."""
    if spec.kind == "torus":
        z = polar_compose(spec, g) + polar_compose(spec, star(spec, h))
        return polar_decompose(spec, z)
    mat = polar_compose(spec, g) @ np.asarray(polar_compose(spec, h)).conj().T
    return polar_decompose(spec, mat)


def k_t(query: KernelQuery, tol: float = 1e-10) -> complex:
    """Reproducing kernel rho_{2t}(g h^*) for the plain holomorphic L^2 space."""
    p = pair_point(query.spec, query.g, query.h)
    value, _ = rho_eval(query.spec, 2.0 * query.t, p, tol)
    return value


def k_sobolev_spectral(query: KernelQuery, tol: float = 1e-10) -> complex:
    """Blockwise route: sum_pi (dim/vol) e^{-lambda t} (c+lambda)^{-2n} chi_pi(gh^*)."""
    spec = query.spec
    p = pair_point(spec, query.g, query.h)
    s = norm_y(p.y)
    cutoff = _choose_cutoff(spec, 2.0 * query.t, s, tol)
    vol = spec.volume
    total = 0.0 + 0.0j
    if spec.kind == "torus":
        z = np.asarray(p.x, dtype=float) + 1j * p.y
        for label in enumerate_irreps(spec, cutoff):
            lam = laplacian_eigenvalue(spec, label)
            chi = np.exp(1j * np.dot(label, z))
            total += math.exp(-lam * query.t) * (query.c + lam) ** (-2 * query.n) * chi / vol
    else:
        g = polar_compose(spec, p)
        half_trace = 0.5 * (g[0, 0] + g[1, 1])
        for m in range(1, cutoff + 1):
            lam = laplacian_eigenvalue(spec, m)
            chi = character_from_trace(m, half_trace)
            total += m * math.exp(-lam * query.t) * (query.c + lam) ** (-2 * query.n) * chi / vol
    return complex(total)


def k_sobolev_integral(query: KernelQuery, q: QuadSpec | None = None, tol: float = 1e-10):
    """Gamma-integral route:

    k_t^{2n}(g,h) = 1/(2n-1)! * int_0^inf s^{2n-1} e^{-cs} rho_{2(t+s)}(gh^*) ds.
    """
    if query.n < 1:
        raise ValueError("the integral route needs n >= 1")
    spec = query.spec
    p = pair_point(spec, query.g, query.h)

    def f(s: float) -> complex:
        value, _ = rho_eval(spec, 2.0 * (query.t + s), p, tol)
        return value

    res = integrate_laguerre(query.c, query.n, f, q)
    return res.value / math.factorial(2 * query.n - 1), res


def envelope_l2(spec: GroupSpec, t: float, y) -> float:
    """Pointwise-bound envelope Phi(Y) e^{|Y|^2/t} (log-space internally)."""
    return math.exp(log_envelope_l2(spec, t, y))


def log_envelope_l2(spec: GroupSpec, t: float, y) -> float:
    return log_phi(spec, y) + float(np.dot(y, y)) / t


def envelope_sobolev(spec: GroupSpec, t: float, n: int, y) -> float:
    """Sobolev envelope Phi(Y) e^{|Y|^2/t} / (1+|Y|^2)^{2n}."""
    return math.exp(log_envelope_sobolev(spec, t, n, y))


def log_envelope_sobolev(spec: GroupSpec, t: float, n: int, y) -> float:
    return log_envelope_l2(spec, t, y) - 2.0 * n * math.log1p(float(np.dot(y, y)))


def reproduce_check(F: HoloFunc, g: PointKC, q: QuadSpec | None = None) -> float:
    """Relative residual of the reproducing identity at g:

    |F(g) - int k_t(g,h) F(h) nu_t(h) dh| / (1 + |F(g)|).

    The K-part of the h-integral is exact (Schur), leaving one k-space
    quadrature of sum_pi e^{-lambda t} trace(pi(g e^{2iY}) B_pi).
    """
    q = q or QuadSpec()
    spec, t = F.spec, F.t
    damped = F.coefs.map_blocks(
        lambda label: math.exp(-laplacian_eigenvalue(spec, label) * t)
    )
    g_mat = polar_compose(spec, g)

    def integrand(ys: np.ndarray) -> np.ndarray:
        if spec.kind == "torus":
            zs = np.asarray(g_mat, dtype=complex)[None, :] + 2j * ys
            return damped.eval_k_batch(zs)
        gs = np.asarray(g_mat, dtype=complex)[None] @ exp_iy_batch(spec, 2.0 * ys)
        return damped.eval_k_batch(gs)

    values = []
    for level in q.levels:
        rule = kspace_rule(spec, t, level)
        values.append(complex(np.dot(rule.weights, integrand(rule.nodes))))
    reproduced = values[-1]
    fg = eval_holo(F, g)
    return abs(fg - reproduced) / (1.0 + abs(fg))
