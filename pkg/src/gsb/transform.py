"""The heat-kernel transform C_t, its norms, and its two inverses.

C_t f is the analytic continuation of exp(t*Delta/2) f, realized here as
blockwise damping of a coefficient vector.  Norms over the complexified
group split into an exact K-integral (Schur orthogonality applied to the
blocks pi(e^{iY}) B_pi) times a single numeric integral over the Lie
algebra; only the latter carries quadrature error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .coeffs import CoefVec
from .groups import GroupSpec, irrep_dim, laplacian_eigenvalue, rep_matrix_batch
from .polar import MAX_ABS_Y, PointKC, log_phi, phi
from .quadrature import QuadResult, QuadSpec, kspace_rule

__all__ = [
    "HoloFunc",
    "QuadratureError",
    "ct_forward",
    "eval_holo",
    "l2_norm_K",
    "holo_inner",
    "holo_l2_norm",
    "ct_inverse_spectral",
    "ct_inverse_integral",
    "inverse_integral_trace",
    "exp_iy_batch",
]


class QuadratureError(RuntimeError):
    """Inter-level quadrature agreement failed; carries the level trace."""

    def __init__(self, message: str, result: QuadResult):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class HoloFunc:
    """Holomorphic function with finite Peter-Weyl support (damped coefs)."""

    coefs: CoefVec
    t: float
    provenance: str = "user"

    @property
    def spec(self) -> GroupSpec:
        return self.coefs.spec

    def scaled_blocks(self, factor) -> "HoloFunc":
        return HoloFunc(self.coefs.map_blocks(factor), self.t, self.provenance)


def ct_forward(f: CoefVec, t: float) -> HoloFunc:
    """Damp block pi by exp(-lambda_pi t/2) and package for K_C evaluation."""
    if t <= 0:
        raise ValueError("t must be positive")
    damped = f.map_blocks(lambda label: math.exp(-laplacian_eigenvalue(f.spec, label) * t / 2.0))
    return HoloFunc(damped, t, "forward")


def eval_holo(F: HoloFunc, p: PointKC, tol: float = 0.0) -> complex:
    """Evaluate F at a polar point; exact (finite support, no tail)."""
    return F.coefs.eval_kc(p)


def l2_norm_K(f: CoefVec) -> float:
    """Plancherel norm, equal to the Riemannian-volume L^2(K) norm."""
    return f.plancherel_norm()


def exp_iy_batch(spec: GroupSpec, ys: np.ndarray) -> np.ndarray:
    """exp(iY) for a batch of algebra coordinates; (N, 2, 2) for SU(2).

    For tori the group element batch is x + iY restricted to x = 0, i.e.
    the complex vector iY, shape (N, r).
    """
    ys = np.asarray(ys, dtype=float)
    if spec.kind == "torus":
        return 1j * ys
    r = np.linalg.norm(ys, axis=1)
    safe = np.where(r < 1e-12, 1.0, r)
    # iY = -(1/2)(y.sigma): exp(iY) = cosh(r/2) I - sinh(r/2)(yhat.sigma)
    from .groups import PAULI

    ysig = np.tensordot(ys / safe[:, None], PAULI, axes=(1, 0))
    ch = np.cosh(r / 2.0)[:, None, None]
    sh = np.sinh(r / 2.0)[:, None, None]
    out = ch * np.eye(2)[None] - sh * ysig
    out[r < 1e-12] = np.eye(2)
    return out


def _pair_k_integrals(F1: HoloFunc, F2: HoloFunc, ys: np.ndarray) -> np.ndarray:
    """Exact int_K conj(F1) F2 dx at each Y of the batch, by Schur orthogonality."""
    spec = F1.spec
    exp_iy = exp_iy_batch(spec, ys)
    out = np.zeros(ys.shape[0], dtype=complex)
    labels = set(F1.coefs.entries) | set(F2.coefs.entries)
    for label in sorted(labels):
        b1 = F1.coefs.entries.get(label)
        b2 = F2.coefs.entries.get(label)
        if b1 is None or b2 is None:
            continue
        d = irrep_dim(spec, label)
        if spec.kind == "torus":
            scal = np.exp(1j * exp_iy @ np.asarray(label))  # e^{-n.Y}
            out += (spec.volume / d) * np.conj(scal * b1[0, 0]) * (scal * b2[0, 0])
        else:
            mats = rep_matrix_batch(spec, label, exp_iy)
            p1 = mats @ b1
            p2 = p1 if b2 is b1 else mats @ b2
            out += (spec.volume / d) * np.einsum("nij,nij->n", p1.conj(), p2)
    return out


def holo_inner(F1: HoloFunc, F2: HoloFunc, q: QuadSpec, weight=None, weight_nodes=None) -> QuadResult:
    """<F1, F2> against weight(|Y|^2) * nu_t(g) dg, K-part exact.

    weight maps u = |Y|^2 (vectorized) to a real factor; None means 1.
    weight_nodes, if given, maps the (N, r) node batch to per-node factors
    (for weights that depend on the direction of Y, not just its length).
    """
    if F1.spec != F2.spec:
        raise ValueError("mismatched group specs")
    if abs(F1.t - F2.t) > 0:
        raise ValueError("mismatched transform times")
    spec, t = F1.spec, F1.t
    values = []
    for level in q.levels:
        rule = kspace_rule(spec, t, level)
        vals = _pair_k_integrals(F1, F2, rule.nodes)
        if weight is not None:
            vals = vals * weight(np.sum(rule.nodes**2, axis=1))
        if weight_nodes is not None:
            vals = vals * weight_nodes(rule.nodes)
        values.append(complex(np.dot(rule.weights, vals)))
    gap = abs(values[-1] - values[-2]) / max(abs(values[-1]), abs(values[-2]), 1e-300)
    return QuadResult(values[-1], gap, q.tolerance, tuple(values))


def holo_l2_norm(F: HoloFunc, q: QuadSpec | None = None) -> float:
    """Norm in the weighted holomorphic L^2 space over K_C."""
    q = q or QuadSpec()
    res = holo_inner(F, F, q)
    if not res.ok:
        raise QuadratureError(
            f"k-space quadrature gap {res.gap:.3e} exceeds {res.tolerance:.3e}; trace {res.by_level}",
            res,
        )
    return math.sqrt(max(res.value.real, 0.0))


def ct_inverse_spectral(F: HoloFunc) -> CoefVec:
    """Exact left inverse of ct_forward on finite supports (undoes the damping)."""
    spec = F.spec
    return F.coefs.map_blocks(lambda label: math.exp(laplacian_eigenvalue(spec, label) * F.t / 2.0))


def _ball_nodes(spec: GroupSpec, radius: float, level: int):
    """Nodes/weights for int over {|Y| <= radius} (cube rule on tori)."""
    if radius > MAX_ABS_Y:
        raise ValueError("radius exceeds the |Y| overflow guard")
    if spec.kind == "torus":
        x, w = roots_legendre(level)
        nodes_1d = radius * x
        w_1d = radius * w
        grids = np.meshgrid(*([nodes_1d] * spec.rank), indexing="ij")
        nodes = np.stack([g.ravel() for g in grids], axis=-1)
        weights = np.ones(nodes.shape[0])
        for g in np.meshgrid(*([w_1d] * spec.rank), indexing="ij"):
            weights = weights * g.ravel()
        return nodes, weights
    xr, wr = roots_legendre(level)
    r = radius * (xr + 1.0) / 2.0
    wr = radius / 2.0 * wr * r**2
    ntheta = min(level, 20)
    nphi = 2 * ntheta
    x, v = roots_legendre(ntheta)
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
    weights = (wr[:, None] * ang_w[None, :]).ravel()
    return nodes, weights


def ct_inverse_integral(F: HoloFunc, x, radius: float, q: QuadSpec | None = None) -> complex:
    """Ball-truncated inversion integral at a point x of K:

    (2 pi t)^{-d/2} e^{-|delta|^2 t/2} int_{|Y|<=R} F(x e^{iY})
        e^{-|Y|^2/2t} / Phi(Y/2) dY.
    """
    q = q or QuadSpec(levels=(32, 48))
    spec, t = F.spec, F.t
    values = []
    for level in q.levels:
        nodes, weights = _ball_nodes(spec, radius, level)
        vals = _eval_holo_batch(F, x, nodes)
        u = np.sum(nodes**2, axis=1)
        damp = np.exp(-u / (2.0 * t) - np.array([log_phi(spec, y / 2.0) for y in nodes]))
        values.append(complex(np.dot(weights, vals * damp)))
    pref = (2.0 * math.pi * t) ** (-spec.dim / 2.0) * math.exp(-spec.delta_sq * t / 2.0)
    gap = abs(values[-1] - values[-2]) / max(abs(values[-1]), abs(values[-2]), 1e-300)
    if gap > max(q.tolerance, 1e-9):
        raise QuadratureError(
            f"inversion quadrature gap {gap:.3e} exceeds {q.tolerance:.3e}",
            QuadResult(values[-1], gap, q.tolerance, tuple(values)),
        )
    return pref * values[-1]


def _eval_holo_batch(F: HoloFunc, x, ys: np.ndarray) -> np.ndarray:
    """F(x e^{iY}) for fixed x in K over a batch of Y."""
    spec = F.spec
    if spec.kind == "torus":
        zs = np.asarray(x, dtype=float)[None, :] + 1j * ys
        return F.coefs.eval_k_batch(zs)
    gx = np.asarray(x, dtype=complex)
    gs = gx[None] @ exp_iy_batch(spec, ys)
    return F.coefs.eval_k_batch(gs)


def inverse_integral_trace(F: HoloFunc, x, radii, q: QuadSpec | None = None):
    """Inversion values over an increasing radius list, with a stability flag.

    Returns (values, stabilized): stabilized means the last two radii agree
    to the quadrature tolerance relative to the final value.
    """
    radii = sorted(radii)
    values = [ct_inverse_integral(F, x, r, q) for r in radii]
    tol = (q or QuadSpec()).tolerance
    if len(values) >= 2:
        stabilized = abs(values[-1] - values[-2]) <= max(tol, tol * abs(values[-1]))
    else:
        stabilized = False
    return values, stabilized
