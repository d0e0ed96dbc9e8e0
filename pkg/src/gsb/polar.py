"""Polar coordinates g = x * exp(iY) on the complexified group.

Includes the density function Phi, the Haar density 1/Phi^2 in polar
coordinates, the star anti-involution, and the left-invariant frame
coefficient matrices expressing the complexified vector fields X_k, JX_k
through the polar-coordinate fields (X-tilde, d/dy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .groups import SU2_BASIS, GroupSpec

__all__ = [
    "PointKC",
    "identity_point",
    "polar_decompose",
    "polar_compose",
    "star",
    "phi",
    "haar_density",
    "frame_coefficients",
    "frame_apply",
    "algebra_matrix",
    "norm_y",
]

MAX_ABS_Y = 50.0  # overflow guard for the principal log / sinh factors


@dataclass(frozen=True)
class PointKC:
    """Polar pair (x, Y): x in K, Y coordinates in the orthonormal basis."""

    spec: GroupSpec
    x: np.ndarray  # torus: angles in [0, 2pi)^r; su2: 2x2 unitary, det 1
    y: np.ndarray  # real coordinates, length dim K

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))


def identity_point(spec: GroupSpec) -> PointKC:
    if spec.kind == "torus":
        return PointKC(spec, np.zeros(spec.rank), np.zeros(spec.rank))
    return PointKC(spec, np.eye(2, dtype=complex), np.zeros(3))


def norm_y(y) -> float:
    """|Y| in the group metric (coordinates are orthonormal by construction)."""
    return float(np.linalg.norm(y))


def algebra_matrix(spec: GroupSpec, y) -> np.ndarray:
    """The Lie-algebra element with the given coordinates, as a matrix (su2)."""
    if spec.kind != "su2":
        raise ValueError("algebra_matrix only applies to su2")
    y = np.asarray(y, dtype=float)
    return np.tensordot(y, SU2_BASIS, axes=(0, 0))


def polar_decompose(spec: GroupSpec, g) -> PointKC:
    """Unique factorization g = x * exp(iY) with x in K, Y in the algebra.

    For SU(2) this is the matrix polar decomposition: exp(iY) is the
    positive square root of g^* g and Y its principal logarithm over -i.
    """
    if spec.kind == "torus":
        z = np.atleast_1d(np.asarray(g, dtype=complex))
        x = np.mod(z.real, 2.0 * math.pi)
        return PointKC(spec, x, z.imag.copy())

    g = np.asarray(g, dtype=complex)
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if abs(det - 1.0) > 1e-8:
        raise ValueError("group element must lie in SL(2,C)")
    h = g.conj().T @ g  # positive hermitian, det 1
    evals, vecs = np.linalg.eigh(h)
    evals = np.clip(evals.real, 1e-300, None)
    # iY = log sqrt(h); hermitian traceless
    iy = (vecs * (0.5 * np.log(evals))) @ vecs.conj().T
    p = (vecs * np.sqrt(evals)) @ vecs.conj().T
    x = g @ np.linalg.inv(p)
    # coordinates: iY = -(1/2) sum y_k sigma_k  =>  y_k = -trace(iY sigma_k)
    from .groups import PAULI

    y = np.array([-np.trace(iy @ sigma).real for sigma in PAULI])
    if norm_y(y) > MAX_ABS_Y:
        raise ValueError("polar factor exceeds the |Y| overflow guard")
    return PointKC(spec, x, y)


def polar_compose(spec: GroupSpec, p: PointKC):
    """Inverse of polar_decompose: the group element x * exp(iY)."""
    if spec.kind == "torus":
        return np.asarray(p.x, dtype=float) + 1j * p.y
    iy = 1j * algebra_matrix(spec, p.y)  # hermitian
    return np.asarray(p.x, dtype=complex) @ expm(iy)


def star(spec: GroupSpec, p: PointKC) -> PointKC:
    """The anti-involution (x e^{iY})^* = e^{iY} x^{-1}, returned in polar form."""
    if spec.kind == "torus":
        x = np.mod(-np.asarray(p.x, dtype=float), 2.0 * math.pi)
        return PointKC(spec, x, p.y.copy())
    g = polar_compose(spec, p)
    return polar_decompose(spec, np.asarray(g).conj().T)


def _sinch(s: float) -> float:
    """sinh(s)/s with the removable singularity filled in."""
    if abs(s) < 1e-4:
        s2 = s * s
        return 1.0 + s2 / 6.0 * (1.0 + s2 / 20.0)
    return math.sinh(s) / s


def phi(spec: GroupSpec, y) -> float:
    """Product of alpha(Y)/sinh(alpha(Y)) over positive roots; 1 on tori."""
    if spec.kind == "torus":
        return 1.0
    s = norm_y(y)
    if s > MAX_ABS_Y:
        raise ValueError("|Y| exceeds the overflow guard")
    return 1.0 / _sinch(s)


def log_phi(spec: GroupSpec, y) -> float:
    """log Phi(Y), safe for large |Y| (used by envelope code in log space)."""
    if spec.kind == "torus":
        return 0.0
    s = norm_y(y)
    if s < 1e-4:
        return -math.log(_sinch(s))
    # log(s/sinh s) = log(2s) - s - log1p(-exp(-2s))
    return math.log(2.0 * s) - s - math.log1p(-math.exp(-2.0 * s))


def haar_density(spec: GroupSpec, y) -> float:
    """Density of Haar measure dg against dx dY: 1/Phi(Y)^2."""
    f = phi(spec, y)
    return 1.0 / (f * f)


def _ad_matrix(y: np.ndarray) -> np.ndarray:
    """ad(Y) on su(2) coordinates: [E_i, E_j] = -eps_{ijk} E_k."""
    y1, y2, y3 = y
    return np.array(
        [
            [0.0, y3, -y2],
            [-y3, 0.0, y1],
            [y2, -y1, 0.0],
        ]
    )


def _ad_functions(y: np.ndarray):
    """Evaluate the four entire functions of ad(Y) used by the frame formula.

    Returns (sin(adY)/adY, (cos(adY)-1)/adY, sin(adY), cos(adY)).  ad(Y) is
    real skew with eigenvalues 0, +-i|Y|, so we diagonalize i*ad(Y)
    (hermitian); a power series fallback covers |Y| < 1e-4.
    """
    s = float(np.linalg.norm(y))
    ad = _ad_matrix(y)
    if s < 1e-4:
        eye = np.eye(3)
        ad2 = ad @ ad
        ad3 = ad @ ad2
        sinc = eye - ad2 / 6.0
        cosm1 = -ad / 2.0 + ad3 / 24.0
        sin = ad - ad3 / 6.0
        cos = eye - ad2 / 2.0
        return sinc, cosm1, sin, cos
    h = 1j * ad  # hermitian
    evals, vecs = np.linalg.eigh(h)
    lam = -1j * evals  # eigenvalues of ad(Y): 0, +-i s

    def f_of(fun):
        vals = np.array([fun(l) for l in lam])
        return ((vecs * vals) @ vecs.conj().T).real

    return f_of(_csinc), f_of(_ccosm1), f_of(np.sin), f_of(np.cos)


def _csinc(z: complex) -> complex:
    if abs(z) < 1e-8:
        return 1.0 - z * z / 6.0
    return np.sin(z) / z


def _ccosm1(z: complex) -> complex:
    if abs(z) < 1e-8:
        return -z / 2.0 + z**3 / 24.0
    return (np.cos(z) - 1.0) / z


def frame_coefficients(spec: GroupSpec, y):
    """Coefficient matrices (a, b, c, d) of the left-invariant frame.

    X_k  = sum_l a[k,l] Xtilde_l + b[k,l] d/dy_l
    JX_k = sum_l c[k,l] Xtilde_l + d[k,l] d/dy_l

    computed from the block formula with S = sin(adY)/adY:
    [[a, c], [b, d]] = transpose of S^{-1} [[S, (cos adY - 1)/adY],
    [sin adY, cos adY]] (the matrix functions produce coefficients indexed
    by column, so the row contract above needs the transpose).  S is always
    invertible (eigenvalues sinh(s)/s > 0).
    """
    d = spec.dim
    if spec.kind == "torus":
        eye = np.eye(d)
        zero = np.zeros((d, d))
        return eye, zero, zero.copy(), eye.copy()
    y = np.asarray(y, dtype=float)
    sinc, cosm1, sin, cos = _ad_functions(y)
    sinc_inv = np.linalg.inv(sinc)
    a = np.eye(3)
    c = (sinc_inv @ cosm1).T
    b = (sinc_inv @ sin).T
    d_ = (sinc_inv @ cos).T
    return a, b, c, d_


def _translate_in_k(spec: GroupSpec, p: PointKC, k: int, h: float) -> PointKC:
    """The point (x * exp(h E_k)) e^{iY}."""
    if spec.kind == "torus":
        x = np.asarray(p.x, dtype=float).copy()
        x[k] += h
        return PointKC(spec, x, p.y)
    step = expm(h * SU2_BASIS[k])
    return PointKC(spec, np.asarray(p.x, dtype=complex) @ step, p.y)


def _translate_in_y(spec: GroupSpec, p: PointKC, k: int, h: float) -> PointKC:
    y = p.y.copy()
    y[k] += h
    return PointKC(spec, p.x, y)


def frame_apply(spec, func, p: PointKC, k: int, which: str, h: float | None = None) -> complex:
    """Apply the left-invariant field X_k or JX_k to an evaluator on PointKC.

    func takes a PointKC and returns a complex value.  Derivatives in the
    polar coordinates are central finite differences with step h (default
    1e-5 * (1 + |Y|)); the frame coefficients then assemble the field.
    """
    if which not in ("X", "JX"):
        raise ValueError("which must be 'X' or 'JX'")
    if h is None:
        h = 1e-5 * (1.0 + norm_y(p.y))
    if h > 0.1 * (1.0 + norm_y(p.y)):
        raise ValueError("finite-difference step too large for the requested point")
    a, b, c, d = frame_coefficients(spec, p.y)
    ka, kb = (a, b) if which == "X" else (c, d)
    total = 0.0 + 0.0j
    for l in range(spec.dim):
        if abs(ka[k, l]) > 1e-14:
            dk = (func(_translate_in_k(spec, p, l, h)) - func(_translate_in_k(spec, p, l, -h))) / (2 * h)
            total += ka[k, l] * dk
        if abs(kb[k, l]) > 1e-14:
            dy = (func(_translate_in_y(spec, p, l, h)) - func(_translate_in_y(spec, p, l, -h))) / (2 * h)
            total += kb[k, l] * dy
    return total
