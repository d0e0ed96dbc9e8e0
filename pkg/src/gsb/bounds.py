"""Lattice-sum machinery and the growth-functional smoothness diagnostic.

The lattice sums a_tau over the kernel lattice (intersected with the closed
Weyl chamber) scale like tau^{r/2}; their sup quotient alpha_t feeds a
pointwise envelope for the analytically continued heat kernel.  The growth
functional G_n measures sup |F|^2 (1+|Y|^2)^{2n} / (Phi e^{|Y|^2/t}) on a
polar grid and classifies smoothness by stability under radius doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma, roots_genlaguerre

from .groups import GroupSpec, root_data
from .heat import rho_eval
from .polar import PointKC, log_phi
from .transform import HoloFunc, _eval_holo_batch

__all__ = [
    "LatticePoly",
    "BoundReport",
    "lattice_points",
    "lattice_sum",
    "lattice_limit_check",
    "alpha_t_estimate",
    "polar_grid",
    "growth_functional",
    "smoothness_report",
    "kernel_bound_check",
]


@dataclass(frozen=True)
class LatticePoly:
    """Univariate polynomial applied to |gamma|; coefficients ascending."""

    coefficients: tuple = (1.0,)

    def __call__(self, s):
        return np.polyval(list(reversed(self.coefficients)), s)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


@dataclass
class BoundReport:
    """Rows (n, grid radius, G_n value), sorted, plus stability flags."""

    spec: GroupSpec
    t: float
    descriptor: str
    rows: list = field(default_factory=list)
    stable: dict = field(default_factory=dict)

    def sorted_rows(self):
        return sorted(self.rows, key=lambda row: (row[0], row[1]))


def lattice_points(spec: GroupSpec, radius: float) -> np.ndarray:
    """Kernel-lattice points in the closed chamber with |gamma| <= radius.

    Torus: the full lattice (2 pi Z)^r (no roots, so no chamber cut).
    SU(2): the nonnegative half of 4 pi Z in the rank-1 torus direction.
    """
    step = root_data(spec).lattice_step
    if spec.kind == "torus":
        kmax = int(math.floor(radius / step))
        axes = [step * np.arange(-kmax, kmax + 1)] * spec.rank
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        return pts[np.linalg.norm(pts, axis=1) <= radius]
    kmax = int(math.floor(radius / step))
    return (step * np.arange(0, kmax + 1)).reshape(-1, 1)


def lattice_sum(spec: GroupSpec, tau: float, P: LatticePoly | None = None, radius_cut: float | None = None) -> float:
    """sum over chamber lattice points of P(|gamma|/sqrt(tau)) e^{-|gamma|^2/tau}.

    With radius_cut=None the radius doubles until the sum is stable to 1e-12
    relative (Gaussian tails decay fast enough that two levels suffice).
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    P = P or LatticePoly()

    def partial(radius: float) -> float:
        pts = lattice_points(spec, radius)
        norms = np.linalg.norm(pts, axis=1)
        terms = P(norms / math.sqrt(tau)) * np.exp(-(norms**2) / tau)
        if spec.kind == "su2":
            # chamber-wall points are shared between Weyl reflections and
            # count half, which is what makes the tau->inf limit match the
            # chamber integral
            terms = np.where(norms == 0.0, 0.5 * terms, terms)
        return float(np.sum(terms))

    if radius_cut is not None:
        return partial(radius_cut)
    radius = 8.0 * math.sqrt(tau) + root_data(spec).lattice_step
    value = partial(radius)
    for _ in range(40):
        radius *= 2.0
        refined = partial(radius)
        if abs(refined - value) <= 1e-12 * max(abs(refined), 1.0):
            return refined
        value = refined
    raise RuntimeError("lattice sum failed to stabilize")


def _chamber_gaussian_integral(spec: GroupSpec, P: LatticePoly) -> float:
    """(1/A) int over the closed chamber of P(|x|) e^{-|x|^2} dx,

    A = covolume of the lattice.  Radial reduction with u = rho^2 turns the
    integral into a generalized Gauss-Laguerre sum (alpha = r/2 - 1).
    """
    r = spec.rank
    u, w = roots_genlaguerre(80, r / 2.0 - 1.0)
    radial = 0.5 * float(np.sum(w * P(np.sqrt(u))))
    step = root_data(spec).lattice_step
    if spec.kind == "torus":
        surface = 2.0 * math.pi ** (r / 2.0) / gamma(r / 2.0)
        return surface * radial / step**r
    # rank-1 half-line chamber
    return radial / step


def lattice_limit_check(spec: GroupSpec, P: LatticePoly | None = None, tau_list=(16.0, 64.0, 256.0)):
    """Rows (tau, tau^{-r/2} * lattice_sum, target, relative gap)."""
    P = P or LatticePoly()
    target = _chamber_gaussian_integral(spec, P)
    rows = []
    for tau in tau_list:
        scaled = lattice_sum(spec, tau, P) / tau ** (spec.rank / 2.0)
        rows.append((tau, scaled, target, abs(scaled - target) / abs(target)))
    return rows


def alpha_t_estimate(spec: GroupSpec, t: float, P: LatticePoly | None = None, tau_grid=None) -> float:
    """Empirical sup over the tau grid of lattice_sum(tau) / tau^{r/2}."""
    if t <= 0:
        raise ValueError("t must be positive")
    P = P or LatticePoly()
    if tau_grid is None:
        tau_grid = [t * 2.0**k for k in range(9)]
    return max(lattice_sum(spec, tau, P) / tau ** (spec.rank / 2.0) for tau in tau_grid)


def _unit_directions(dim: int, n_angular: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        ang = 2.0 * math.pi * np.arange(n_angular) / n_angular
        return np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    if dim == 3:
        ct = np.linspace(-1.0, 1.0, n_angular)
        ph = 2.0 * math.pi * np.arange(n_angular) / n_angular
        st = np.sqrt(np.clip(1.0 - ct**2, 0.0, None))
        return np.stack(
            [
                np.outer(st, np.cos(ph)).ravel(),
                np.outer(st, np.sin(ph)).ravel(),
                np.outer(ct, np.ones(n_angular)).ravel(),
            ],
            axis=-1,
        )
    rng = np.random.default_rng(0)
    dirs = rng.standard_normal((n_angular * n_angular, dim))
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def polar_grid(spec: GroupSpec, radius: float, n_radial: int = 40, n_angular: int = 16) -> np.ndarray:
    """Radial x angular evaluation grid over the Lie algebra, origin included."""
    radii = radius * (np.arange(1, n_radial + 1) / n_radial)
    dirs = _unit_directions(spec.dim, n_angular)
    pts = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, spec.dim)
    return np.vstack([np.zeros((1, spec.dim)), pts])


def growth_functional(F: HoloFunc, t: float, n: int, grid: np.ndarray):
    """sup over the grid of |F(e^{iY})|^2 (1+|Y|^2)^{2n} / (Phi(Y) e^{|Y|^2/t}).

    Worked in log space; returns (value, argmax Y).
    """
    spec = F.spec
    x0 = np.zeros(spec.rank) if spec.kind == "torus" else np.eye(2, dtype=complex)
    vals = _eval_holo_batch(F, x0, grid)
    u = np.sum(grid**2, axis=1)
    log_env = np.array([log_phi(spec, y) for y in grid]) + u / t
    with np.errstate(divide="ignore"):
        logs = 2.0 * np.log(np.abs(vals)) + 2.0 * n * np.log1p(u) - log_env
    i = int(np.argmax(logs))
    return float(np.exp(logs[i])), grid[i]


def smoothness_report(
    F: HoloFunc,
    t: float,
    n_max: int = 4,
    radius: float = 6.0,
    n_radial: int = 40,
    n_angular: int = 16,
    stability_tol: float = 0.10,
    descriptor: str = "",
) -> BoundReport:
    """Growth functionals at a radius and its double, with stability flags."""
    report = BoundReport(F.spec, t, descriptor)
    grids = {r: polar_grid(F.spec, r, n_radial, n_angular) for r in (radius, 2.0 * radius)}
    for n in range(n_max + 1):
        values = {}
        for r, grid in grids.items():
            value, _ = growth_functional(F, t, n, grid)
            report.rows.append((n, r, value))
            values[r] = value
        base = values[radius]
        report.stable[n] = abs(values[2.0 * radius] - base) <= stability_tol * max(base, 1e-300)
    report.rows = report.sorted_rows()
    return report


def kernel_bound_check(
    spec: GroupSpec,
    t: float,
    taus=None,
    y_points: np.ndarray | None = None,
    P: LatticePoly | None = None,
    slack: float = 0.05,
):
    """Envelope consistency of the analytically continued heat kernel:

    rho_{2 tau}(g g^*) <= alpha_t tau^{(r-d)/2} e^{|delta|^2 tau}
                          e^{|Y|^2/tau} Phi(Y) (1 + slack)

    on the grid, with g = e^{iY} (so g g^* = e^{2iY}).  Returns (rows, ok)
    where rows are (tau, max ratio of left side to the slack-free bound).
    """
    taus = list(taus) if taus is not None else [t, 2.0 * t, 4.0 * t]
    if y_points is None:
        y_points = polar_grid(spec, 4.0, n_radial=16, n_angular=8)
    alpha = alpha_t_estimate(spec, t, P)
    rows = []
    ok = True
    if spec.kind == "torus":
        x0 = np.zeros(spec.rank)
    else:
        x0 = np.eye(2, dtype=complex)
    for tau in taus:
        worst = 0.0
        for y in y_points:
            value, _ = rho_eval(spec, 2.0 * tau, PointKC(spec, x0, 2.0 * y))
            u = float(np.dot(y, y))
            log_bound = (
                math.log(alpha)
                + (spec.rank - spec.dim) / 2.0 * math.log(tau)
                + spec.delta_sq * tau
                + u / tau
                + log_phi(spec, y)
            )
            ratio = abs(value) / math.exp(log_bound)
            worst = max(worst, ratio)
        rows.append((tau, worst))
        ok = ok and worst <= 1.0 + slack
    return rows, ok
