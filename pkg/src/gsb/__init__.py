"""Numerics for the heat-kernel (Segal-Bargmann) transform on compact groups.

Covers tori and SU(2): Peter-Weyl coefficient vectors, polar coordinates on
the complexification, heat kernels and the Gangolli density, the transform
and its inverses, reproducing and Sobolev kernels, Toeplitz symbols, and
lattice-sum/growth-functional bound diagnostics.
"""

from .coeffs import CoefVec, basis_entry, from_torus_samples
from .groups import GroupSpec, parse_group, su2, torus
from .heat import heat_coeffs, heat_operator, log_nu_t, nu_t, rho_eval
from .kernels import KernelQuery, k_sobolev_integral, k_sobolev_spectral, k_t, reproduce_check
from .polar import PointKC, identity_point, phi, polar_compose, polar_decompose, star
from .quadrature import QuadResult, QuadSpec, integrate_K, integrate_kspace, integrate_laguerre
from .sobolev import (
    PolyU,
    holo_sobolev_norm,
    laplacian_apply,
    sobolev_norm,
    toeplitz_quadratic_form,
    toeplitz_symbol,
    weighted_norm,
)
from .transform import (
    HoloFunc,
    ct_forward,
    ct_inverse_integral,
    ct_inverse_spectral,
    eval_holo,
    holo_inner,
    holo_l2_norm,
    l2_norm_K,
)

__all__ = [
    "CoefVec",
    "GroupSpec",
    "HoloFunc",
    "KernelQuery",
    "PointKC",
    "PolyU",
    "QuadResult",
    "QuadSpec",
    "basis_entry",
    "ct_forward",
    "ct_inverse_integral",
    "ct_inverse_spectral",
    "eval_holo",
    "from_torus_samples",
    "heat_coeffs",
    "heat_operator",
    "holo_inner",
    "holo_l2_norm",
    "holo_sobolev_norm",
    "identity_point",
    "integrate_K",
    "integrate_kspace",
    "integrate_laguerre",
    "k_sobolev_integral",
    "k_sobolev_spectral",
    "k_t",
    "l2_norm_K",
    "laplacian_apply",
    "log_nu_t",
    "nu_t",
    "parse_group",
    "phi",
    "polar_compose",
    "polar_decompose",
    "reproduce_check",
    "rho_eval",
    "sobolev_norm",
    "star",
    "su2",
    "toeplitz_quadratic_form",
    "toeplitz_symbol",
    "torus",
    "weighted_norm",
]

__version__ = "0.1.0"
