"""Finitely supported Peter-Weyl coefficient vectors.

A CoefVec holds one complex dim x dim block B_pi per irrep label and
represents f(x) = sum_pi trace(pi(x) B_pi).  The Plancherel convention is
fixed so that the squared norm equals the Riemannian-volume L^2 integral:

    ||f||^2 = sum_pi (vol K / dim pi) ||B_pi||_HS^2.
"""

from __future__ import annotations

import math

import numpy as np

from .groups import (
    GroupSpec,
    irrep_dim,
    laplacian_eigenvalue,
    rep_matrix,
    rep_matrix_batch,
)
from .polar import PointKC, polar_compose

__all__ = ["CoefVec", "basis_entry", "from_torus_samples"]


class CoefVec:
    """Immutable finitely supported map: irrep label -> coefficient block."""

    def __init__(self, spec: GroupSpec, entries: dict):
        self.spec = spec
        cleaned = {}
        for label, block in entries.items():
            block = np.asarray(block, dtype=complex)
            d = irrep_dim(spec, label)
            if block.shape != (d, d):
                raise ValueError(f"block for {label} must be {d}x{d}")
            if np.any(block != 0):
                b = block.copy()
                b.setflags(write=False)
                cleaned[label] = b
        self.entries = cleaned

    @property
    def support(self):
        return sorted(self.entries.keys())

    def block(self, label) -> np.ndarray:
        d = irrep_dim(self.spec, label)
        return self.entries.get(label, np.zeros((d, d), dtype=complex))

    def map_blocks(self, factor) -> "CoefVec":
        """New CoefVec with block pi scaled by factor(label) (a scalar)."""
        return CoefVec(
            self.spec,
            {label: factor(label) * block for label, block in self.entries.items()},
        )

    def __add__(self, other: "CoefVec") -> "CoefVec":
        if other.spec != self.spec:
            raise ValueError("mismatched group specs")
        out = {label: block.copy() for label, block in self.entries.items()}
        for label, block in other.entries.items():
            out[label] = out.get(label, 0) + block
        return CoefVec(self.spec, out)

    def __mul__(self, scalar) -> "CoefVec":
        return self.map_blocks(lambda _: scalar)

    __rmul__ = __mul__

    def plancherel_norm(self) -> float:
        vol = self.spec.volume
        total = 0.0
        for label, block in self.entries.items():
            total += vol / irrep_dim(self.spec, label) * float(np.sum(np.abs(block) ** 2))
        return math.sqrt(total)

    def inner(self, other: "CoefVec") -> complex:
        """<f, g> = integral of conj(f) g over K, linear in the second slot."""
        vol = self.spec.volume
        total = 0.0 + 0.0j
        for label, block in self.entries.items():
            ob = other.entries.get(label)
            if ob is not None:
                total += vol / irrep_dim(self.spec, label) * np.sum(block.conj() * ob)
        return total

    def eval_k(self, x) -> complex:
        """Evaluate f at a point of K (torus angles / 2x2 unitary)."""
        total = 0.0 + 0.0j
        for label, block in self.entries.items():
            total += np.trace(rep_matrix(self.spec, label, x) @ block)
        return complex(total)

    def eval_kc(self, p: PointKC) -> complex:
        """Evaluate the analytic continuation at a polar point of K_C."""
        g = polar_compose(self.spec, p)
        total = 0.0 + 0.0j
        for label, block in self.entries.items():
            total += np.trace(rep_matrix(self.spec, label, g) @ block)
        return complex(total)

    def eval_k_batch(self, xs: np.ndarray) -> np.ndarray:
        out = None
        for label, block in self.entries.items():
            mats = rep_matrix_batch(self.spec, label, xs)
            vals = np.einsum("nij,ji->n", mats, block)
            out = vals if out is None else out + vals
        if out is None:
            n = xs.shape[0] if hasattr(xs, "shape") else len(xs)
            return np.zeros(n, dtype=complex)
        return out


def basis_entry(spec: GroupSpec, label, i: int = 0, j: int = 0) -> CoefVec:
    """The matrix entry pi_{ij}: coefficient block E_{ji} on one label."""
    d = irrep_dim(spec, label)
    block = np.zeros((d, d), dtype=complex)
    block[j, i] = 1.0
    return CoefVec(spec, {label: block})


def from_torus_samples(spec: GroupSpec, values: np.ndarray, cutoff: int) -> CoefVec:
    """Ingest a torus function from a uniform grid by exact trig quadrature.

    values is sampled on the uniform tensor grid with N >= 2*cutoff+1 points
    per axis; frequencies with max|n_i| <= cutoff are recovered exactly for
    band-limited input.
    """
    if spec.kind != "torus":
        raise ValueError("sampling ingestion is torus-only")
    values = np.asarray(values, dtype=complex)
    if values.ndim != spec.rank:
        raise ValueError("sample grid rank mismatch")
    if min(values.shape) < 2 * cutoff + 1:
        raise ValueError("grid too coarse for the requested cutoff")
    spectrum = np.fft.fftn(values) / values.size
    entries = {}
    from .groups import enumerate_irreps

    for label in enumerate_irreps(spec, cutoff):
        idx = tuple(n % values.shape[axis] for axis, n in enumerate(label))
        coef = spectrum[idx]
        if abs(coef) > 1e-14:
            entries[label] = np.array([[coef]])
    return CoefVec(spec, entries)
