"""Interpolation kernel, its analytic gradient, and the gradient correction.

The weight function is W(r) = 15/(pi h^6) (h - r)^3 for r < h and zero
outside the support.  Raw kernel gradients do not reproduce constant
gradients on an irregular neighborhood, so each particle carries a 3x3
correction tensor A built from its rest-configuration offsets; applying
A^-T to the raw gradient restores exact first-order consistency (the sum
of rest offsets tensored with corrected gradients is the identity).

Everything here is evaluated in the rest configuration and cached for the
lifetime of a simulation; only particle positions change during a run.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateOffset, SingularCorrection

# |det A| below this times (max |A entry|)^3 counts as singular.
SINGULARITY_RTOL = 1e-12


@dataclass(frozen=True)
class KernelParams:
    """Support radius of the interpolation kernel, in meters.

    Must exceed the 1 m lattice spacing, otherwise no particle has
    neighbors and every correction tensor is singular.
    """

    h: float = 2.0

    def __post_init__(self):
        if not self.h > 1.0:
            raise ValueError(f"kernel support h must exceed the 1 m lattice spacing, got {self.h}")

    @property
    def normalization(self) -> float:
        return 15.0 / (np.pi * self.h**6)


def weight(r, params: KernelParams):
    """Kernel weight at distance ``r`` (scalar or array), zero for r >= h."""
    r = np.asarray(r, dtype=float)
    w = params.normalization * np.clip(params.h - r, 0.0, None) ** 3
    if w.ndim == 0:
        return float(w)
    return w


def weight_gradient(R, params: KernelParams):
    """Analytic gradient of the weight at offset(s) ``R`` with shape (..., 3).

    dW/dr = -3 * 15/(pi h^6) (h - r)^2, pointing along R/|R|.  Offsets at or
    beyond the support radius get a zero vector.  A zero offset has no
    direction and raises DegenerateOffset.
    """
    R = np.asarray(R, dtype=float)
    r = np.linalg.norm(R, axis=-1)
    if np.any(r == 0.0):
        raise DegenerateOffset("kernel gradient requested at zero offset")
    inside = r < params.h
    coeff = np.where(inside, -3.0 * params.normalization * (params.h - r) ** 2 / r, 0.0)
    return coeff[..., None] * R


@dataclass
class CorrectionTensor:
    """Per-particle gradient correction: A and its cached inverse."""

    A: np.ndarray
    A_inv: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        if self.A.shape != (3, 3):
            raise ValueError("correction tensor must be 3x3")
        if self.A_inv is None:
            self.A_inv = invert_3x3(self.A)


def det_3x3(M: np.ndarray) -> np.ndarray:
    """Determinant of stacked 3x3 matrices, shape (..., 3, 3) -> (...)."""
    return (
        M[..., 0, 0] * (M[..., 1, 1] * M[..., 2, 2] - M[..., 1, 2] * M[..., 2, 1])
        - M[..., 0, 1] * (M[..., 1, 0] * M[..., 2, 2] - M[..., 1, 2] * M[..., 2, 0])
        + M[..., 0, 2] * (M[..., 1, 0] * M[..., 2, 1] - M[..., 1, 1] * M[..., 2, 0])
    )


def adjugate_3x3(M: np.ndarray) -> np.ndarray:
    """Adjugate (transposed cofactor matrix) of stacked 3x3 matrices."""
    adj = np.empty_like(M)
    adj[..., 0, 0] = M[..., 1, 1] * M[..., 2, 2] - M[..., 1, 2] * M[..., 2, 1]
    adj[..., 0, 1] = M[..., 0, 2] * M[..., 2, 1] - M[..., 0, 1] * M[..., 2, 2]
    adj[..., 0, 2] = M[..., 0, 1] * M[..., 1, 2] - M[..., 0, 2] * M[..., 1, 1]
    adj[..., 1, 0] = M[..., 1, 2] * M[..., 2, 0] - M[..., 1, 0] * M[..., 2, 2]
    adj[..., 1, 1] = M[..., 0, 0] * M[..., 2, 2] - M[..., 0, 2] * M[..., 2, 0]
    adj[..., 1, 2] = M[..., 0, 2] * M[..., 1, 0] - M[..., 0, 0] * M[..., 1, 2]
    adj[..., 2, 0] = M[..., 1, 0] * M[..., 2, 1] - M[..., 1, 1] * M[..., 2, 0]
    adj[..., 2, 1] = M[..., 0, 1] * M[..., 2, 0] - M[..., 0, 0] * M[..., 2, 1]
    adj[..., 2, 2] = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    return adj


def is_singular(A: np.ndarray) -> np.ndarray:
    """Singularity test relative to the matrix scale, stacked-capable."""
    det = np.abs(det_3x3(A))
    scale = np.max(np.abs(A), axis=(-2, -1))
    return (scale == 0.0) | (det < SINGULARITY_RTOL * scale**3)


def invert_3x3(A: np.ndarray) -> np.ndarray:
    """Closed-form inverse via the adjugate; raises SingularCorrection."""
    A = np.asarray(A, dtype=float)
    if np.any(is_singular(A)):
        raise SingularCorrection("correction tensor is singular (under-supported particle)")
    return adjugate_3x3(A) / det_3x3(A)[..., None, None]


def correction_tensor(offsets, params: KernelParams) -> CorrectionTensor:
    """Build A = sum_j R_ij (x) grad W(R_ij) from rest offsets and invert it.

    Raises SingularCorrection when the offsets do not span 3D (for
    example, all neighbors collinear or coplanar).
    """
    offsets = np.asarray(offsets, dtype=float).reshape(-1, 3)
    grads = weight_gradient(offsets, params)
    A = np.einsum("ka,kb->ab", offsets, grads)
    return CorrectionTensor(A=A)


def corrected_gradient(R, corr: CorrectionTensor, params: KernelParams):
    """Corrected kernel gradient A^-T grad W(R), shape (..., 3)."""
    g = weight_gradient(R, params)
    return g @ corr.A_inv  # row-vector form of A^-T g


def batch_corrections(rest_positions: np.ndarray, neighbor_offsets, params: KernelParams):
    """Correction tensors for every particle of a structure at once.

    ``neighbor_offsets`` maps particle index -> (n_i, 3) rest offsets.
    Returns (A, A_inv, singular) where singular flags particles whose A
    could not be inverted; their A_inv rows are zero so downstream sums
    silently drop their contributions.
    """
    n = len(rest_positions)
    A = np.zeros((n, 3, 3))
    for i, offsets in enumerate(neighbor_offsets):
        if len(offsets) == 0:
            continue
        grads = weight_gradient(offsets, params)
        A[i] = np.einsum("ka,kb->ab", offsets, grads)
    singular = is_singular(A)
    A_inv = np.zeros_like(A)
    ok = ~singular
    if np.any(ok):
        A_inv[ok] = adjugate_3x3(A[ok]) / det_3x3(A[ok])[..., None, None]
    return A, A_inv, singular
