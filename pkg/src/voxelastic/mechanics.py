"""Per-particle kinematics and the hyperelastic constitutive law.

The material is St. Venant-Kirchhoff: second Piola-Kirchhoff stress
S = lambda tr(E) I + 2 mu E with E the Green-Lagrange strain.  Internal
forces use the first Piola-Kirchhoff stress P = F S plus a viscous term
driven by the deviatoric symmetric velocity gradient, which damps the
transient oscillations of the explicit integrator.

All functions accept stacked arrays of shape (..., 3, 3) so a whole
structure evaluates in one call.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvertedElement
from .kernel import adjugate_3x3, det_3x3

_EYE = np.eye(3)


@dataclass(frozen=True)
class MaterialParams:
    """Elastic constants (Lame form derived from E, nu) plus damping.

    ``viscous_literal_f_inv`` switches the viscous pull-back from the
    Piola transform (d_bar F^-T, the default) to the plain d_bar F^-1
    variant; the two agree to first order near the rest state.
    """

    youngs_modulus: float = 1e9
    poisson_ratio: float = 0.4
    eta: float = 0.0
    viscous_literal_f_inv: bool = False

    def __post_init__(self):
        if self.youngs_modulus <= 0:
            raise ValueError("Young's modulus must be positive")
        if not -1.0 < self.poisson_ratio < 0.5:
            raise ValueError("Poisson ratio must lie strictly in (-1, 0.5)")
        if self.eta < 0:
            raise ValueError("damping must be non-negative")

    @property
    def lam(self) -> float:
        e, nu = self.youngs_modulus, self.poisson_ratio
        return e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))

    @property
    def mu(self) -> float:
        return self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))

    def wave_speed(self, density: float) -> float:
        """Longitudinal stiffness estimate used for the stable-step bound."""
        return float(np.sqrt(self.youngs_modulus / density))


def deformation_gradient(current_offsets, corrected_grads) -> np.ndarray:
    """F = sum_j r_ij (x) corrected grad W(R_ij) for one particle.

    ``current_offsets`` are x_j - x_i; the corrected gradients must come
    from the same rest offsets (total-Lagrangian pairing).
    """
    r = np.asarray(current_offsets, dtype=float).reshape(-1, 3)
    g = np.asarray(corrected_grads, dtype=float).reshape(-1, 3)
    return np.einsum("ka,kb->ab", r, g)


def green_lagrange(F: np.ndarray) -> np.ndarray:
    """E = (F^T F - I) / 2, stacked."""
    return 0.5 * (np.einsum("...ba,...bc->...ac", F, F) - _EYE)


def second_pk(E_strain: np.ndarray, mat: MaterialParams) -> np.ndarray:
    """S = lambda tr(E) I + 2 mu E, stacked."""
    E_strain = np.asarray(E_strain, dtype=float)
    tr = np.trace(E_strain, axis1=-2, axis2=-1)
    return mat.lam * tr[..., None, None] * _EYE + 2.0 * mat.mu * E_strain


def first_pk(
    F: np.ndarray,
    F_dot: np.ndarray,
    S: np.ndarray,
    mat: MaterialParams,
    J: Optional[np.ndarray] = None,
    F_inv: Optional[np.ndarray] = None,
) -> np.ndarray:
    """P = F S plus the viscous contribution, stacked.

    Raises InvertedElement when any det F <= 0; a non-positive volume
    ratio means the time step inverted a particle neighborhood.  ``J``
    and ``F_inv`` may be supplied when the caller already computed them.
    """
    F = np.asarray(F, dtype=float)
    S = np.asarray(S, dtype=float)
    if J is None:
        J = det_3x3(F)
    if np.any(J <= 0.0):
        bad = int(np.argmax(np.atleast_1d(J <= 0.0)))
        raise InvertedElement(f"non-positive volume ratio det F = {np.atleast_1d(J)[bad]:g}")
    P = np.einsum("...ab,...bc->...ac", F, S)
    if mat.eta > 0.0:
        if F_inv is None:
            F_inv = adjugate_3x3(F) / J[..., None, None]
        l = np.einsum("...ab,...bc->...ac", np.asarray(F_dot, dtype=float), F_inv)
        d = 0.5 * (l + np.swapaxes(l, -2, -1))
        tr = np.trace(d, axis1=-2, axis2=-1)
        d_bar = d - (tr / 3.0)[..., None, None] * _EYE
        pullback = F_inv if mat.viscous_literal_f_inv else np.swapaxes(F_inv, -2, -1)
        P = P + 2.0 * (J * mat.eta)[..., None, None] * np.einsum(
            "...ab,...bc->...ac", d_bar, pullback
        )
    return P


def cauchy_stress(F: np.ndarray, S: np.ndarray) -> np.ndarray:
    """sigma = J^-1 F S F^T, stacked."""
    F = np.asarray(F, dtype=float)
    J = det_3x3(F)
    if np.any(J <= 0.0):
        raise InvertedElement("non-positive volume ratio in Cauchy push-forward")
    FS = np.einsum("...ab,...bc->...ac", F, np.asarray(S, dtype=float))
    return np.einsum("...ab,...cb->...ac", FS, F) / J[..., None, None]


def von_mises(F: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Deviatoric magnitude sqrt(3/2 dev(sigma):dev(sigma)) of the Cauchy stress."""
    sigma = cauchy_stress(F, S)
    tr = np.trace(sigma, axis1=-2, axis2=-1)
    dev = sigma - (tr / 3.0)[..., None, None] * _EYE
    return np.sqrt(1.5 * np.einsum("...ab,...ab->...", dev, dev))
