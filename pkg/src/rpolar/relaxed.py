"""Closed-form energy-minimizing Cosserat rotations ``rpolar^+-`` of ``F``.

For weights in the non-classical range ``mu > mu_c >= 0`` the two optimal
rotations are obtained from the polar factor by a rotation in the plane of
maximal stretch (about the eigenvector ``q3`` of the smallest singular value)
through the angle ``arccos(rho / (sigma_1 + sigma_2))`` once that ratio drops
below one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import ClassicalRangeError, Regime, Weights, classify_sum
from .mat3 import (
    DegenerateSpectrumError,
    SpectralFrame,
    _right_cauchy_green_eigen,
    as_mat3,
    check_gl_plus,
    orient_eigenframe_batch,
    spectral_gaps_degenerate,
    transpose,
)


def optimal_angle(sigma1: float, sigma2: float, w: Weights = Weights()) -> float:
    """Magnitude of the optimal relative rotation angle.

    Zero while ``sigma1 + sigma2 <= rho``, ``arccos(rho / (sigma1 + sigma2))``
    beyond.  For ``(mu, mu_c) = (1, 0)`` this is ``arccos(2 / (s1 + s2))``.
    """
    if not sigma1 >= sigma2 > 0:
        raise ValueError("need sigma1 >= sigma2 > 0")
    return float(optimal_angle_batch(np.asarray(sigma1 + sigma2, dtype=float), w.reduction().rho))


def optimal_angle_batch(planar_sum: np.ndarray, rho: float) -> np.ndarray:
    ratio = rho / np.asarray(planar_sum, dtype=float)
    return np.where(ratio < 1.0, np.arccos(np.minimum(ratio, 1.0)), 0.0)


def relative_rotation(beta) -> np.ndarray:
    """Rotation about ``e3`` by ``beta`` (broadcast over arrays of angles)."""
    beta = np.asarray(beta, dtype=float)
    c, s = np.cos(beta), np.sin(beta)
    out = np.zeros(beta.shape + (3, 3))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1.0
    return out


def orient_eigenframe(raw_vectors, eigenvalues) -> np.ndarray:
    """Order eigenvector columns by descending eigenvalue and fix their signs.

    Each column is made to have a positive largest-magnitude component
    (first on ties); if the result is left-handed the third column is
    negated, which mirrors the usual ``Q = (v1, v2, -v3)`` fix.
    """
    V = np.asarray(raw_vectors, dtype=float)
    if np.max(np.abs(V.T @ V - np.eye(3))) > 1e-9:
        raise ValueError("eigenvectors must be orthonormal")
    order = np.argsort(-np.asarray(eigenvalues, dtype=float), kind="stable")
    return orient_eigenframe_batch(V[:, order])


@dataclass(frozen=True)
class RelaxedPolarResult:
    plus: np.ndarray
    minus: np.ndarray
    beta_hat: float
    regime: Regime
    frame: SpectralFrame
    polar: np.ndarray


@dataclass(frozen=True)
class RelaxedBatch:
    """Array form of :class:`RelaxedPolarResult` for stacks of ``F``."""

    polar: np.ndarray
    stretch: np.ndarray
    sigma: np.ndarray
    frame: np.ndarray
    beta_hat: np.ndarray
    regime: np.ndarray
    degenerate: np.ndarray
    plus: np.ndarray
    minus: np.ndarray


def relaxed_polar_batch(F: np.ndarray, w: Weights = Weights()) -> RelaxedBatch:
    """Vectorised relaxed polar factors; degenerate spectra are flagged, not raised.

    Where the regime is not non-classical both branches equal the polar
    factor, which does not depend on the eigenframe, so such points are
    well defined even with repeated singular values.
    """
    F = as_mat3(F)
    red = w.reduction()
    check_gl_plus(F)
    sigma, V = _right_cauchy_green_eigen(F)
    Q = orient_eigenframe_batch(V)
    U = np.einsum("...ik,...k,...jk->...ij", Q, sigma, Q)
    U_inv = np.einsum("...ik,...k,...jk->...ij", Q, 1.0 / sigma, Q)
    polar = F @ U_inv
    planar = sigma[..., 0] + sigma[..., 1]
    regime = classify_sum(planar, red.rho)
    beta = optimal_angle_batch(planar, red.rho)
    Qt = transpose(Q)
    plus = polar @ Q @ relative_rotation(-beta) @ Qt
    minus = polar @ Q @ relative_rotation(beta) @ Qt
    flat = beta == 0.0
    plus = np.where(flat[..., None, None], polar, plus)
    minus = np.where(flat[..., None, None], polar, minus)
    return RelaxedBatch(
        polar=polar,
        stretch=0.5 * (U + transpose(U)),
        sigma=sigma,
        frame=Q,
        beta_hat=beta,
        regime=regime,
        degenerate=spectral_gaps_degenerate(sigma),
        plus=plus,
        minus=minus,
    )


def relaxed_polar_pair(F, w: Weights = Weights()) -> RelaxedPolarResult:
    """Both energy-minimizing rotations ``rpolar^+-_{mu,mu_c}(F)``.

    ``plus = polar(F) Q Rhat(-beta) Q^T`` and ``minus = polar(F) Q Rhat(beta) Q^T``
    with ``Q`` the oriented principal frame of ``U``.

    Raises
    ------
    ClassicalRangeError
        For ``mu_c >= mu``; there the polar factor is the unique minimizer.
    DegenerateSpectrumError
        If two singular values are closer than ``1e-9 sigma_1``.
    """
    F = as_mat3(F)
    if F.ndim != 2:
        raise ValueError("relaxed_polar_pair takes a single 3x3 matrix")
    if not w.non_classical:
        raise ClassicalRangeError(
            "classical parameter range (mu_c >= mu): the polar factor is the unique "
            "minimizer, use polar_decompose"
        )
    b = relaxed_polar_batch(F, w)
    if b.degenerate:
        raise DegenerateSpectrumError(f"spectrum not simple: sigma = {b.sigma}")
    return RelaxedPolarResult(
        plus=b.plus,
        minus=b.minus,
        beta_hat=float(b.beta_hat),
        regime=Regime(b.regime.item()),
        frame=SpectralFrame(sigma=b.sigma, frame=b.frame, degenerate=False),
        polar=b.polar,
    )


@dataclass(frozen=True)
class StretchPlane:
    q1: np.ndarray
    q2: np.ndarray
    q3: np.ndarray
    deformed_q1: np.ndarray
    deformed_q2: np.ndarray


def stretch_plane(F) -> StretchPlane:
    """Plane of maximal stretch ``span{q1, q2}`` and its image under ``polar(F)``."""
    F = as_mat3(F)
    b = relaxed_polar_batch(F[None], Weights())
    if b.degenerate[0]:
        raise DegenerateSpectrumError(f"spectrum not simple: sigma = {b.sigma[0]}")
    Q = b.frame[0]
    R = b.polar[0]
    return StretchPlane(
        q1=Q[:, 0], q2=Q[:, 1], q3=Q[:, 2],
        deformed_q1=R @ Q[:, 0], deformed_q2=R @ Q[:, 1],
    )
