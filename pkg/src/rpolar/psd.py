"""Nearest symmetric positive-semidefinite matrix in the Frobenius norm."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mat3 import IDENTITY, as_mat3, check_gl_plus, frob_norm, sym, sym_eigen, transpose


@dataclass(frozen=True)
class PsdProjection:
    projection: np.ndarray
    residual: float


def project_psd(X) -> PsdProjection:
    """Best approximation of ``X`` in the closed cone of PSD matrices.

    Uses ``pi(X) = (sym(X) + Z) / 2`` with ``Z = sqrt(sym(X)^2)``, where
    ``Z`` is formed from the absolute eigenvalues of ``sym(X)`` in its own
    eigenframe.  This equals clamping the negative eigenvalues to zero.
    """
    X = as_mat3(X)
    S = sym(X)
    lam, V = sym_eigen(S)
    Z = np.einsum("...ik,...k,...jk->...ij", V, np.abs(lam), V)
    P = sym(0.5 * (S + Z))
    # eigenvalues within rounding of zero come out as tiny negatives otherwise
    lam_p, Vp = sym_eigen(P)
    P = sym(np.einsum("...ik,...k,...jk->...ij", Vp, np.maximum(lam_p, 0.0), Vp))
    # a semidefinite sym(X) is its own projection; return it untouched
    keep = np.all(lam >= 0.0, axis=-1)[..., None, None]
    P = np.where(keep, S, P)
    return PsdProjection(projection=P, residual=float(frob_norm(X - P)))


def is_definiteness_guaranteed(X) -> bool:
    """Sufficient test ``||X - 1|| < 1`` for ``sym(X)`` to be positive definite."""
    X = as_mat3(X)
    return bool(frob_norm(X - IDENTITY) < 1.0)


def approx_plastic_stretch(R, F) -> PsdProjection:
    """PSD best approximation of the non-symmetric plastic stretch ``R^T F``."""
    R = as_mat3(R)
    F = as_mat3(F)
    check_gl_plus(F)
    return project_psd(transpose(R) @ F)
