"""Weighted Cosserat shear-stretch energy and the parameter reduction."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .mat3 import IDENTITY, as_mat3, check_gl_plus, polar_batch, singular_values, transpose

BOUNDARY_RTOL = 1e-12


class ClassicalRangeError(ValueError):
    """The weights satisfy ``mu_c >= mu``; the polar factor is the unique minimizer."""


class Regime(enum.Enum):
    CLASSICAL = "classical"
    NON_CLASSICAL = "nonclassical"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class Weights:
    """Shear modulus ``mu > 0`` and Cosserat couple modulus ``mu_c >= 0``."""

    mu: float = 1.0
    mu_c: float = 0.0

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if not self.mu_c >= 0:
            raise ValueError(f"mu_c must be >= 0, got {self.mu_c}")

    @property
    def non_classical(self) -> bool:
        return self.mu > self.mu_c

    def reduction(self) -> "ReductionData":
        if not self.non_classical:
            raise ClassicalRangeError(
                "classical parameter range: reduction undefined (mu_c >= mu, use polar_decompose)"
            )
        lam = self.mu / (self.mu - self.mu_c)
        return ReductionData(lam=lam, rho=2.0 * lam)


@dataclass(frozen=True)
class ReductionData:
    """Induced scaling parameter ``lam = mu/(mu-mu_c)`` and singular radius ``rho = 2 lam``."""

    lam: float
    rho: float


def energy_batch(R: np.ndarray, F: np.ndarray, mu: float, mu_c: float) -> np.ndarray:
    """``mu |sym(R^T F - 1)|^2 + mu_c |skew(R^T F - 1)|^2`` over stacks of ``R``."""
    A = transpose(R) @ F - IDENTITY
    nrm = np.einsum("...ij,...ij->...", A, A)
    tr_aa = np.einsum("...ij,...ji->...", A, A)
    return 0.5 * mu * (nrm + tr_aa) + 0.5 * mu_c * (nrm - tr_aa)


def energy(R, F, w: Weights = Weights()) -> float:
    """Cosserat shear-stretch energy ``W_{mu,mu_c}(R; F)``."""
    R = as_mat3(R)
    F = as_mat3(F)
    check_gl_plus(F)
    return float(energy_batch(R, F, w.mu, w.mu_c))


def rescale(F, w: Weights) -> np.ndarray:
    """Rescaled deformation gradient ``F / lam`` for weights in the non-classical range."""
    red = w.reduction()
    return as_mat3(F) / red.lam


def mmp(F) -> tuple[float, float]:
    """Maximal mean planar stretch and strain ``((s1 + s2)/2, (s1 + s2)/2 - 1)``."""
    sigma = singular_values(F)
    u = 0.5 * float(sigma[0] + sigma[1])
    return u, u - 1.0


def classify_sum(planar_sum, rho: float) -> np.ndarray:
    """Regime tags (as ``Regime`` values) from ``sigma_1 + sigma_2`` against the singular radius."""
    planar_sum = np.asarray(planar_sum, dtype=float)
    tol = BOUNDARY_RTOL * rho
    out = np.full(planar_sum.shape, Regime.BOUNDARY.value, dtype="<U12")
    out[planar_sum < rho - tol] = Regime.CLASSICAL.value
    out[planar_sum > rho + tol] = Regime.NON_CLASSICAL.value
    return out


def classify(F, w: Weights = Weights()) -> Regime:
    """Classical / non-classical domain membership of ``F`` for weights ``w``.

    ``Boundary`` is reported when ``sigma_1 + sigma_2`` is within
    ``1e-12 * rho`` of the singular radius.
    """
    red = w.reduction()
    sigma = singular_values(F)
    return Regime(classify_sum(sigma[0] + sigma[1], red.rho).item())


def polar_energy(F, w: Weights = Weights()) -> float:
    F = as_mat3(F)
    R, _ = polar_batch(F)
    return float(energy_batch(R, F, w.mu, w.mu_c))
