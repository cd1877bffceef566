"""Planar spin: the signed angle of the rotation about ``n`` closest to ``L``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mat3 import transpose


@dataclass(frozen=True)
class OrientedPlane:
    normal: np.ndarray
    adapted_frame: np.ndarray

    @classmethod
    def from_normal(cls, n) -> "OrientedPlane":
        n = np.asarray(n, dtype=float)
        return cls(normal=n, adapted_frame=adapted_frame(n))


@dataclass(frozen=True)
class Spin:
    angle: float
    planar_block: np.ndarray
    degenerate: bool


def adapted_frame(n) -> np.ndarray:
    """A rotation ``Q`` with ``Q e3 = n``.

    ``q1`` is the canonical axis least aligned with ``n`` (first on ties),
    orthogonalised against ``n``; ``q2 = n x q1``.
    """
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise ValueError("normal must be a unit 3-vector")
    a = np.zeros(3)
    a[int(np.argmin(np.abs(n)))] = 1.0
    q1 = a - np.dot(a, n) * n
    q1 /= np.linalg.norm(q1)
    q2 = np.cross(n, q1)
    return np.column_stack([q1, q2, n])


def planar_block(L, plane: OrientedPlane) -> np.ndarray:
    """Upper-left 2x2 block of ``Q^T L Q`` (works on stacks of ``L``)."""
    Q = plane.adapted_frame
    M = Q.T @ np.asarray(L, dtype=float) @ Q
    return M[..., :2, :2]


def polar2(L2) -> np.ndarray:
    """Closed-form rotation factor of a 2x2 matrix with positive determinant.

    ``(1/sqrt(|L|^2 + 2 det L)) [[a + d, b - c], [c - b, a + d]]`` for
    ``L = [[a, b], [c, d]]``.  Inputs with ``det <= 0`` give ``nan``.
    """
    L2 = np.asarray(L2, dtype=float)
    a, b = L2[..., 0, 0], L2[..., 0, 1]
    c, d = L2[..., 1, 0], L2[..., 1, 1]
    det = a * d - b * c
    scale = np.sqrt(np.where(det > 0, a * a + b * b + c * c + d * d + 2.0 * det, np.nan))
    tr = (a + d) / scale
    sk = (b - c) / scale
    return np.stack([np.stack([tr, sk], -1), np.stack([-sk, tr], -1)], -2)


def planar_angle(R2) -> np.ndarray:
    """Signed angle in ``(-pi, pi]`` of a planar rotation."""
    R2 = np.asarray(R2, dtype=float)
    return np.arctan2(R2[..., 1, 0], R2[..., 0, 0])


def planar_spin_batch(L: np.ndarray, plane: OrientedPlane) -> tuple[np.ndarray, np.ndarray]:
    """Spin angles and degeneracy flags for a stack of matrices."""
    block = planar_block(L, plane)
    det = block[..., 0, 0] * block[..., 1, 1] - block[..., 0, 1] * block[..., 1, 0]
    degenerate = ~(det > 0)
    angle = planar_angle(polar2(block))
    return np.where(degenerate, np.nan, angle), degenerate


def planar_spin(L, plane: OrientedPlane) -> Spin:
    """Planar spin ``alpha_n(L)`` about the plane normal.

    Degenerate blocks (``det <= 0``) are reported through the flag and an
    angle of ``nan``.
    """
    L = np.asarray(L, dtype=float)
    angle, degenerate = planar_spin_batch(L, plane)
    return Spin(angle=float(angle), planar_block=planar_block(L, plane), degenerate=bool(degenerate))


def misorientation(Ra, Rb) -> np.ndarray:
    """Relative rotation ``Rb Ra^T``."""
    return np.asarray(Rb, dtype=float) @ transpose(np.asarray(Ra, dtype=float))
