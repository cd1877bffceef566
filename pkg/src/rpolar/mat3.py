"""Fixed-size 3x3 linear algebra used throughout the package.

All matrices are plain ``numpy`` arrays.  Most routines accept a single
``(3, 3)`` matrix or a stack ``(..., 3, 3)``; the stacked form is what the
field sweeps use, the single form is what the public dataclass wrappers
return.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

IDENTITY = np.eye(3)

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 32
SQRT_FLOOR = 1e-14
DEGENERACY_GAP = 1e-9

_PAIRS = ((0, 1), (0, 2), (1, 2))


class NotInGLPlusError(ValueError):
    """Raised when a matrix expected in GL+(3) has non-positive determinant."""


class NotSymmetricError(ValueError):
    pass


class DegenerateSpectrumError(ValueError):
    pass


def as_mat3(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.shape[-2:] != (3, 3):
        raise ValueError(f"expected (..., 3, 3) array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix entries must be finite")
    return X


def transpose(X: np.ndarray) -> np.ndarray:
    return np.swapaxes(X, -1, -2)


def sym(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X + transpose(X))


def skew(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X - transpose(X))


def sym_skew_split(X) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(sym(X), skew(X))``."""
    X = np.asarray(X, dtype=float)
    return sym(X), skew(X)


def frob_inner(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Frobenius inner product ``tr(X^T Y)``, broadcast over leading axes."""
    return np.einsum("...ij,...ij->...", X, Y)


def frob_norm_sq(X: np.ndarray) -> np.ndarray:
    return frob_inner(X, X)


def frob_norm(X: np.ndarray) -> np.ndarray:
    return np.sqrt(frob_norm_sq(X))


def check_gl_plus(F: np.ndarray) -> np.ndarray:
    det = np.linalg.det(F)
    if np.any(det <= 0):
        raise NotInGLPlusError("not in GL+(3): det F <= 0")
    return det


def _jacobi_batch(S: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi on a stack of symmetric 3x3 matrices.

    Returns the unsorted diagonal and the accumulated rotation ``V`` with
    ``V^T S V`` diagonal.
    """
    A = np.array(S, dtype=float, copy=True)
    n = A.shape[0]
    V = np.broadcast_to(IDENTITY, A.shape).copy()
    thresh = tol * np.maximum(frob_norm(A), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * (A[:, 0, 1] ** 2 + A[:, 0, 2] ** 2 + A[:, 1, 2] ** 2))
        # converged matrices are frozen so results do not depend on batch mates
        live = off > thresh
        if not np.any(live):
            break
        for p, q in _PAIRS:
            apq = A[:, p, q]
            active = live & (np.abs(apq) > 0.5 * thresh)
            if not np.any(active):
                continue
            safe = np.where(active, apq, 1.0)
            tau = (A[:, q, q] - A[:, p, p]) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            J = np.broadcast_to(IDENTITY, (n, 3, 3)).copy()
            J[:, p, p] = c
            J[:, q, q] = c
            J[:, p, q] = s
            J[:, q, p] = -s
            A = np.einsum("nji,njk,nkl->nil", J, A, J)
            # annihilated entry is exactly zero in exact arithmetic
            A[active, p, q] = 0.0
            A[active, q, p] = 0.0
            V = np.einsum("nij,njk->nik", V, J)
    return np.diagonal(A, axis1=1, axis2=2).copy(), V


def sym_eigen(S) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric 3x3 matrix (or a stack of them).

    Returns
    -------
    eigenvalues : ndarray, shape (..., 3)
        Sorted in descending order.
    eigenvectors : ndarray, shape (..., 3, 3)
        Orthonormal columns matching ``eigenvalues``.  The orientation is
        whatever the Jacobi sweep produced; see
        :func:`rpolar.relaxed.orient_eigenframe` for a canonical choice.

    Raises
    ------
    NotSymmetricError
        If ``||S - S^T|| > 1e-9 ||S||``.
    """
    S = as_mat3(S)
    if np.any(frob_norm(S - transpose(S)) > 1e-9 * frob_norm(S)):
        raise NotSymmetricError("sym_eigen requires a symmetric matrix")
    lead = S.shape[:-2]
    flat = sym(S).reshape(-1, 3, 3)
    lam, V = _jacobi_batch(flat)
    order = np.argsort(-lam, axis=1, kind="stable")
    lam = np.take_along_axis(lam, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    return lam.reshape(lead + (3,)), V.reshape(lead + (3, 3))


@dataclass(frozen=True)
class SpectralFrame:
    """Singular values of ``F`` (descending) and an oriented eigenframe of ``U``."""

    sigma: np.ndarray
    frame: np.ndarray
    degenerate: bool

    @property
    def diag(self) -> np.ndarray:
        return np.diag(self.sigma)


@dataclass(frozen=True)
class PolarParts:
    rotation: np.ndarray
    stretch: np.ndarray


def _right_cauchy_green_eigen(F: np.ndarray):
    C = np.einsum("...ki,...kj->...ij", F, F)
    lam, V = sym_eigen(C)
    if np.any(lam <= SQRT_FLOOR):
        raise NotInGLPlusError("F^T F is numerically singular")
    return np.sqrt(lam), V


def singular_values(F) -> np.ndarray:
    """Singular values in descending order, as square roots of eig(F^T F)."""
    F = as_mat3(F)
    check_gl_plus(F)
    sigma, _ = _right_cauchy_green_eigen(F)
    return sigma


def spectral_gaps_degenerate(sigma: np.ndarray, gap: float = DEGENERACY_GAP) -> np.ndarray:
    """True where two neighbouring singular values are closer than ``gap * sigma_1``."""
    d1 = sigma[..., 0] - sigma[..., 1]
    d2 = sigma[..., 1] - sigma[..., 2]
    return (d1 < gap * sigma[..., 0]) | (d2 < gap * sigma[..., 0])


def orient_eigenframe_batch(V: np.ndarray) -> np.ndarray:
    """Deterministic sign policy for eigenvector columns (already sorted).

    Each column is flipped so that its largest-magnitude component is
    positive (first one on ties); a left-handed result then has its third
    column reflected.
    """
    V = np.array(V, dtype=float, copy=True)
    idx = np.argmax(np.abs(V), axis=-2)[..., None, :]
    lead = np.take_along_axis(V, idx, axis=-2)
    V = V * np.where(lead < 0, -1.0, 1.0)
    det = np.linalg.det(V)
    V[..., :, 2] *= np.where(det < 0, -1.0, 1.0)[..., None]
    return V


def spectral_frame_batch(F: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stacked variant of :func:`spectral_frame`: ``(sigma, frame, degenerate)``."""
    F = as_mat3(F)
    check_gl_plus(F)
    sigma, V = _right_cauchy_green_eigen(F)
    Q = orient_eigenframe_batch(V)
    return sigma, Q, spectral_gaps_degenerate(sigma)


def spectral_frame(F) -> SpectralFrame:
    """Singular values and oriented principal frame of ``U = sqrt(F^T F)``.

    The frame columns follow the descending singular values, and the sign
    policy of :func:`rpolar.relaxed.orient_eigenframe` gives ``det = +1``.
    Near-degenerate spectra are flagged, not rejected.
    """
    F = as_mat3(F)
    if F.ndim != 2:
        raise ValueError("spectral_frame takes a single 3x3 matrix")
    sigma, Q, deg = spectral_frame_batch(F)
    return SpectralFrame(sigma=sigma, frame=Q, degenerate=bool(deg))


def polar_batch(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Stacked right polar decomposition, returns ``(R, U)``."""
    F = as_mat3(F)
    check_gl_plus(F)
    sigma, V = _right_cauchy_green_eigen(F)
    U = np.einsum("...ik,...k,...jk->...ij", V, sigma, V)
    U_inv = np.einsum("...ik,...k,...jk->...ij", V, 1.0 / sigma, V)
    R = F @ U_inv
    return R, sym(U)


def polar_decompose(F) -> PolarParts:
    """Right polar decomposition ``F = R U`` with ``U = sqrt(F^T F)``.

    ``U`` is synthesised spectrally from the eigenpairs of ``F^T F``; the
    rotation is ``F U^{-1}``.
    """
    F = as_mat3(F)
    R, U = polar_batch(F)
    return PolarParts(rotation=R, stretch=U)


def is_rotation(R, tol: float = 1e-12) -> bool:
    R = np.asarray(R, dtype=float)
    ortho = np.max(np.abs(transpose(R) @ R - IDENTITY)) <= tol
    return bool(ortho and np.all(np.abs(np.linalg.det(R) - 1.0) <= tol))


# --- rotations -----------------------------------------------------------

def hat(v: np.ndarray) -> np.ndarray:
    """Skew matrix of a vector (stack), so that ``hat(v) @ w = v x w``."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def vee(W: np.ndarray) -> np.ndarray:
    return np.stack([W[..., 2, 1], W[..., 0, 2], W[..., 1, 0]], axis=-1)


def rotation_from_axis_angle(axis, angle) -> np.ndarray:
    """Rodrigues' formula, broadcast over stacks of axes and angles."""
    axis = np.asarray(axis, dtype=float)
    angle = np.asarray(angle, dtype=float)
    K = hat(axis)
    s = np.sin(angle)[..., None, None]
    c = np.cos(angle)[..., None, None]
    return IDENTITY + s * K + (1.0 - c) * (K @ K)


def rotation_from_vector(omega) -> np.ndarray:
    """Exponential map ``exp(hat(omega))`` for rotation vectors (stack)."""
    omega = np.asarray(omega, dtype=float)
    theta = np.linalg.norm(omega, axis=-1)
    safe = np.where(theta > 0, theta, 1.0)
    axis = np.where((theta > 0)[..., None], omega / safe[..., None], [0.0, 0.0, 1.0])
    return rotation_from_axis_angle(axis, theta)


def rotation_angle(R: np.ndarray) -> np.ndarray:
    """Rotation angle in ``[0, pi]``, accurate near both ends."""
    R = np.asarray(R, dtype=float)
    s = 0.5 * np.linalg.norm(vee(R - transpose(R)), axis=-1)
    c = 0.5 * (np.trace(R, axis1=-2, axis2=-1) - 1.0)
    return np.arctan2(s, c)


def geodesic_distance(Ra, Rb) -> np.ndarray:
    """Bi-invariant geodesic distance on SO(3), i.e. the angle of ``Ra^T Rb``."""
    return rotation_angle(transpose(np.asarray(Ra, dtype=float)) @ np.asarray(Rb, dtype=float))


@dataclass(frozen=True)
class AngleAxis:
    angle: float
    axis: np.ndarray

    def __post_init__(self):
        if abs(np.linalg.norm(self.axis) - 1.0) > 1e-12:
            raise ValueError("axis must be a unit vector")

    def matrix(self) -> np.ndarray:
        return rotation_from_axis_angle(self.axis, self.angle)


def angle_axis(R) -> AngleAxis:
    """Angle-axis form ``[alpha, r]`` with ``alpha`` in ``[0, pi]``.

    For the identity the axis is arbitrary and ``e3`` is returned.  At
    ``alpha = pi`` the axis sign is fixed so that its largest component is
    positive.
    """
    R = np.asarray(R, dtype=float)
    alpha = float(rotation_angle(R))
    w = vee(R - R.T) * 0.5
    nw = np.linalg.norm(w)
    if alpha < 1e-15:
        return AngleAxis(0.0, np.array([0.0, 0.0, 1.0]))
    if np.pi - alpha > 1e-6:
        return AngleAxis(alpha, w / nw)
    # near pi: sym(R) = cos(a) I + (1 - cos(a)) r r^T
    B = (0.5 * (R + R.T) - np.cos(alpha) * np.eye(3)) / (1.0 - np.cos(alpha))
    k = int(np.argmax(np.diag(B)))
    r = B[:, k] / np.sqrt(B[k, k])
    r /= np.linalg.norm(r)
    if nw > 0 and np.dot(r, w) < 0:
        r = -r
    return AngleAxis(alpha, r)
