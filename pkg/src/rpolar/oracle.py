"""Brute-force minimizers used as ground truth for the closed-form rotations.

Nothing here uses eigenvectors or derivatives: the SO(3) oracle is a dense
angle-axis scan followed by shrinking local grids, the planar oracle a
uniform angle scan followed by golden-section search.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .energy import Weights, energy_batch
from .mat3 import as_mat3, rotation_from_axis_angle, rotation_from_vector

DEFAULT_COARSE_N = 48
REFINE_PASSES = 20
LOCAL_HALF_WIDTH = 3
MAX_MOVES_PER_PASS = 64
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OracleResult:
    minimizer: np.ndarray | float
    value: float
    resolution: float


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` near-uniform unit vectors on the sphere (golden-angle spiral)."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)


@lru_cache(maxsize=8)
def _coarse_rotations(coarse_n: int) -> tuple[np.ndarray, np.ndarray]:
    axes = fibonacci_sphere(coarse_n * coarse_n)
    # (-pi, pi]: drop -pi, keep +pi
    angles = np.pi - 2.0 * np.pi * np.arange(coarse_n) / coarse_n
    angles = angles[::-1]
    A, X = np.meshgrid(angles, np.arange(len(axes)), indexing="ij")
    R = rotation_from_axis_angle(axes[X.ravel()], A.ravel())
    keys = np.stack([A.ravel(), X.ravel()], axis=-1)
    return R, keys


@lru_cache(maxsize=4)
def _local_offsets(half_width: int) -> np.ndarray:
    k = np.arange(-half_width, half_width + 1, dtype=float)
    g = np.stack(np.meshgrid(k, k, k, indexing="ij"), axis=-1).reshape(-1, 3)
    # centre first so ties keep the incumbent
    order = np.argsort(np.abs(g).sum(axis=1), kind="stable")
    return g[order]


def min_energy_so3(
    F,
    w: Weights = Weights(),
    coarse_n: int = DEFAULT_COARSE_N,
    passes: int = REFINE_PASSES,
) -> OracleResult:
    """Global minimum of ``R -> W_{mu,mu_c}(R; F)`` over SO(3) by exhaustive search.

    The coarse stage scans ``coarse_n**2`` Fibonacci axes times ``coarse_n``
    angles.  Each refinement pass repeatedly searches a ``7**3`` grid of
    right perturbations ``R exp(hat(omega))`` centred on the incumbent until
    the centre wins, then halves the spacing; the first pass uses a quarter
    of the coarse angle step.
    """
    if coarse_n < 16:
        raise ValueError("coarse_n must be >= 16")
    F = as_mat3(F)
    R_all, _ = _coarse_rotations(coarse_n)
    vals = energy_batch(R_all, F, w.mu, w.mu_c)
    # argmin returns the first occurrence: smallest angle, then axis index
    best = int(np.argmin(vals))
    R_best = R_all[best]
    v_best = float(vals[best])

    offsets = _local_offsets(LOCAL_HALF_WIDTH)
    h = 2.0 * np.pi / coarse_n / 4.0
    for _ in range(passes):
        # re-centre at this spacing until the incumbent stays put
        for _ in range(MAX_MOVES_PER_PASS):
            cand = R_best @ rotation_from_vector(h * offsets)
            cvals = energy_batch(cand, F, w.mu, w.mu_c)
            k = int(np.argmin(cvals))
            if not cvals[k] < v_best:
                break
            R_best, v_best = cand[k], float(cvals[k])
        h *= 0.5
    return OracleResult(minimizer=R_best, value=v_best, resolution=2.0 * h)


def _rot2(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    c, s = np.cos(alpha), np.sin(alpha)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def _planar_distance(L2: np.ndarray, alpha) -> np.ndarray:
    D = L2 - _rot2(alpha)
    return np.einsum("...ij,...ij->...", D, D)


def min_planar_distance(
    L2, n_samples: int = 3600, tol: float = 1e-10, polish_tol: float = 1e-13
) -> OracleResult:
    """Minimize ``|L2 - Rot(alpha)|^2`` over ``alpha`` in ``(-pi, pi]``.

    A uniform scan picks the best cell and golden-section search shrinks it
    to ``tol``.  Comparing values alone cannot locate a smooth minimum
    better than about ``sqrt(eps)``, so the bracket is then bisected on the
    sign of ``f(alpha + d) - f(alpha - d)``, which for this sinusoidal
    objective vanishes exactly at the minimizer.
    """
    if n_samples < 360:
        raise ValueError("n_samples must be >= 360")
    L2 = np.asarray(L2, dtype=float)
    grid = np.pi - 2.0 * np.pi * np.arange(n_samples) / n_samples
    vals = _planar_distance(L2, grid)
    k = int(np.argmin(vals))
    step = 2.0 * np.pi / n_samples
    a, b = grid[k] - step, grid[k] + step
    f = lambda t: float(_planar_distance(L2, t))  # noqa: E731
    lo, hi = a, b
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)

    delta = 1e-3
    slope = lambda t: f(t + delta) - f(t - delta)  # noqa: E731
    # widen back to the scan cell if rounding pushed the minimizer outside
    if not (slope(a) <= 0.0 <= slope(b)):
        a, b = lo, hi
    while b - a > polish_tol:
        m = 0.5 * (a + b)
        if m in (a, b):
            break
        if slope(m) > 0.0:
            b = m
        else:
            a = m
    alpha = 0.5 * (a + b)
    alpha = (alpha + np.pi) % (2.0 * np.pi) - np.pi
    if alpha == -np.pi:
        alpha = np.pi
    return OracleResult(minimizer=float(alpha), value=f(alpha), resolution=float(b - a))

SAMPLE_SIGMA_RANGE = (0.2, 5.0)
SAMPLE_MIN_GAP = 1e-3


def random_deformations(
    rng: np.random.Generator,
    count: int,
    sigma_range: tuple[float, float] = SAMPLE_SIGMA_RANGE,
    min_gap: float = SAMPLE_MIN_GAP,
) -> np.ndarray:
    """``count`` matrices ``R1 diag(sigma) R2^T`` with Haar-random rotations.

    Singular values are uniform on ``sigma_range``; draws whose neighbouring
    singular values are closer than ``min_gap * sigma_1`` are redrawn so every
    sample has a simple spectrum.
    """
    from scipy.spatial.transform import Rotation

    lo, hi = sigma_range
    out = np.empty((count, 3, 3))
    k = 0
    while k < count:
        sigma = np.sort(rng.uniform(lo, hi, size=3))[::-1]
        if np.min(-np.diff(sigma)) < min_gap * sigma[0]:
            continue
        R1 = Rotation.random(random_state=rng).as_matrix()
        R2 = Rotation.random(random_state=rng).as_matrix()
        out[k] = R1 @ np.diag(sigma) @ R2.T
        k += 1
    return out
