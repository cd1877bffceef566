"""Synthetic conical nanoindentation on the cube ``[-1, 1]^3``.

The map only moves points vertically: ``(x, y, z) -> (x, y, z * s(r))`` with
``r = sqrt(x^2 + y^2)`` and a radial profile

    s(r) = 3/4 (r^2 + 1/3)                 for r <= 1/2
    s(r) = 1 + 3/4 (r^2 - 1) g(r)          for 1/2 < r < 1
    s(r) = 1                               for r >= 1

where ``g(r) = 1 / (1 + exp(1/(1-r) + 2/(1-2r)))`` is the smooth step built
from the bump ``f(t) = exp(-1/t)``.  ``g`` is evaluated as a logistic
function so the exponent never overflows near the seams.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .energy import Regime, Weights
from .relaxed import relaxed_polar_batch
from .spin import OrientedPlane, planar_spin_batch

INNER = 0.5
OUTER = 1.0


def _exponent(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exponent ``1/(1-r) + 2/(1-2r)`` of the smooth step and its r-derivative."""
    a = 1.0 / (1.0 - r)
    b = 1.0 / (1.0 - 2.0 * r)
    return a + 2.0 * b, a * a + 4.0 * b * b


def radial_profile(r) -> tuple[np.ndarray, np.ndarray]:
    """Vertical scale ``s(r)`` and its derivative ``s'(r)``."""
    r = np.asarray(r, dtype=float)
    s = np.ones_like(r)
    ds = np.zeros_like(r)

    inner = r <= INNER
    s[inner] = 0.75 * (r[inner] ** 2 + 1.0 / 3.0)
    ds[inner] = 1.5 * r[inner]

    mid = (r > INNER) & (r < OUTER)
    rm = r[mid]
    E, dE = _exponent(rm)
    g = expit(-E)
    one_minus_g = expit(E)
    dg = -g * one_minus_g * dE
    s[mid] = 1.0 + 0.75 * (rm * rm - 1.0) * g
    ds[mid] = 0.75 * (2.0 * rm * g + (rm * rm - 1.0) * dg)
    return s, ds


def phi_nano(p) -> np.ndarray:
    """Deformed position of a point (or an ``(..., 3)`` array of points)."""
    p = np.asarray(p, dtype=float)
    r = np.hypot(p[..., 0], p[..., 1])
    s, _ = radial_profile(r)
    out = p.copy()
    out[..., 2] = p[..., 2] * s
    return out


def f_nano_gradient(p) -> np.ndarray:
    """Analytic Cartesian deformation gradient of :func:`phi_nano`.

    Only the last row differs from the identity:
    ``(z s'(r) x / r, z s'(r) y / r, s(r))``.  On the inner branch
    ``s'(r) / r = 3/2`` is used directly, which keeps the axis regular.
    """
    p = np.asarray(p, dtype=float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    r = np.hypot(x, y)
    s, ds = radial_profile(r)
    ds_over_r = np.where(r <= INNER, 1.5, ds / np.where(r > 0, r, 1.0))
    F = np.broadcast_to(np.eye(3), p.shape[:-1] + (3, 3)).copy()
    F[..., 2, 0] = z * ds_over_r * x
    F[..., 2, 1] = z * ds_over_r * y
    F[..., 2, 2] = s
    return F


ROTATION_FIELDS = ("polar", "rpolar_plus", "rpolar_minus", "collage")


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid in an axis-aligned section plane of the cube.

    ``axis`` is the index of the coordinate held fixed at ``offset``; the two
    remaining coordinates (in increasing index order) span the grid over
    ``extent = ((u_min, u_max), (v_min, v_max))`` with ``resolution``
    samples each.
    """

    axis: int = 1
    offset: float = 0.5
    extent: tuple[tuple[float, float], tuple[float, float]] = ((-1.0, 1.0), (-1.0, 1.0))
    resolution: tuple[int, int] = (201, 201)

    def __post_init__(self):
        if self.axis not in (0, 1, 2):
            raise ValueError("axis must be 0, 1 or 2")
        if min(self.resolution) < 2:
            raise ValueError("resolution must be >= 2 per axis")
        bounds = [self.offset, *self.extent[0], *self.extent[1]]
        if any(abs(b) > 1.0 for b in bounds):
            raise ValueError("grid lies outside the closed cube [-1, 1]^3")
        for lo, hi in self.extent:
            if not lo < hi:
                raise ValueError("extent bounds must be increasing")

    @property
    def in_plane_axes(self) -> tuple[int, int]:
        a, b = (i for i in range(3) if i != self.axis)
        return a, b

    @property
    def normal(self) -> np.ndarray:
        n = np.zeros(3)
        n[self.axis] = 1.0
        return n

    def points(self) -> np.ndarray:
        """Grid points, shape ``(n_v, n_u, 3)``; rows run along the first in-plane axis."""
        (u0, u1), (v0, v1) = self.extent
        nu, nv = self.resolution
        u = np.linspace(u0, u1, nu)
        v = np.linspace(v0, v1, nv)
        V, U = np.meshgrid(v, u, indexing="ij")
        a, b = self.in_plane_axes
        P = np.empty((nv, nu, 3))
        P[..., self.axis] = self.offset
        P[..., a] = U
        P[..., b] = V
        return P


@dataclass
class SectionField:
    """Every per-point quantity of a section sweep, as arrays of shape ``(n_v, n_u, ...)``."""

    spec: GridSpec
    weights: Weights
    points: np.ndarray
    deformed: np.ndarray
    F: np.ndarray
    sigma: np.ndarray
    regime: np.ndarray
    degenerate: np.ndarray
    beta_hat: np.ndarray
    rotations: dict[str, np.ndarray] = field(default_factory=dict)
    spins: dict[str, np.ndarray] = field(default_factory=dict)
    spin_degenerate: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def frame_dependent(self) -> np.ndarray:
        """Points where ``rpolar^+-`` depend on an ill-defined eigenframe."""
        return self.degenerate & (self.regime == Regime.NON_CLASSICAL.value)


def evaluate_section(spec: GridSpec, w: Weights = Weights(), patch_x: float = 0.0) -> SectionField:
    """Evaluate ``F_nano``, the rotation fields and their planar spins on a section.

    The spins are taken about the section normal.  The collage uses
    ``rpolar^+`` where ``x < patch_x`` and ``rpolar^-`` elsewhere.
    """
    P = spec.points()
    F = f_nano_gradient(P)
    b = relaxed_polar_batch(F, w)
    x = P[..., 0]
    collage = np.where((x < patch_x)[..., None, None], b.plus, b.minus)
    rotations = {
        "polar": b.polar,
        "rpolar_plus": b.plus,
        "rpolar_minus": b.minus,
        "collage": collage,
    }
    plane = OrientedPlane.from_normal(spec.normal)
    unstable = b.degenerate & (b.regime == Regime.NON_CLASSICAL.value)
    spins, spin_deg = {}, {}
    for name, R in rotations.items():
        ang, deg = planar_spin_batch(R, plane)
        if name != "polar":
            deg = deg | unstable
            ang = np.where(deg, np.nan, ang)
        spins[name] = ang
        spin_deg[name] = deg
    return SectionField(
        spec=spec,
        weights=w,
        points=P,
        deformed=phi_nano(P),
        F=F,
        sigma=b.sigma,
        regime=b.regime,
        degenerate=b.degenerate,
        beta_hat=b.beta_hat,
        rotations=rotations,
        spins=spins,
        spin_degenerate=spin_deg,
    )


@dataclass(frozen=True)
class FieldSample:
    point: np.ndarray
    deformed: np.ndarray
    F: np.ndarray
    regime: Regime
    spins: dict[str, float]


def sample_grid(spec: GridSpec, w: Weights = Weights(), patch_x: float = 0.0) -> list[FieldSample]:
    """Row-major list of samples over ``spec`` (rows follow the second in-plane axis)."""
    fld = evaluate_section(spec, w, patch_x)
    nv, nu = fld.points.shape[:2]
    out = []
    for j in range(nv):
        for i in range(nu):
            out.append(
                FieldSample(
                    point=fld.points[j, i],
                    deformed=fld.deformed[j, i],
                    F=fld.F[j, i],
                    regime=Regime(fld.regime[j, i]),
                    spins={k: float(v[j, i]) for k, v in fld.spins.items()},
                )
            )
    return out
