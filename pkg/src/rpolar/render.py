"""Serialisation of section fields: CSV, binary PPM and a matplotlib figure."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .nanoindent import SectionField

DEFAULT_CLAMP_DEG = 8.0
GRAY = np.array([128, 128, 128], dtype=np.uint8)

CSV_COMMENT = "# spin_deg: planar spin about the section normal in degrees; beta_hat: radians"
CSV_HEADER = "x,y,z,sigma1,sigma2,sigma3,regime,beta_hat,spin_deg"


def diverging_rgb(values_deg, clamp_deg: float = DEFAULT_CLAMP_DEG) -> np.ndarray:
    """Blue-white-red colours for angles in degrees; ``nan`` maps to mid-gray.

    ``0`` is pure white and ``-clamp``/``+clamp`` are saturated blue/red.
    """
    if not clamp_deg > 0:
        raise ValueError("clamp must be positive")
    v = np.asarray(values_deg, dtype=float)
    bad = ~np.isfinite(v)
    t = np.clip(np.where(bad, 0.0, v) / clamp_deg, -1.0, 1.0)
    fade = 255.0 * (1.0 - np.abs(t))
    r = np.where(t >= 0, 255.0, fade)
    b = np.where(t <= 0, 255.0, fade)
    rgb = np.stack([r, fade, b], axis=-1)
    rgb = np.rint(rgb).astype(np.uint8)
    rgb[bad] = GRAY
    return rgb


def write_ppm(path, rgb: np.ndarray) -> None:
    """Binary P6 pixmap; ``rgb`` is ``(height, width, 3)`` uint8, first row on top."""
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    h, w = rgb.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(rgb.tobytes())


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError("only 8-bit PPM supported")
    raw = parts[4]
    return np.frombuffer(raw[: w * h * 3], dtype=np.uint8).reshape(h, w, 3)


def spin_degrees(fld: SectionField, rotation: str) -> np.ndarray:
    return np.degrees(fld.spins[rotation])


def regime_labels(fld: SectionField, rotation: str) -> np.ndarray:
    labels = np.array(fld.regime, dtype="<U12")
    labels[fld.spin_degenerate[rotation]] = "degenerate"
    return labels


def _fmt(v: float) -> str:
    return "%.17g" % v


def write_field_csv(path, fld: SectionField, rotation: str) -> int:
    """Write one row per grid point in row-major order; returns the row count."""
    spin = spin_degrees(fld, rotation)
    labels = regime_labels(fld, rotation)
    P = fld.points.reshape(-1, 3)
    S = fld.sigma.reshape(-1, 3)
    beta = fld.beta_hat.ravel()
    spin = spin.ravel() + 0.0  # no signed zeros in the output
    labels = labels.ravel()
    lines = [CSV_COMMENT, CSV_HEADER]
    for k in range(P.shape[0]):
        row = [_fmt(c) for c in P[k]] + [_fmt(c) for c in S[k]]
        row += [str(labels[k]), _fmt(beta[k]), _fmt(spin[k])]
        lines.append(",".join(row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
    return P.shape[0]


def read_field_csv(path) -> dict[str, np.ndarray]:
    """Parse a file written by :func:`write_field_csv` into column arrays."""
    with open(path) as fh:
        rows = [ln.rstrip("\n") for ln in fh if not ln.startswith("#")]
    header = rows[0].split(",")
    cols: dict[str, list] = {h: [] for h in header}
    for ln in rows[1:]:
        for h, v in zip(header, ln.split(",")):
            cols[h].append(v)
    out = {}
    for h, vals in cols.items():
        out[h] = np.array(vals) if h == "regime" else np.array([float(v) for v in vals])
    return out


def field_image(fld: SectionField, rotation: str, clamp_deg: float = DEFAULT_CLAMP_DEG) -> np.ndarray:
    """RGB raster of the spin field with the largest second in-plane coordinate on top."""
    rgb = diverging_rgb(spin_degrees(fld, rotation), clamp_deg)
    return rgb[::-1]


def render_section_figure(
    fld: SectionField,
    rotation: str,
    path,
    clamp_deg: float = DEFAULT_CLAMP_DEG,
    deformed: bool = True,
) -> None:
    """Spin map over the section, drawn on the deformed configuration by default."""
    from matplotlib import colormaps
    from matplotlib.figure import Figure

    a, b = fld.spec.in_plane_axes
    pts = fld.deformed if deformed else fld.points
    U, V = pts[..., a], pts[..., b]
    spin = np.ma.masked_invalid(spin_degrees(fld, rotation))

    cmap = colormaps["bwr"].copy()
    cmap.set_bad("0.5")
    fig = Figure(figsize=(5.5, 4.5))
    ax = fig.add_subplot()
    mesh = ax.pcolormesh(U, V, spin, cmap=cmap, vmin=-clamp_deg, vmax=clamp_deg, shading="auto")
    names = "xyz"
    ax.set_xlabel(names[a])
    ax.set_ylabel(names[b])
    ax.set_aspect("equal")
    ax.set_title(f"planar spin, {rotation}, {names[fld.spec.axis]} = {fld.spec.offset:g}")
    cb = fig.colorbar(mesh, ax=ax)
    cb.set_label("spin [deg]")
    fig.savefig(path, dpi=150, bbox_inches="tight")
