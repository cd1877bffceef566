"""Polar and relaxed polar decompositions of 3x3 deformation gradients.

The relaxed factors are the rotations minimizing the weighted Cosserat
shear-stretch energy; the package also provides a PSD projection, brute-force
oracles, planar spin extraction and a synthetic indentation field.
"""

from .energy import ClassicalRangeError, ReductionData, Regime, Weights, classify, energy, mmp, polar_energy, rescale
from .mat3 import (
    AngleAxis,
    DegenerateSpectrumError,
    NotInGLPlusError,
    NotSymmetricError,
    PolarParts,
    SpectralFrame,
    angle_axis,
    geodesic_distance,
    polar_decompose,
    singular_values,
    spectral_frame,
    sym_eigen,
)
from .nanoindent import GridSpec, SectionField, evaluate_section, f_nano_gradient, phi_nano, sample_grid
from .oracle import OracleResult, min_energy_so3, min_planar_distance, random_deformations
from .psd import PsdProjection, approx_plastic_stretch, is_definiteness_guaranteed, project_psd
from .relaxed import (
    RelaxedPolarResult,
    StretchPlane,
    optimal_angle,
    orient_eigenframe,
    relative_rotation,
    relaxed_polar_batch,
    relaxed_polar_pair,
    stretch_plane,
)
from .spin import OrientedPlane, Spin, adapted_frame, misorientation, planar_spin, polar2

__all__ = [
    "AngleAxis", "ClassicalRangeError", "DegenerateSpectrumError", "GridSpec", "NotInGLPlusError",
    "NotSymmetricError", "OracleResult", "OrientedPlane", "PolarParts", "PsdProjection",
    "ReductionData", "Regime", "RelaxedPolarResult", "SectionField", "SpectralFrame", "Spin",
    "StretchPlane", "Weights", "adapted_frame", "angle_axis", "approx_plastic_stretch", "classify",
    "energy", "evaluate_section", "f_nano_gradient", "geodesic_distance", "is_definiteness_guaranteed",
    "min_energy_so3", "min_planar_distance", "misorientation", "mmp", "optimal_angle",
    "orient_eigenframe", "phi_nano", "planar_spin", "polar2", "polar_decompose", "polar_energy",
    "project_psd", "random_deformations", "relative_rotation", "relaxed_polar_batch",
    "relaxed_polar_pair", "rescale", "sample_grid", "singular_values", "spectral_frame",
    "stretch_plane", "sym_eigen",
]
