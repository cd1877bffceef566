import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from rpolar.mat3 import polar_decompose, rotation_from_axis_angle
from rpolar.nanoindent import f_nano_gradient
from rpolar.oracle import min_planar_distance
from rpolar.spin import (
    OrientedPlane,
    adapted_frame,
    misorientation,
    planar_angle,
    planar_block,
    planar_spin,
    planar_spin_batch,
    polar2,
)
from strategies import matrices, rotations, unit_vectors

E1, E2, E3 = np.eye(3)


def _rot2(a):
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


def test_adapted_frame_examples():
    np.testing.assert_array_equal(adapted_frame(E3), np.eye(3))
    Q = adapted_frame(E2)
    np.testing.assert_array_equal(Q[:, 2], E2)
    assert np.linalg.det(Q) == pytest.approx(1.0)


@given(unit_vectors())
def test_adapted_frame_is_a_rotation_onto_normal(n):
    Q = adapted_frame(n)
    np.testing.assert_allclose(Q @ E3, n, atol=1e-12)
    np.testing.assert_allclose(Q.T @ Q, np.eye(3), atol=1e-12)
    assert np.linalg.det(Q) == pytest.approx(1.0, abs=1e-12)


def test_adapted_frame_rejects_non_unit_normal():
    with pytest.raises(ValueError):
        adapted_frame([0.0, 0.0, 2.0])


def test_planar_block_examples():
    plane = OrientedPlane.from_normal(E3)
    np.testing.assert_array_equal(planar_block(np.eye(3), plane), np.eye(2))
    np.testing.assert_array_equal(planar_block(np.diag([2.0, 3.0, 1.0]), plane), np.diag([2.0, 3.0]))
    n = np.array([1.0, 2.0, 2.0]) / 3.0
    block = planar_block(rotation_from_axis_angle(n, 0.7), OrientedPlane.from_normal(n))
    np.testing.assert_allclose(block, _rot2(0.7), atol=1e-15)


def test_polar2_of_identity():
    np.testing.assert_array_equal(polar2(np.eye(2)), np.eye(2))


@given(st.floats(-3.0, 3.0), st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_polar2_strips_a_diagonal_stretch(alpha, a, b):
    R = polar2(_rot2(alpha) @ np.diag([a, b]))
    np.testing.assert_allclose(R, _rot2(alpha), atol=1e-12)


def test_polar2_of_shear_matches_oracle():
    # min_planar_distance on [[2,1],[0,1]] returns -0.32175055439663236
    R = polar2(np.array([[2.0, 1.0], [0.0, 1.0]]))
    assert float(planar_angle(R)) == pytest.approx(-0.32175055439663236, abs=1e-8)


@given(matrices(-3.0, 3.0))
def test_polar2_agrees_with_embedded_polar(M):
    L2 = M[:2, :2]
    assume(np.linalg.det(L2) > 1e-3)
    E = np.eye(3)
    E[:2, :2] = L2
    np.testing.assert_allclose(polar2(L2), polar_decompose(E).rotation[:2, :2], atol=1e-10)


def test_polar2_flags_non_positive_determinant():
    assert np.all(np.isnan(polar2(np.diag([1.0, -1.0]))))
    assert np.all(np.isnan(polar2(np.zeros((2, 2)))))


def test_spin_examples():
    plane = OrientedPlane.from_normal(E3)
    assert planar_spin(rotation_from_axis_angle(E3, 0.3), plane).angle == pytest.approx(0.3, abs=1e-15)
    s = planar_spin(np.diag([2.0, 3.0, 1.0]), plane)
    assert s.angle == 0.0 and not s.degenerate


def test_spin_of_indentation_gradient_matches_oracle():
    # block of F_nano(0.3, 0.5, -0.4) in the plane y = const; oracle angle 0.11968218265650687
    L = f_nano_gradient(np.array([0.3, 0.5, -0.4]))
    s = planar_spin(L, OrientedPlane.from_normal(E2))
    assert s.angle == pytest.approx(0.11968218265650687, abs=1e-8)
    assert s.angle == pytest.approx(min_planar_distance(s.planar_block).minimizer, abs=1e-8)


@pytest.mark.parametrize(
    "L",
    [
        np.array([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]),
        np.diag([1.0, -1.0, -1.0]),
    ],
    ids=["quarter-turn", "half-turn"],
)
def test_rotation_about_in_plane_axis_is_degenerate(L):
    s = planar_spin(L, OrientedPlane.from_normal(E3))
    assert s.degenerate
    assert np.isnan(s.angle)


@given(rotations(), unit_vectors(), st.floats(-np.pi, np.pi))
def test_spin_does_not_depend_on_adapted_frame(L, n, theta):
    base = OrientedPlane.from_normal(n)
    other = OrientedPlane(normal=n, adapted_frame=base.adapted_frame @ rotation_from_axis_angle(E3, theta))
    a, b = planar_spin(L, base), planar_spin(L, other)
    assume(not a.degenerate and np.linalg.det(a.planar_block) > 1e-6)
    d = (a.angle - b.angle + np.pi) % (2 * np.pi) - np.pi
    assert abs(d) <= 1e-10


@given(matrices(-3.0, 3.0), unit_vectors())
def test_spin_matches_planar_oracle(L, n):
    plane = OrientedPlane.from_normal(n)
    s = planar_spin(L, plane)
    assume(not s.degenerate and np.linalg.det(s.planar_block) > 1e-6)
    o = min_planar_distance(s.planar_block).minimizer
    assert abs((s.angle - o + np.pi) % (2 * np.pi) - np.pi) <= 1e-8


def test_batch_form_matches_single():
    Ls = np.stack([rotation_from_axis_angle(E3, a) for a in (-1.0, 0.0, 2.0)] + [rotation_from_axis_angle(E1, np.pi)])
    ang, deg = planar_spin_batch(Ls, OrientedPlane.from_normal(E3))
    np.testing.assert_allclose(ang[:3], [-1.0, 0.0, 2.0], atol=1e-15)
    assert deg.tolist() == [False, False, False, True]


def test_misorientation_examples():
    Ra = rotation_from_axis_angle(E1, 0.4)
    np.testing.assert_allclose(misorientation(Ra, Ra), np.eye(3), atol=1e-15)
    np.testing.assert_array_equal(misorientation(np.eye(3), Ra), Ra)


@given(rotations(), rotations())
def test_misorientation_reconstructs(Ra, Rb):
    np.testing.assert_allclose(misorientation(Ra, Rb) @ Ra, Rb, atol=1e-12)
