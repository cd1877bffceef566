import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from scipy.spatial.transform import Rotation

from rpolar.mat3 import (
    AngleAxis,
    NotInGLPlusError,
    NotSymmetricError,
    angle_axis,
    as_mat3,
    frob_inner,
    frob_norm,
    geodesic_distance,
    hat,
    is_rotation,
    polar_batch,
    polar_decompose,
    rotation_from_axis_angle,
    rotation_from_vector,
    singular_values,
    spectral_frame,
    sym_eigen,
    sym_skew_split,
    vee,
)
from strategies import gl_plus, matrices, rotations, unit_vectors


def test_split_of_identity():
    S, K = sym_skew_split(np.eye(3))
    np.testing.assert_array_equal(S, np.eye(3))
    np.testing.assert_array_equal(K, np.zeros((3, 3)))


def test_split_of_single_off_diagonal_entry():
    X = np.zeros((3, 3))
    X[0, 1] = 1.0
    S, K = sym_skew_split(X)
    np.testing.assert_array_equal(S, 0.5 * np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]))
    np.testing.assert_array_equal(K, 0.5 * np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]))


@given(matrices())
def test_split_is_orthogonal_and_pythagorean(X):
    S, K = sym_skew_split(X)
    scale = max(1.0, float(frob_norm(X)) ** 2)
    np.testing.assert_allclose(S + K, X, atol=1e-14 * scale)
    assert abs(frob_inner(S, K)) <= 1e-12 * scale
    assert abs(frob_norm(X) ** 2 - frob_norm(S) ** 2 - frob_norm(K) ** 2) <= 1e-12 * scale


@given(matrices(), rotations())
def test_frobenius_norm_invariant_under_conjugation(X, Q):
    assert frob_norm(Q.T @ X @ Q) == pytest.approx(frob_norm(X), rel=1e-12, abs=1e-12)


def test_as_mat3_rejects_bad_input():
    with pytest.raises(ValueError):
        as_mat3(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        as_mat3(np.full((3, 3), np.nan))


def test_eigen_of_diagonal():
    lam, V = sym_eigen(np.diag([3.0, 2.0, 1.0]))
    np.testing.assert_allclose(lam, [3, 2, 1], atol=1e-15)
    np.testing.assert_allclose(np.abs(V), np.eye(3), atol=1e-15)


def test_eigen_of_identity_gives_some_orthonormal_frame():
    lam, V = sym_eigen(np.eye(3))
    np.testing.assert_allclose(lam, [1, 1, 1], atol=1e-15)
    np.testing.assert_allclose(V.T @ V, np.eye(3), atol=1e-12)


@given(rotations())
def test_eigen_is_conjugation_invariant(R):
    lam, _ = sym_eigen(R.T @ np.diag([5.0, 2.0, 1.0]) @ R)
    np.testing.assert_allclose(lam, [5, 2, 1], atol=1e-10)


@given(matrices())
def test_eigen_matches_lapack(X):
    S = X + X.T
    lam, V = sym_eigen(S)
    ref = np.linalg.eigh(S)[0][::-1]
    scale = max(float(frob_norm(S)), 1e-300)
    np.testing.assert_allclose(lam, ref, atol=1e-12 * scale + 1e-300)
    assert np.all(np.diff(lam) <= 0)
    np.testing.assert_allclose(V.T @ V, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(S @ V, V * lam, atol=1e-9 * scale + 1e-300)


def test_eigen_rejects_non_symmetric():
    with pytest.raises(NotSymmetricError):
        sym_eigen(np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))


def test_eigen_handles_stacks():
    S = np.stack([np.diag([1.0, 3.0, 2.0]), 2 * np.eye(3)])
    lam, V = sym_eigen(S)
    assert lam.shape == (2, 3) and V.shape == (2, 3, 3)
    np.testing.assert_allclose(lam, [[3, 2, 1], [2, 2, 2]], atol=1e-15)


def test_spectral_frame_of_reversed_diagonal():
    sf = spectral_frame(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(sf.sigma, [3, 2, 1], atol=1e-15)
    P = sf.frame
    assert np.allclose(np.abs(P), np.abs(P).round())  # a signed permutation
    assert np.linalg.det(P) == pytest.approx(1.0, abs=1e-12)


def test_spectral_frame_of_isotropic_dilation_is_flagged():
    sf = spectral_frame(2.0 * np.eye(3))
    np.testing.assert_allclose(sf.sigma, [2, 2, 2], atol=1e-15)
    assert sf.degenerate


def test_spectral_frame_rejects_reflections():
    with pytest.raises(NotInGLPlusError):
        spectral_frame(np.diag([1.0, 1.0, -1.0]))


@settings(max_examples=60)
@given(gl_plus())
def test_spectral_frame_matches_svd_and_diagonalises_stretch(F):
    sf = spectral_frame(F)
    np.testing.assert_allclose(sf.sigma, np.linalg.svd(F, compute_uv=False), rtol=1e-10)
    U = polar_decompose(F).stretch
    D = sf.frame.T @ U @ sf.frame
    assert frob_norm(D - np.diag(sf.sigma)) <= 1e-9 * frob_norm(U)
    assert np.linalg.det(sf.frame) == pytest.approx(1.0, abs=1e-12)


@given(rotations(), rotations())
def test_spectral_frame_of_built_matrix(R, Q):
    sf = spectral_frame(R @ np.diag([4.0, 2.0, 0.5]) @ Q.T)
    np.testing.assert_allclose(sf.sigma, [4, 2, 0.5], atol=1e-10)


@given(gl_plus(), rotations())
def test_singular_values_are_left_invariant(F, R):
    np.testing.assert_allclose(singular_values(R @ F), singular_values(F), rtol=1e-10)


def test_polar_of_identity_and_of_rotation():
    pp = polar_decompose(np.eye(3))
    np.testing.assert_allclose(pp.rotation, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(pp.stretch, np.eye(3), atol=1e-15)
    R = rotation_from_axis_angle(np.array([1.0, 2.0, 2.0]) / 3.0, 0.7)
    pp = polar_decompose(R)
    np.testing.assert_allclose(pp.rotation, R, atol=1e-14)
    np.testing.assert_allclose(pp.stretch, np.eye(3), atol=1e-14)


def test_polar_of_simple_shear_frozen():
    # reference values from scipy.linalg.polar
    F = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    R_ref = np.array(
        [[0.9486832980505135, 0.3162277660168379, 0.0], [-0.31622776601683783, 0.9486832980505135, 0.0], [0.0, 0.0, 1.0]]
    )
    U_ref = np.array(
        [[1.8973665961010275, 0.632455532033676, 0.0], [0.6324555320336759, 1.2649110640673515, 0.0], [0.0, 0.0, 1.0]]
    )
    pp = polar_decompose(F)
    np.testing.assert_allclose(pp.rotation, R_ref, atol=1e-12)
    np.testing.assert_allclose(pp.stretch, U_ref, atol=1e-12)
    np.testing.assert_allclose(pp.rotation @ pp.stretch, F, atol=1e-10)


@settings(max_examples=80)
@given(gl_plus())
def test_polar_matches_scipy(F):
    pp = polar_decompose(F)
    R_ref, U_ref = scipy.linalg.polar(F)
    np.testing.assert_allclose(pp.rotation, R_ref, atol=1e-10)
    np.testing.assert_allclose(pp.stretch, U_ref, atol=1e-9 * frob_norm(F))
    assert is_rotation(pp.rotation, tol=1e-10)
    np.testing.assert_array_equal(pp.stretch, pp.stretch.T)
    assert np.all(np.linalg.eigvalsh(pp.stretch) > 0)
    assert frob_norm(pp.rotation @ pp.stretch - F) <= 1e-9 * frob_norm(F)


def test_polar_rejects_singular_and_reflecting_matrices():
    with pytest.raises(NotInGLPlusError):
        polar_decompose(np.diag([1.0, 1.0, 0.0]))
    with pytest.raises(NotInGLPlusError):
        polar_decompose(-np.eye(3))


def test_polar_batch_matches_single():
    Fs = np.stack([np.diag([3.0, 2.0, 1.0]), np.array([[2.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])])
    R, U = polar_batch(Fs)
    for k in range(2):
        pp = polar_decompose(Fs[k])
        np.testing.assert_allclose(R[k], pp.rotation, atol=1e-15)
        np.testing.assert_allclose(U[k], pp.stretch, atol=1e-15)


@given(unit_vectors())
def test_hat_vee_roundtrip(v):
    np.testing.assert_allclose(vee(hat(v)), v)
    np.testing.assert_allclose(hat(v) @ np.array([1.0, -2.0, 0.5]), np.cross(v, [1.0, -2.0, 0.5]), atol=1e-15)


@given(unit_vectors())
def test_exponential_map_matches_scipy(axis):
    for theta in (0.0, 1e-8, 0.4, 2.0, np.pi):
        omega = theta * axis
        np.testing.assert_allclose(
            rotation_from_vector(omega), Rotation.from_rotvec(omega).as_matrix(), atol=1e-14
        )


@given(rotations())
def test_angle_axis_roundtrip(R):
    aa = angle_axis(R)
    assert 0.0 <= aa.angle <= np.pi
    np.testing.assert_allclose(aa.matrix(), R, atol=1e-9)


def test_angle_axis_at_half_turn():
    axis = np.array([2.0, -1.0, 2.0]) / 3.0
    aa = angle_axis(rotation_from_axis_angle(axis, np.pi))
    assert aa.angle == pytest.approx(np.pi, abs=1e-12)
    np.testing.assert_allclose(aa.axis, axis, atol=1e-12)


def test_angle_axis_rejects_non_unit_axis():
    with pytest.raises(ValueError):
        AngleAxis(0.3, np.array([1.0, 1.0, 0.0]))


@given(rotations(), rotations())
def test_geodesic_distance_matches_scipy(Ra, Rb):
    ref = (Rotation.from_matrix(Ra).inv() * Rotation.from_matrix(Rb)).magnitude()
    assert geodesic_distance(Ra, Rb) == pytest.approx(ref, abs=1e-7)
    assert geodesic_distance(Ra, Ra) == pytest.approx(0.0, abs=1e-7)


def test_geodesic_distance_resolves_tiny_angles():
    R = rotation_from_vector(np.array([0.0, 0.0, 1e-9]))
    assert geodesic_distance(np.eye(3), R) == pytest.approx(1e-9, rel=1e-6)
