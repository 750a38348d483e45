import numpy as np
import numpy.testing as npt
import pytest

from flattorsion.clifford import (
    build_clifford7,
    coefficient_derivative,
    coefficient_derivative_array,
    fd_coefficient_derivative_array,
    flow,
    frame_family,
    killing_frame,
    levi_civita_check,
    levi_civita_closed_form,
    north_pole,
    sample_sphere,
    torsion_array_at,
    torsion_at,
    torsion_components,
)
from flattorsion.errors import InvalidInputError
from flattorsion.g2 import PHI, random_rotation
from flattorsion.torsion import sigma_array


def test_integer_clifford_relations(rep):
    K = rep.tables()
    assert rep.kappas.dtype.kind == "i"
    for i in range(7):
        for j in range(7):
            A, B = np.array(K[i]), np.array(K[j])
            npt.assert_array_equal(A @ B + B @ A, -2 * (i == j) * np.eye(8, dtype=int))
    assert rep.anticommutator_defect() == 0 and rep.skew_defect() == 0


def test_trace_form(rep):
    tr = np.einsum("iab,jba->ij", rep.kappas, rep.kappas)
    npt.assert_array_equal(tr, -8 * np.eye(7))


def test_kappas_are_read_only(rep):
    with pytest.raises(ValueError):
        rep.kappas[0, 0, 0] = 5


def test_killing_frame_orthonormal_and_tangent(rep):
    X = sample_sphere(1000, 0)
    V = np.einsum("iab,nb->nia", rep.kappas, X)
    npt.assert_allclose(np.einsum("nia,nja->nij", V, V), np.broadcast_to(np.eye(7), (1000, 7, 7)), atol=1e-14)
    npt.assert_allclose(np.einsum("nia,na->ni", V, X), 0, atol=1e-14)


def test_flow_is_an_integral_curve(rep):
    x = sample_sphere(1, 4)[0]
    for k in range(7):
        t, h = 0.3, 1e-5
        vel = (flow(rep, x, k, t + h) - flow(rep, x, k, t - h)) / (2 * h)
        npt.assert_allclose(vel, rep.kappas[k] @ flow(rep, x, k, t), atol=1e-9)
        assert np.linalg.norm(flow(rep, x, k, t)) == pytest.approx(1.0)


def test_torsion_is_minus_bracket_of_frame(rep):
    """Oracle: ``T_ijk = -<[V_i, V_j], V_k>`` with ``[Ax, Bx] = (BA - AB) x``."""
    x = sample_sphere(1, 5)[0]
    K, V = rep.kappas, killing_frame(rep, x)
    T = torsion_array_at(rep, x)
    for i in range(7):
        for j in range(7):
            br = (K[j] @ K[i] - K[i] @ K[j]) @ x
            npt.assert_allclose(T[i, j], -V @ br, atol=1e-13)
    alt = -2 * np.einsum("iab,jbc,kcd,d,a->ijk", K, K, K, x, x)
    npt.assert_allclose(T, alt, atol=1e-13)


def test_torsion_at_north_pole_is_twice_phi(rep):
    assert torsion_at(rep, north_pole()).allclose(PHI * 2.0, 0)
    assert torsion_components(rep, north_pole())[(0, 1, 2)] == 2.0


def test_torsion_norm_constant(rep):
    for x in sample_sphere(50, 6):
        assert torsion_at(rep, x).norm() ** 2 == pytest.approx(28.0, abs=1e-12)


def test_coefficient_derivative_matches_finite_differences(rep):
    for x in sample_sphere(5, 7):
        npt.assert_allclose(coefficient_derivative_array(rep, x),
                            fd_coefficient_derivative_array(rep, x), atol=1e-7)


def test_coefficient_derivative_is_a_third_of_sigma(rep):
    x = sample_sphere(1, 8)[0]
    D = coefficient_derivative_array(rep, x)
    s = sigma_array(torsion_at(rep, x))
    npt.assert_allclose(D, np.einsum("ijlk->kijl", s) / 3, atol=1e-12)
    assert coefficient_derivative(rep, x, 0, 1, 3, 2) == pytest.approx(D[2, 0, 1, 3])


def test_levi_civita(rep):
    for x in sample_sphere(3, 9):
        assert levi_civita_check(rep, x) < 1e-8
        L = levi_civita_closed_form(rep, x)
        V = killing_frame(rep, x)
        T = torsion_array_at(rep, x)
        npt.assert_allclose(L, -0.5 * np.einsum("ijk,ka->ija", T, V), atol=1e-13)


def test_frame_family_rotates_torsion(rep):
    rng = np.random.default_rng(10)
    A = random_rotation(rng)
    x = sample_sphere(1, 11)[0]
    T = torsion_array_at(rep, x)
    expected = np.einsum("ai,bj,ck,ijk->abc", A, A, A, T)
    npt.assert_allclose(frame_family(rep, A, x).to_array(), expected, atol=1e-12)
    with pytest.raises(InvalidInputError):
        frame_family(rep, 2 * np.eye(7), x)


def test_rejects_points_off_the_sphere(rep):
    with pytest.raises(InvalidInputError):
        torsion_at(rep, np.ones(8))
    with pytest.raises(InvalidInputError):
        killing_frame(rep, np.ones(7) / np.sqrt(7))


def test_build_is_deterministic():
    npt.assert_array_equal(build_clifford7().kappas, build_clifford7().kappas)


def test_one_third_connection_preserves_torsion_and_sigma(rep):
    """``nabla^{1/3} = nabla - 1/3 (X _| T)`` annihilates ``T`` and ``sigma_T`` on S^7.

    ``sigma`` is quadratic in ``T``, so its derivative along ``V_k`` is the exact polarization
    ``(sigma(T + D_k) - sigma(T - D_k)) / 2``.
    """
    from flattorsion.multilinear import AltForm, interior
    from flattorsion.torsion import sigma_contraction, two_form_action

    x = sample_sphere(1, 12)[0]
    T = torsion_at(rep, x)
    sigma = sigma_contraction(T)
    D = coefficient_derivative_array(rep, x)
    for k, e in enumerate(np.eye(7)):
        Dk = AltForm.from_array(D[k])
        beta = interior(e, T)
        assert (Dk - two_form_action(beta, T) * (1 / 3)).max_abs() < 1e-12
        dsigma = (sigma_contraction(T + Dk) - sigma_contraction(T - Dk)) * 0.5
        assert (dsigma - two_form_action(beta, sigma) * (1 / 3)).max_abs() < 1e-11
