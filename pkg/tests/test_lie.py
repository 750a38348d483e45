import json

import numpy as np
import numpy.testing as npt
import pytest

from flattorsion.errors import InvalidInputError, NotFoundError
from flattorsion.lie import (
    bracket_closure,
    catalog,
    commutant,
    commutator,
    frame_curvature_check,
    generated_algebra,
    is_irreducible,
    jacobi_defect,
    load_catalog_json,
    orbit_span,
    structure_constants_from_entries,
)
from flattorsion.multilinear import AltForm
from flattorsion.torsion import sigma_contraction

from conftest import random_form


@pytest.mark.parametrize("name", ["su2", "su3", "so4", "abelian(4)"])
def test_catalog_entries_satisfy_jacobi(name):
    c = catalog(name)
    assert c.jacobi_defect() < 1e-14
    assert jacobi_defect(c.torsion()) < 1e-14
    assert sigma_contraction(c.torsion()).max_abs() < 1e-14


def test_su3_brackets_match_gell_mann_matrices():
    """Oracle: ``[l_a/2i, l_b/2i] = f_abc l_c/2i`` for the Gell-Mann matrices."""
    l = np.zeros((8, 3, 3), dtype=complex)
    l[0][0, 1] = l[0][1, 0] = 1
    l[1][0, 1], l[1][1, 0] = -1j, 1j
    l[2][0, 0], l[2][1, 1] = 1, -1
    l[3][0, 2] = l[3][2, 0] = 1
    l[4][0, 2], l[4][2, 0] = -1j, 1j
    l[5][1, 2] = l[5][2, 1] = 1
    l[6][1, 2], l[6][2, 1] = -1j, 1j
    l[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    X = l / 2j
    f = catalog("su3").c
    for a in range(8):
        for b in range(8):
            npt.assert_allclose(commutator(X[a], X[b]), np.einsum("c,cij->ij", f[a, b], X), atol=1e-14)


def test_json_loader_round_trip(tmp_path):
    su3 = catalog("su3")
    path = tmp_path / "su3.json"
    path.write_text(json.dumps(su3.to_json()))
    npt.assert_array_equal(load_catalog_json(path).c, su3.c)
    npt.assert_array_equal(load_catalog_json(json.dumps(su3.to_json())).c, su3.c)
    npt.assert_array_equal(load_catalog_json(su3.to_json()).c, su3.c)


def test_loader_rejects_bad_tables():
    with pytest.raises(InvalidInputError, match="Jacobi"):
        structure_constants_from_entries("bad", 5, [(0, 1, 2, 1.0), (0, 3, 4, 1.0), (1, 3, 2, 1.0)])
    with pytest.raises(InvalidInputError, match="antisymmetry"):
        structure_constants_from_entries("bad", 3, [(0, 1, 2, 1.0), (1, 0, 2, 1.0)])
    with pytest.raises(InvalidInputError):
        structure_constants_from_entries("bad", 3, [(0, 0, 2, 1.0)])
    with pytest.raises(NotFoundError):
        catalog("e8")


def test_jacobi_defect_vanishes_with_sigma_on_random_forms():
    rng = np.random.default_rng(0)
    for n in (3, 4, 5, 6, 7):
        T = random_form(rng, n, 3)
        zero_sigma = sigma_contraction(T).max_abs() < 1e-12
        assert (jacobi_defect(T) < 1e-12) == zero_sigma
        assert zero_sigma == (n <= 4)  # every 3-form in dim <= 4 is decomposable


def test_perturbed_su2_breaks_both():
    rng = np.random.default_rng(1)
    T = AltForm(5, 3, {(0, 1, 2): -2.0}) + random_form(rng, 5, 3) * 0.1
    assert jacobi_defect(T) > 1e-6
    assert sigma_contraction(T).max_abs() > 1e-6


def test_generated_algebra_dimensions():
    assert generated_algebra(catalog("su2").torsion()).dim == 3
    assert generated_algebra(catalog("so4").torsion()).dim == 6
    assert generated_algebra(catalog("su3").torsion()).dim == 8
    assert generated_algebra(catalog("abelian(3)").torsion()).dim == 0


def test_bracket_closure_is_closed_and_idempotent():
    span = generated_algebra(catalog("su3").torsion())
    assert span.closure_residual() < 1e-10
    again = bracket_closure(span.basis)
    assert again.dim == span.dim
    assert max(span.residual(B) for B in again.basis) < 1e-10


def test_bracket_closure_of_two_rotations_is_so3():
    E = lambda a, b: np.eye(3)[:, [a]] @ np.eye(3)[[b]] - np.eye(3)[:, [b]] @ np.eye(3)[[a]]
    assert bracket_closure([E(0, 1), E(1, 2)]).dim == 3
    assert bracket_closure([E(0, 1), 2 * E(0, 1)]).dim == 1


def test_bracket_closure_validation():
    with pytest.raises(InvalidInputError):
        bracket_closure([])
    with pytest.raises(InvalidInputError):
        bracket_closure([np.eye(2)], tol=0)
    with pytest.raises(InvalidInputError):
        bracket_closure([np.eye(2), np.eye(3)])


def test_so4_certificate_exhibits_invariant_subspace():
    span = generated_algebra(catalog("so4").torsion())
    cert = is_irreducible(span, seed=3)
    assert not cert
    U = cert.invariant_subspace
    assert U.shape[1] in (3,)
    npt.assert_allclose(U.T @ U, np.eye(U.shape[1]), atol=1e-12)
    for B in span.basis:
        assert np.abs(B @ U - U @ (U.T @ B @ U)).max() < 1e-10
    assert max(cert.orbit_dims) <= 3


def test_su3_adjoint_is_irreducible():
    cert = is_irreducible(generated_algebra(catalog("su3").torsion()), seed=0)
    assert cert and cert.commutant_dim == 1 and cert.orbit_dims == [8, 8, 8]


def test_complex_structure_commutant_is_still_irreducible():
    """u(1) acting on R^2: commutant is C, but the action is irreducible over R."""
    J = np.array([[0.0, -1.0], [1.0, 0.0]])
    span = bracket_closure([J])
    assert len(commutant(span)) == 2
    assert is_irreducible(span)


def test_orbit_span_of_invariant_vector():
    span = generated_algebra(catalog("so4").torsion())
    assert orbit_span(span, np.eye(6)[0]).shape[1] == 3


@pytest.mark.parametrize("name", ["su2", "su3", "so4"])
def test_frame_curvature_of_bi_invariant_metric(name):
    assert frame_curvature_check(catalog(name)) < 1e-12
