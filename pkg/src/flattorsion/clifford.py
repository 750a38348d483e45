"""Explicit flat metric connection with skew torsion on the round 7-sphere.

The spin representation of Cl(7) on R^8 is realized by left multiplication with the
imaginary octonions. ``V_i(x) = kappa_i x`` is an orthonormal frame of Killing fields on
``S^7``; declaring it parallel defines a flat metric connection whose torsion, in the
frame ``V_i``, has point-dependent coefficients

    T_ijk(x) = -<[V_i, V_j], V_k>(x) = 2 <kappa_i kappa_j x, kappa_k x> = -2 <kappa_i kappa_j kappa_k x, x>

(standard bracket of vector fields, ``[A x, B x] = (B A - A B) x``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .multilinear import AltForm, multi_indices

# Octonion multiplication e_i e_j = sum_k OCTONION_TRIPLES-sign e_k - delta_ij for the
# imaginary units e_0..e_6; each triple (i, j, k) means e_i e_j = e_k (cyclically).
# These are also the nonzero coefficients of the G2 3-form used in g2.PHI.
OCTONION_TRIPLES: dict[tuple[int, int, int], int] = {
    (0, 1, 2): 1, (0, 3, 4): 1, (0, 5, 6): 1, (1, 3, 5): 1,
    (1, 4, 6): -1, (2, 3, 6): -1, (2, 4, 5): -1,
}

SPHERE_TOL = 1e-12


def _octonion_tensor() -> np.ndarray:
    phi = np.zeros((7, 7, 7), dtype=int)
    for (i, j, k), s in OCTONION_TRIPLES.items():
        for a, b, c, sign in ((i, j, k, 1), (j, k, i, 1), (k, i, j, 1),
                              (j, i, k, -1), (i, k, j, -1), (k, j, i, -1)):
            phi[a, b, c] = sign * s
    return phi


@dataclass(frozen=True)
class CliffordRep7:
    """Seven 8x8 skew matrices with ``kappa_i kappa_j + kappa_j kappa_i = -2 delta_ij``."""

    kappas: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.kappas)
        if k.shape != (7, 8, 8):
            raise InvalidInputError("need seven 8x8 matrices")
        k = k.copy()
        k.setflags(write=False)
        object.__setattr__(self, "kappas", k)

    def anticommutator_defect(self) -> float:
        """Max entry of ``kappa_i kappa_j + kappa_j kappa_i + 2 delta_ij Id`` over all 49 pairs."""
        K = self.kappas
        anti = np.einsum("iab,jbc->ijac", K, K)
        anti = anti + anti.transpose(1, 0, 2, 3)
        anti = anti + 2 * np.einsum("ij,ac->ijac", np.eye(7, dtype=K.dtype), np.eye(8, dtype=K.dtype))
        return float(np.abs(anti).max())

    def skew_defect(self) -> float:
        K = self.kappas
        return float(np.abs(K + K.transpose(0, 2, 1)).max())

    def rotated(self, A) -> "CliffordRep7":
        """``kappa'_a = sum_j A[a, j] kappa_j``: the rep attached to the frame ``A . V``."""
        A = np.asarray(A, dtype=float)
        return CliffordRep7(np.einsum("aj,jxy->axy", A, self.kappas))

    def tables(self) -> list[list[list[int]]]:
        """Integer matrices for external inspection (exact reps only)."""
        return np.rint(self.kappas).astype(int).tolist()


def build_clifford7() -> CliffordRep7:
    """Left multiplication by ``e_1..e_7`` on ``O = R 1 + Im O`` (basis ``1, e_1, ..., e_7``)."""
    phi = _octonion_tensor()
    K = np.zeros((7, 8, 8), dtype=int)
    for i in range(7):
        K[i, i + 1, 0] = 1          # e_i * 1 = e_i
        K[i, 0, i + 1] = -1         # e_i * e_i = -1
        K[i, 1:, 1:] = phi[i].T     # e_i * e_j = sum_k phi_ijk e_k
    return CliffordRep7(K)


def north_pole() -> np.ndarray:
    x = np.zeros(8)
    x[0] = 1.0
    return x


def _on_sphere(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (8,) or abs(np.linalg.norm(x) - 1.0) > SPHERE_TOL:
        raise InvalidInputError("point must be a unit vector in R^8")
    return x


def sample_sphere(count: int, seed: int) -> np.ndarray:
    """``count`` seeded points on ``S^7`` (normalized Gaussians), shape ``(count, 8)``."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((count, 8))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def killing_frame(rep: CliffordRep7, x) -> np.ndarray:
    """Rows ``V_i(x) = kappa_i x``."""
    x = _on_sphere(x)
    return np.einsum("iab,b->ia", rep.kappas, x)


def torsion_array_at(rep: CliffordRep7, x) -> np.ndarray:
    """Dense ``T[i, j, k] = 2 <kappa_i kappa_j x, kappa_k x>``."""
    V = killing_frame(rep, x)
    KK = np.einsum("iab,jb->ija", rep.kappas, V)
    return 2.0 * np.einsum("ija,ka->ijk", KK, V)


def torsion_at(rep: CliffordRep7, x) -> AltForm:
    """Torsion 3-form at ``x`` in the parallel frame ``V_0..V_6``."""
    return AltForm.from_array(torsion_array_at(rep, x))


def flow(rep: CliffordRep7, x, k: int, t: float) -> np.ndarray:
    """Exact flow of ``V_k``: ``cos(t) x + sin(t) kappa_k x``."""
    x = _on_sphere(x)
    return np.cos(t) * x + np.sin(t) * (rep.kappas[k] @ x)


def coefficient_derivative_array(rep: CliffordRep7, x) -> np.ndarray:
    """``D[k, i, j, l] = V_k(T_ijl)`` in closed form.

    Differentiating ``2 <kappa_i kappa_j x, kappa_l x>`` along ``x' = kappa_k x`` gives
    ``2 <kappa_i kappa_j kappa_k x, kappa_l x> + 2 <kappa_i kappa_j x, kappa_l kappa_k x>``.
    """
    V = killing_frame(rep, x)
    K = rep.kappas
    KV = np.einsum("iab,jb->ija", K, V)             # kappa_i kappa_j x
    KKV = np.einsum("iab,jkb->ijka", K, KV)         # kappa_i kappa_j kappa_k x
    first = np.einsum("ijka,la->kijl", KKV, V)
    second = np.einsum("ija,lka->kijl", KV, KV)
    return 2.0 * (first + second)


def coefficient_derivative(rep: CliffordRep7, x, i: int, j: int, l: int, k: int) -> float:
    """Derivative of the coefficient ``T_ijl`` along ``V_k`` at ``x``."""
    return float(coefficient_derivative_array(rep, x)[k, i, j, l])


def fd_coefficient_derivative_array(rep: CliffordRep7, x, h: float = 1e-4) -> np.ndarray:
    """Central differences of ``T_ijl`` along the exact flows; same layout as the closed form."""
    x = _on_sphere(x)
    out = np.empty((7, 7, 7, 7))
    for k in range(7):
        out[k] = (torsion_array_at(rep, flow(rep, x, k, h))
                  - torsion_array_at(rep, flow(rep, x, k, -h))) / (2.0 * h)
    return out


def levi_civita_check(rep: CliffordRep7, x, h: float = 1e-4) -> float:
    """Compare two descriptions of ``nabla^g_{V_i} V_j``.

    Oracle: tangential part of the ambient derivative of ``V_j`` along the flow of ``V_i``
    (central differences). Model: ``-1/2 T(V_i, V_j)`` rebuilt from :func:`torsion_at`,
    which is ``kappa_j kappa_i x`` for ``i != j`` and ``0`` for ``i == j``.
    """
    x = _on_sphere(x)
    V = killing_frame(rep, x)
    T = torsion_array_at(rep, x)
    worst = 0.0
    for i in range(7):
        plus = killing_frame(rep, flow(rep, x, i, h))
        minus = killing_frame(rep, flow(rep, x, i, -h))
        D = (plus - minus) / (2.0 * h)               # rows: ambient derivative of V_j
        D = D - np.outer(D @ x, x)                    # tangential projection
        model = -0.5 * np.einsum("jk,ka->ja", T[i], V)
        worst = max(worst, float(np.abs(D - model).max()))
    return worst


def levi_civita_closed_form(rep: CliffordRep7, x) -> np.ndarray:
    """``L[i, j] = nabla^g_{V_i} V_j`` in R^8: ``kappa_j kappa_i x`` off the diagonal, 0 on it."""
    V = killing_frame(rep, x)
    L = np.einsum("jab,ib->ija", rep.kappas, V)
    L[np.arange(7), np.arange(7)] = 0.0
    return L


def frame_family(rep: CliffordRep7, A, x) -> AltForm:
    """Torsion coefficients in the rotated parallel frame ``W_a = sum_j A[a, j] V_j``."""
    A = np.asarray(A, dtype=float)
    if A.shape != (7, 7) or np.abs(A.T @ A - np.eye(7)).max() > 1e-10:
        raise InvalidInputError("A must be orthogonal 7x7")
    return torsion_at(rep.rotated(A), x)


def transform_form(A, form: AltForm) -> AltForm:
    """Coefficients of ``form`` in the frame ``W_a = sum_j A[a, j] e_j``."""
    A = np.asarray(A, dtype=float)
    arr = form.to_array()
    for p in range(arr.ndim):
        arr = np.moveaxis(np.tensordot(A, arr, axes=([1], [p])), 0, p)
    return AltForm.from_array(arr)


def torsion_components(rep: CliffordRep7, x) -> dict[tuple[int, int, int], float]:
    """Increasing-index coefficients, for JSON streaming."""
    T = torsion_array_at(rep, x)
    return {I: float(T[I]) for I in multi_indices(7, 3)}
