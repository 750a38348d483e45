"""Curvature identities that are polynomial in a torsion 3-form with constant frame coefficients.

All formulas assume ``nabla = nabla^g + 1/2 T(X, Y, -)`` is flat; they are evaluated for any
``T`` so that negative controls can show where they break.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError, InvalidInputError
from .multilinear import (
    AltForm,
    form_action,
    inner,
    interior,
    skew_from_two_form,
    tensor_action,
    wedge,
)


def _check_torsion(T: AltForm) -> None:
    if not isinstance(T, AltForm) or T.degree != 3:
        raise InvalidInputError("torsion must be an AltForm of degree 3")


def _vec(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise InvalidInputError(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def torsion_map(T: AltForm, x, y) -> np.ndarray:
    """The vector ``T(x, y)`` with ``<T(x, y), z> = T(x, y, z)``."""
    _check_torsion(T)
    x, y = _vec(x, T.dim), _vec(y, T.dim)
    return np.einsum("abc,a,b->c", T.to_array(), x, y)


def pairing_array(T: AltForm) -> np.ndarray:
    """``P[a, b, c, d] = <T(e_a, e_b), T(e_c, e_d)>``."""
    A = T.to_array()
    return np.einsum("abm,cdm->abcd", A, A)


def sigma_contraction(T: AltForm) -> AltForm:
    """``sigma_T = 1/2 sum_i (e_i _| T) ^ (e_i _| T)``."""
    _check_torsion(T)
    n = T.dim
    sigma = AltForm.zero(n, 4)
    for e in np.eye(n):
        a = interior(e, T)
        sigma = sigma + wedge(a, a)
    return sigma * 0.5


def sigma_pairing(T: AltForm, x, y, z, v) -> float:
    """Three-term pairing definition of ``sigma_T(x, y, z, v)``."""
    tm = lambda a, b: torsion_map(T, a, b)  # noqa: E731
    return float(tm(x, y) @ tm(z, v) + tm(y, z) @ tm(x, v) + tm(z, x) @ tm(y, v))


def sigma_array(T: AltForm) -> np.ndarray:
    """Dense 4-array of the pairing definition, for bulk comparisons."""
    P = pairing_array(T)
    return P + np.einsum("bcad->abcd", P) + np.einsum("cabd->abcd", P)


def ricci_from_torsion(T: AltForm) -> np.ndarray:
    _check_torsion(T)
    A = T.to_array()
    return 0.25 * np.einsum("aim,bim->ab", A, A)


def scalar_from_torsion(T: AltForm) -> float:
    """``Scal^g = 3/2 |T|^2``."""
    _check_torsion(T)
    return 1.5 * inner(T, T)


class CurvatureTensor:
    """Covariant curvature ``R[i, j, k, l] = <R(e_i, e_j) e_k, e_l>``.

    Sign convention: ``R(X, Y, Y, X) = K(X, Y) * gram(X, Y)``.
    """

    def __init__(self, entries):
        entries = np.asarray(entries, dtype=float)
        n = entries.shape[0]
        if entries.shape != (n, n, n, n):
            raise InvalidInputError("curvature entries must have shape (n, n, n, n)")
        self.entries = entries
        self.dim = n

    def __call__(self, x, y, z, v) -> float:
        return float(np.einsum("ijkl,i,j,k,l->", self.entries, x, y, z, v))

    def symmetry_residual(self) -> float:
        R = self.entries
        return float(max(
            np.abs(R + R.transpose(1, 0, 2, 3)).max(),
            np.abs(R + R.transpose(0, 1, 3, 2)).max(),
            np.abs(R - R.transpose(2, 3, 0, 1)).max(),
        ))

    def bianchi_residual(self) -> float:
        R = self.entries
        # R_ijkl + R_jkil + R_kijl
        cyc = R + np.einsum("jkil->ijkl", R) + np.einsum("kijl->ijkl", R)
        return float(np.abs(cyc).max())

    def ricci(self) -> np.ndarray:
        """``Ric(Y, Z) = sum_i R(e_i, Y, Z, e_i)``."""
        return np.einsum("ijki->jk", self.entries)

    def sectional(self, x, y) -> float:
        x, y = np.asarray(x, float), np.asarray(y, float)
        gram = (x @ x) * (y @ y) - (x @ y) ** 2
        if gram <= 1e-14 * max(1.0, (x @ x) * (y @ y)):
            raise DegenerateInputError("vectors span a degenerate plane")
        return self(x, y, y, x) / gram

    def to_json(self) -> list:
        return self.entries.tolist()

    @classmethod
    def constant_curvature(cls, n: int, kappa: float = 1.0) -> "CurvatureTensor":
        """Round space form: ``R(X,Y)Z = kappa (<Y,Z> X - <X,Z> Y)``."""
        d = np.eye(n)
        R = kappa * (np.einsum("il,jk->ijkl", d, d) - np.einsum("ik,jl->ijkl", d, d))
        return cls(R)


def riemann_from_torsion(T: AltForm) -> CurvatureTensor:
    """``R(X,Y,Z,V) = -1/6 <T(X,Y),T(Z,V)> + 1/12 <T(Y,Z),T(X,V)> + 1/12 <T(Z,X),T(Y,V)>``."""
    _check_torsion(T)
    P = pairing_array(T)
    R = (-P / 6.0
         + np.einsum("bcad->abcd", P) / 12.0
         + np.einsum("cabd->abcd", P) / 12.0)
    return CurvatureTensor(R)


def sectional_from_torsion(T: AltForm, x, y) -> float:
    """``K(x, y) = |T(x, y)|^2 / (4 gram(x, y))``."""
    _check_torsion(T)
    x, y = _vec(x, T.dim), _vec(y, T.dim)
    gram = (x @ x) * (y @ y) - (x @ y) ** 2
    if gram <= 1e-14 * max(1.0, (x @ x) * (y @ y)):
        raise DegenerateInputError("vectors span a degenerate plane")
    t = torsion_map(T, x, y)
    return float(t @ t) / (4.0 * gram)


def nabla_T(T: AltForm, sigma: AltForm, v) -> AltForm:
    """``nabla_V T = -1/3 (V _| sigma_T)``, i.e. ``(nabla_V T)(X,Y,Z) = 1/3 sigma_T(X,Y,Z,V)``."""
    _check_torsion(T)
    return interior(_vec(v, T.dim), sigma) * (-1.0 / 3.0)


def nabla_g_T(T: AltForm, sigma: AltForm, v) -> AltForm:
    """Levi-Civita derivative ``nabla^g_V T = +1/6 (V _| sigma_T)``."""
    _check_torsion(T)
    return interior(_vec(v, T.dim), sigma) * (1.0 / 6.0)


def two_form_action(beta: AltForm, T: AltForm) -> AltForm:
    """so(n)-action of a 2-form on a 3-form; ``(V _| T)[T] = sigma_T(., ., ., V)``."""
    if beta.dim != T.dim:
        raise InvalidInputError("dimension mismatch")
    return form_action(skew_from_two_form(beta), T)


def dT_flat(sigma: AltForm) -> AltForm:
    """``dT = 2/3 sigma_T`` for the torsion of a flat connection."""
    if sigma.degree != 4:
        raise InvalidInputError("sigma must be a 4-form")
    return sigma * (2.0 / 3.0)


def nabla_T_array(T: AltForm, sigma: AltForm) -> np.ndarray:
    """``A[x, y, z, v] = (nabla_{e_v} T)(e_x, e_y, e_z)``."""
    n = T.dim
    return np.stack([nabla_T(T, sigma, e).to_array() for e in np.eye(n)], axis=-1)


def bianchi_residual(T: AltForm) -> float:
    """Max of ``|dT - sigma_T + (nabla_V T)(X,Y,Z)|`` over frame quadruples."""
    sigma = sigma_contraction(T)
    res = dT_flat(sigma).to_array() - sigma.to_array() + nabla_T_array(T, sigma)
    return float(np.abs(res).max()) if res.size else 0.0


def curvature_commutator_residual(T: AltForm, x) -> float:
    """Size of ``[x _| T, R^g]``: max entry of the derivation action on ``R^g``."""
    _check_torsion(T)
    M = skew_from_two_form(interior(_vec(x, T.dim), T))
    R = riemann_from_torsion(T).entries
    return float(np.abs(tensor_action(M, R)).max())
