"""G2 structures on a parallelized 7-manifold, computed pointwise in a parallel frame.

A flat connection with parallel orthonormal frame ``e_i`` has ``[e_i, e_j] = -T(e_i, e_j)``.
Every form with constant frame coefficients is then parallel, and its exterior
derivative only sees the structure functions, so ``d`` reduces to linear algebra at a point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .clifford import OCTONION_TRIPLES, transform_form
from .errors import DegenerateInputError, InvalidInputError
from .lie import LieAlgebraSpan
from .multilinear import (
    AltForm,
    form_action,
    hodge,
    hodge_inverse,
    inner,
    interior,
    multi_indices,
    volume_form,
    wedge,
)

PHI = AltForm(7, 3, {I: float(s) for I, s in OCTONION_TRIPLES.items()})


def _check_seven(omega: AltForm) -> None:
    if not isinstance(omega, AltForm) or omega.degree != 3 or omega.dim != 7:
        raise InvalidInputError("need a 3-form on R^7")


def _so_basis(n: int) -> list[np.ndarray]:
    """Trace-orthonormal basis ``(E_ab - E_ba)/sqrt(2)`` of so(n), ``a < b``."""
    out = []
    for a, b in multi_indices(n, 2):
        E = np.zeros((n, n))
        E[a, b], E[b, a] = 1.0, -1.0
        out.append(E / math.sqrt(2.0))
    return out


def action_matrix(omega: AltForm) -> np.ndarray:
    """Columns are ``E . omega`` for the so(n) basis elements ``E``."""
    return np.column_stack([form_action(E, omega).vector() for E in _so_basis(omega.dim)])


def stabilizer_algebra(omega: AltForm, tol: float = 1e-9) -> LieAlgebraSpan:
    """Kernel of ``so(n) -> Lambda^k``, ``a -> a . omega``, with a trace-orthonormal basis."""
    n = omega.dim
    basis = _so_basis(n)
    M = action_matrix(omega)
    if M.size == 0 or not np.any(M):
        return LieAlgebraSpan(n, basis)
    null = scipy.linalg.null_space(M, rcond=tol)
    elems = [sum(c * E for c, E in zip(col, basis)) for col in null.T]
    return LieAlgebraSpan(n, elems)


def g2_bilinear(omega: AltForm, orientation: int = 1) -> np.ndarray:
    """``B[i, j]`` with ``(e_i _| w) ^ (e_j _| w) ^ w = 6 B[i, j] vol``.

    For the standard form this is the identity matrix; for ``-PHI`` it is ``-Id``.
    """
    _check_seven(omega)
    vol = volume_form(7, orientation)
    contr = [interior(e, omega) for e in np.eye(7)]
    B = np.empty((7, 7))
    for i in range(7):
        for j in range(i, 7):
            top = wedge(wedge(contr[i], contr[j]), omega)
            B[i, j] = B[j, i] = inner(top, vol) / 6.0
    return B


def genericity_check(omega: AltForm, orientation: int = 1, tol: float = 1e-9) -> bool:
    """Stabilizer of dimension 14 and positive definite ``B_omega`` for the given orientation.

    Positive definiteness (rather than mere definiteness) encodes compatibility with the
    oriented metric, which is what the characteristic torsion formula needs. ``-PHI``
    is therefore generic only for the reversed orientation.
    """
    _check_seven(omega)
    if stabilizer_algebra(omega, tol).dim != 14:
        return False
    return bool(np.linalg.eigvalsh(g2_bilinear(omega, orientation)).min() > tol)


def random_rotation(rng: np.random.Generator, n: int = 7) -> np.ndarray:
    """Haar-random element of SO(n)."""
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_generic_forms(count: int, seed: int) -> list[AltForm]:
    """Seeded forms in the SO(7)-orbit of ``PHI`` (constant coefficients, metric compatible)."""
    rng = np.random.default_rng(seed)
    return [transform_form(random_rotation(rng), PHI) for _ in range(count)]


# ---------------------------------------------------------------------------
# exterior calculus in a parallel frame
# ---------------------------------------------------------------------------

def _derivative_vectors(alpha: AltForm, derivatives) -> np.ndarray:
    n, k = alpha.dim, alpha.degree
    size = len(multi_indices(n, k))
    if derivatives is None:
        return np.zeros((n, size))
    if isinstance(derivatives, (list, tuple)) and derivatives and isinstance(derivatives[0], AltForm):
        for D in derivatives:
            if (D.dim, D.degree) != (n, k):
                raise InvalidInputError("derivative forms must match the form's dim and degree")
        derivatives = [D.vector() for D in derivatives]
    D = np.asarray(derivatives, dtype=float)
    if D.shape != (n, size):
        raise InvalidInputError(f"derivatives must have shape {(n, size)}, got {D.shape}")
    return D


def frame_d(alpha: AltForm, T: AltForm, derivatives=None) -> AltForm:
    """Exterior derivative of a form given by its frame coefficients at one point.

    ``derivatives[m]`` holds ``e_m`` applied to each coefficient (increasing-index order,
    or as an :class:`AltForm`); ``None`` means constant coefficients. With
    ``[e_a, e_b] = -T(e_a, e_b)`` the invariant formula becomes

        d alpha(e_J) = sum_i (-1)^i e_{J_i}(alpha_{J - J_i})
                       + sum_{i<j} (-1)^{i+j+1} sum_m T_{J_i J_j m} alpha(e_m, e_{J - J_i - J_j}).
    """
    n, k = alpha.dim, alpha.degree
    if T.degree != 3 or T.dim != n:
        raise InvalidInputError("torsion must be a 3-form of the same dimension")
    D = _derivative_vectors(alpha, derivatives)
    if k + 1 > n:
        return AltForm.zero(n, k + 1)
    J = np.array(multi_indices(n, k + 1), dtype=np.intp).reshape(-1, k + 1)
    out = np.zeros(len(J))

    if k >= 1 and np.any(D):
        pos = _position_lookup(n, k)
        for i in range(k + 1):
            rest = np.delete(J, i, axis=1)
            out += (-1) ** i * D[J[:, i], pos(rest)]

    Tarr = T.to_array()
    A = alpha.to_array()
    if k == 0:
        if np.any(D):
            out += D[J[:, 0], 0]
        return AltForm.from_vector(n, 1, out)
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            rest = np.delete(J, [i, j], axis=1)
            Tab = Tarr[J[:, i], J[:, j], :]                    # (N, n)
            Arest = A[(slice(None),) + tuple(rest.T)]          # (n, N)
            if Arest.ndim == 1:                                # k == 1: alpha(e_m) itself
                Arest = np.broadcast_to(Arest[:, None], (n, len(J)))
            out += (-1) ** (i + j + 1) * np.einsum("Nm,mN->N", Tab, Arest)
    return AltForm.from_vector(n, k + 1, out)


def _position_lookup(n: int, k: int):
    """Vectorized map from rows of increasing indices to their position."""
    weights = n ** np.arange(k - 1, -1, -1)
    table = np.full(n ** k, -1, dtype=np.intp)
    idx = np.array(multi_indices(n, k), dtype=np.intp).reshape(-1, k)
    table[idx @ weights] = np.arange(len(idx))
    return lambda rows: table[rows @ weights]


def codifferential(alpha: AltForm, T: AltForm, derivatives=None, orientation: int = 1) -> AltForm:
    """``delta = (-1)^k *^{-1} d *``, equal to ``-sum_i e_i _| nabla^g_{e_i}`` in flat space."""
    k = alpha.degree
    if k == 0:
        raise InvalidInputError("codifferential of a 0-form is undefined")
    D = _derivative_vectors(alpha, derivatives)
    star = hodge(alpha, orientation)
    Dstar = None
    if np.any(D):
        Dstar = np.array([hodge(AltForm.from_vector(alpha.dim, k, row), orientation).vector()
                          for row in D])
    return hodge_inverse(frame_d(star, T, Dstar), orientation) * (-1) ** k


def theta_from_delta(omega: AltForm, delta_omega: AltForm, tol: float = 1e-9):
    """Least-squares ``theta`` with ``-(theta _| omega) = delta_omega``; returns ``(theta, residual)``."""
    _check_seven(omega)
    if delta_omega.degree != 2 or delta_omega.dim != 7:
        raise InvalidInputError("delta_omega must be a 2-form on R^7")
    M = -np.column_stack([interior(e, omega).vector() for e in np.eye(7)])
    s = np.linalg.svd(M, compute_uv=False)
    if s.min() <= tol * max(1.0, s.max()):
        raise DegenerateInputError("theta extraction is rank deficient for this 3-form")
    theta, *_ = np.linalg.lstsq(M, delta_omega.vector(), rcond=None)
    residual = float(np.linalg.norm(M @ theta - delta_omega.vector()))
    return theta, residual


def characteristic_torsion(omega: AltForm, T: AltForm, orientation: int = 1,
                           scalar_sign: float = 1.0) -> AltForm:
    """``T^c = -*d omega + 1/6 <d omega, * omega> omega + *(theta ^ omega)`` for constant ``omega``.

    ``theta`` solves ``delta omega = -(theta _| omega)``. ``scalar_sign=-1`` flips the middle
    term; that variant does not reproduce the torsion of a parallel G2 structure and is
    kept only as a negative control.
    """
    _check_seven(omega)
    d_omega = frame_d(omega, T)
    delta_omega = codifferential(omega, T, orientation=orientation)
    theta, _ = theta_from_delta(omega, delta_omega)
    star_omega = hodge(omega, orientation)
    theta_form = AltForm.from_vector_field(theta)
    return (-hodge(d_omega, orientation)
            + omega * (scalar_sign * inner(d_omega, star_omega) / 6.0)
            + hodge(wedge(theta_form, omega), orientation))


@dataclass(frozen=True)
class FGResiduals:
    """Distances of a G2 structure from three special torsion classes."""

    r_nearly_parallel: float
    r_cocalibrated: float
    r_lcp: float

    def general_type(self, threshold: float = 1e-9) -> bool:
        return min(self.r_nearly_parallel, self.r_cocalibrated, self.r_lcp) > threshold

    def to_json(self) -> dict:
        return {"r_nearly_parallel": self.r_nearly_parallel,
                "r_cocalibrated": self.r_cocalibrated,
                "r_lcp": self.r_lcp}


def fg_type_residuals(omega: AltForm, d_omega: AltForm, delta_omega: AltForm,
                      orientation: int = 1) -> FGResiduals:
    """Pointwise residuals: ``min_l |d w - l *w|``, ``|delta w|``, ``min_theta |d w - theta ^ w|``."""
    _check_seven(omega)
    if d_omega.degree != 4 or delta_omega.degree != 2:
        raise InvalidInputError("need d omega (degree 4) and delta omega (degree 2)")
    dv = d_omega.vector()
    s = hodge(omega, orientation).vector()
    lam = (dv @ s) / (s @ s) if s @ s > 0 else 0.0
    r_np = float(np.linalg.norm(dv - lam * s))
    W = np.column_stack([wedge(AltForm.from_vector_field(e), omega).vector() for e in np.eye(7)])
    coef, *_ = np.linalg.lstsq(W, dv, rcond=None)
    r_lcp = float(np.linalg.norm(dv - W @ coef))
    return FGResiduals(r_np, delta_omega.norm(), r_lcp)
