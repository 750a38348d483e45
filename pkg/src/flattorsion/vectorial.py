"""Metric connections with vectorial torsion on coordinate patches.

``nabla_X Y = nabla^g_X Y + c (<X, Y> V - <V, Y> X)`` with ``c = convention = +1`` by
default; ``c = -1`` is the same family with ``V`` replaced by ``-V``. Everything is evaluated pointwise
from fourth-order central differences of the metric and of ``V``; curvature needs
nested stencils, so a point must sit at least ``4 * fd_step`` inside the coordinate box.

Index conventions: ``Gamma[l, j, k]`` is the ``d_l`` component of ``nabla_{d_j} d_k``;
``R[l, k, i, j]`` is the ``d_l`` component of ``R(d_i, d_j) d_k``. Residuals are reported as
max-abs components in a ``g``-orthonormal frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from .errors import InvalidInputError, NotFoundError, StencilError

_STENCIL = ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0))
_REACH = 2  # stencil radius in steps


@dataclass(frozen=True)
class MetricPatch:
    name: str
    dim: int
    metric_fn: Callable[[np.ndarray], np.ndarray]
    domain: tuple[tuple[float, float], ...]
    fd_step: float = 1e-3

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise InvalidInputError("patches are 2- or 3-dimensional")
        dom = tuple((float(a), float(b)) for a, b in self.domain)
        if len(dom) != self.dim or any(b <= a for a, b in dom):
            raise InvalidInputError("domain must be one (lo, hi) pair per coordinate")
        object.__setattr__(self, "domain", dom)
        extent = min(b - a for a, b in dom)
        if not 0 < self.fd_step <= 1e-3 * extent:
            raise InvalidInputError("fd_step must be positive and at most 1e-3 of the box size")

    def metric(self, p) -> np.ndarray:
        g = np.asarray(self.metric_fn(np.asarray(p, dtype=float)), dtype=float)
        if g.shape != (self.dim, self.dim):
            raise InvalidInputError("metric_fn returned the wrong shape")
        return g

    def check_metric(self, p) -> None:
        g = self.metric(p)
        if np.abs(g - g.T).max() > 1e-12 or np.linalg.eigvalsh(g).min() <= 0:
            raise InvalidInputError(f"metric is not symmetric positive definite at {p}")

    def require_interior(self, p, depth: int = 2) -> np.ndarray:
        """Raise :class:`StencilError` unless nested stencils of ``depth`` levels fit."""
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise InvalidInputError(f"point must have {self.dim} coordinates")
        margin = depth * _REACH * self.fd_step
        for x, (a, b) in zip(p, self.domain):
            if not a + margin <= x <= b - margin:
                raise StencilError(f"point {p.tolist()} is within {margin} of the boundary")
        return p

    def sample_points(self, count: int, seed: int) -> np.ndarray:
        """Seeded interior points, kept away from the boundary by 10% of each side."""
        rng = np.random.default_rng(seed)
        lo = np.array([a + 0.1 * (b - a) for a, b in self.domain])
        hi = np.array([b - 0.1 * (b - a) for a, b in self.domain])
        return lo + (hi - lo) * rng.random((count, self.dim))


@dataclass(frozen=True)
class VectorFieldPatch:
    """Contravariant components ``V^i(p)``."""

    components_fn: Callable[[np.ndarray], np.ndarray]
    name: str = "V"

    def __call__(self, p) -> np.ndarray:
        return np.asarray(self.components_fn(np.asarray(p, dtype=float)), dtype=float)


def _partials(f, p: np.ndarray, h: float) -> np.ndarray:
    """Stack of ``d_i f(p)`` along a new leading axis."""
    out = []
    for i in range(len(p)):
        e = np.zeros_like(p)
        e[i] = h
        out.append(sum(w * np.asarray(f(p + s * e), dtype=float) for s, w in _STENCIL) / h)
    return np.array(out)


def _christoffels_unchecked(patch: MetricPatch, p: np.ndarray) -> np.ndarray:
    g = patch.metric(p)
    dg = _partials(patch.metric, p, patch.fd_step)       # dg[m, a, b] = d_m g_ab
    first = 0.5 * (np.einsum("jmk->mjk", dg) + np.einsum("kmj->mjk", dg) - dg)
    return np.einsum("lm,mjk->ljk", np.linalg.inv(g), first)


def christoffels(patch: MetricPatch, p) -> np.ndarray:
    """Levi-Civita symbols ``Gamma[l, j, k]``."""
    p = patch.require_interior(p, depth=1)
    return _christoffels_unchecked(patch, p)


def _lower(patch: MetricPatch, V: VectorFieldPatch, p) -> np.ndarray:
    return patch.metric(p) @ V(p)


def _check_convention(convention: int) -> int:
    if convention not in (1, -1):
        raise InvalidInputError("convention must be +1 or -1")
    return convention


def vectorial_coefficients(patch: MetricPatch, V: VectorFieldPatch, p, convention: int = 1) -> np.ndarray:
    """Coefficients of ``nabla``: ``Gamma + c (g_jk V^l - V_k delta^l_j)``."""
    p = np.asarray(p, dtype=float)
    g, v = patch.metric(p), _check_convention(convention) * V(p)
    vl = g @ v
    return (_christoffels_unchecked(patch, p) + np.einsum("jk,l->ljk", g, v)
            - np.einsum("k,lj->ljk", vl, np.eye(patch.dim)))


def weyl_coefficients(patch: MetricPatch, V: VectorFieldPatch, p, sign: float = -1.0) -> np.ndarray:
    """Torsion-free connection ``nabla^g_X Y + s (<X,V> Y + <Y,V> X - <X,Y> V)``.

    For ``s = -c`` this is ``nabla - c V (x) Id``, the Weyl connection of the vectorial
    connection, so ``R^nabla = R^w + c dV (x) Id``.
    """
    p = np.asarray(p, dtype=float)
    g, v = patch.metric(p), V(p)
    vl = g @ v
    d = np.eye(patch.dim)
    corr = np.einsum("j,lk->ljk", vl, d) + np.einsum("k,lj->ljk", vl, d) - np.einsum("jk,l->ljk", g, v)
    return _christoffels_unchecked(patch, p) + sign * corr


def curvature_from_coefficients(coeff_fn, p: np.ndarray, h: float) -> np.ndarray:
    """``R[l, k, i, j]`` for the connection with coefficients ``coeff_fn(p)[l, j, k]``."""
    C = coeff_fn(p)
    dC = _partials(coeff_fn, p, h)                       # dC[i, l, j, k]
    R = np.einsum("iljk->lkij", dC) - np.einsum("jlik->lkij", dC)
    R = R + np.einsum("lim,mjk->lkij", C, C) - np.einsum("ljm,mik->lkij", C, C)
    return R


def levi_civita_curvature(patch: MetricPatch, p) -> np.ndarray:
    p = patch.require_interior(p)
    return curvature_from_coefficients(lambda q: _christoffels_unchecked(patch, q), p, patch.fd_step)


def vectorial_curvature(patch: MetricPatch, V: VectorFieldPatch, p, convention: int = 1) -> np.ndarray:
    p = patch.require_interior(p)
    return curvature_from_coefficients(
        lambda q: vectorial_coefficients(patch, V, q, convention), p, patch.fd_step)


def weyl_curvature(patch: MetricPatch, V: VectorFieldPatch, p, sign: float) -> np.ndarray:
    p = patch.require_interior(p)
    return curvature_from_coefficients(lambda q: weyl_coefficients(patch, V, q, sign), p, patch.fd_step)


def _frame(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``E`` with ``E^T g E = Id`` and its inverse."""
    E = np.linalg.inv(np.linalg.cholesky(g)).T
    return E, np.linalg.inv(E)


def _to_frame(g: np.ndarray, tensor: np.ndarray, contravariant: int = 1) -> np.ndarray:
    """Components in an orthonormal frame; the first ``contravariant`` slots are upper."""
    E, Einv = _frame(g)
    out = tensor
    for slot in range(tensor.ndim):
        M = Einv if slot < contravariant else E.T
        out = np.moveaxis(np.tensordot(M, out, axes=([1], [slot])), 0, slot)
    return out


def _max_abs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def dV(patch: MetricPatch, V: VectorFieldPatch, p) -> np.ndarray:
    """``(dV)_ij = d_i V_j - d_j V_i`` for the metric dual 1-form."""
    p = patch.require_interior(p, depth=1)
    dv = _partials(lambda q: _lower(patch, V, q), p, patch.fd_step)     # dv[i, j] = d_i V_j
    return dv - dv.T


def nabla_g_V(patch: MetricPatch, V: VectorFieldPatch, p) -> np.ndarray:
    """``N[l, j]``: components of ``nabla^g_{d_j} V``."""
    p = patch.require_interior(p, depth=1)
    return _partials(V, p, patch.fd_step).T + np.einsum("ljm,m->lj", _christoffels_unchecked(patch, p), V(p))


def nabla_V(patch: MetricPatch, V: VectorFieldPatch, p, convention: int = 1) -> np.ndarray:
    """``nabla_X V = nabla^g_X V + c (<X, V> V - |V|^2 X)`` as ``N[l, j]``."""
    p = np.asarray(p, dtype=float)
    g, v = patch.metric(p), V(p)
    c = _check_convention(convention)
    return nabla_g_V(patch, V, p) + c * (np.outer(v, g @ v) - (v @ g @ v) * np.eye(patch.dim))


def divergence(patch: MetricPatch, V: VectorFieldPatch, p) -> float:
    """``div^g V = (1 / sqrt(det g)) d_i (sqrt(det g) V^i)``."""
    p = patch.require_interior(p, depth=1)
    dens = lambda q: np.sqrt(np.linalg.det(patch.metric(q))) * V(q)  # noqa: E731
    return float(np.trace(_partials(dens, p, patch.fd_step)) / np.sqrt(np.linalg.det(patch.metric(p))))


def gaussian_curvature(patch: MetricPatch, p) -> float:
    if patch.dim != 2:
        raise InvalidInputError("Gaussian curvature needs a 2-dimensional patch")
    return sectional_curvatures(patch, p)[0, 1]


def sectional_curvatures(patch: MetricPatch, p) -> np.ndarray:
    """``K[a, b]`` for planes spanned by pairs of orthonormal frame vectors."""
    p = patch.require_interior(p)
    g = patch.metric(p)
    Rf = _to_frame(g, levi_civita_curvature(patch, p))
    n = patch.dim
    K = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            if a != b:
                K[a, b] = Rf[a, b, a, b]      # <R(E_a, E_b) E_b, E_a>
    return K


def vectorial_curvature_residual(patch: MetricPatch, V: VectorFieldPatch, p, convention: int = 1) -> float:
    """Compare ``R^g`` with the expression in ``V`` and ``nabla V`` valid for flat ``nabla``.

    ``R^g(X,Y)Z = <X,Z> nabla_Y V - <Y,Z> nabla_X V + <nabla_X V + |V|^2 X, Z> Y
                 - <nabla_Y V + |V|^2 Y, Z> X``.
    The scalar factors multiply the vectors ``Y`` and ``X``.
    """
    p = patch.require_interior(p)
    g, v = patch.metric(p), V(p)
    n = patch.dim
    N = nabla_V(patch, V, p, convention)        # N[l, j] = (nabla_{d_j} V)^l
    S = g @ (N + (v @ g @ v) * np.eye(n))       # S[z, x] = <nabla_x V + |V|^2 x, z>
    d = np.eye(n)
    rhs = (np.einsum("ik,lj->lkij", g, N) - np.einsum("jk,li->lkij", g, N)
           + np.einsum("ki,lj->lkij", S, d) - np.einsum("kj,li->lkij", S, d))
    return _max_abs(_to_frame(g, levi_civita_curvature(patch, p) - rhs))


def flatness_defect(patch: MetricPatch, V: VectorFieldPatch, p, convention: int = 1) -> float:
    """``max(|dV|, |R^nabla|)`` in an orthonormal frame."""
    p = patch.require_interior(p)
    g = patch.metric(p)
    return max(_max_abs(_to_frame(g, dV(patch, V, p), 0)),
               _max_abs(_to_frame(g, vectorial_curvature(patch, V, p, convention))))


class ParallelCheck(NamedTuple):
    defect: float
    predicted_curvature: float
    max_curvature_deviation: float


def parallel_V_check(patch: MetricPatch, V: VectorFieldPatch, p, convention: int = 1) -> ParallelCheck:
    """Size of ``nabla V`` and the curvature ``-|V|^2`` that a parallel ``V`` would force."""
    p = patch.require_interior(p)
    g, v = patch.metric(p), V(p)
    defect = _max_abs(_to_frame(g, nabla_V(patch, V, p, convention)))
    predicted = -float(v @ g @ v)
    K = sectional_curvatures(patch, p)
    off = ~np.eye(patch.dim, dtype=bool)
    return ParallelCheck(defect, predicted, float(np.abs(K[off] - predicted).max()))


def gauss_divergence_criterion(patch: MetricPatch, V: VectorFieldPatch, p, convention: int = 1) -> float:
    """``|G + c div^g V|``, i.e. ``G`` against the codifferential ``delta^g V`` for ``c = 1``.

    Vanishes exactly where the vectorial connection of a surface is flat.
    """
    if patch.dim != 2:
        raise InvalidInputError("the Gauss criterion is for surfaces")
    c = _check_convention(convention)
    return abs(gaussian_curvature(patch, p) + c * divergence(patch, V, p))


def weyl_relation_residual(patch: MetricPatch, V: VectorFieldPatch, p, convention: int = 1,
                           weyl_sign: float | None = None) -> float:
    """Residual of ``R^nabla(X,Y)Z = R^w(X,Y)Z + c dV(X,Y) Z``.

    This is an identity for the Weyl connection ``weyl_sign = -c`` (the default); other
    signs are kept for negative controls.
    """
    p = patch.require_interior(p)
    g = patch.metric(p)
    c = _check_convention(convention)
    sign = -c if weyl_sign is None else weyl_sign
    lhs = vectorial_curvature(patch, V, p, c)
    rhs = (weyl_curvature(patch, V, p, sign)
           + c * np.einsum("lk,ij->lkij", np.eye(patch.dim), dV(patch, V, p)))
    return _max_abs(_to_frame(g, lhs - rhs))


def smoothness_bound(patch: MetricPatch, V: VectorFieldPatch, p) -> float:
    """Largest second difference of ``V`` (a bounded-derivative proxy)."""
    p = patch.require_interior(p)
    h = patch.fd_step
    return _max_abs(_partials(lambda q: _partials(V, q, h), p, h))


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def _euclidean(n):
    return lambda p: np.eye(n)


def _half_space(p):
    return np.eye(len(p)) / p[-1] ** 2


def _round_sphere(p):
    theta = p[0]
    return np.diag([1.0, np.sin(theta) ** 2])


METRICS: dict[str, tuple[int, Callable]] = {
    "euclidean2": (2, _euclidean(2)),
    "euclidean3": (3, _euclidean(3)),
    "flat_torus": (2, _euclidean(2)),
    "hyperbolic2": (2, _half_space),
    "hyperbolic3": (3, _half_space),
    "sphere2": (2, _round_sphere),
}

DEFAULT_DOMAINS = {
    "euclidean2": ((-1.0, 1.0), (-1.0, 1.0)),
    "euclidean3": ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)),
    "flat_torus": ((0.0, 2 * np.pi), (0.0, 2 * np.pi)),
    "hyperbolic2": ((-1.0, 1.0), (0.5, 2.0)),
    "hyperbolic3": ((-1.0, 1.0), (-1.0, 1.0), (0.5, 2.0)),
    "sphere2": ((0.4, 2.7), (0.0, 2 * np.pi)),
}


def builtin_patch(name: str, domain=None, fd_step: float = 1e-3) -> MetricPatch:
    if name not in METRICS:
        raise NotFoundError(f"unknown metric {name!r}")
    dim, fn = METRICS[name]
    return MetricPatch(name, dim, fn, domain if domain is not None else DEFAULT_DOMAINS[name], fd_step)


def load_patch_json(source) -> MetricPatch:
    """Patch from ``{name, dim, metric, domain, fd_step}`` (dict, JSON text or path)."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = dict(source)
    patch = builtin_patch(data["metric"], data.get("domain"), float(data.get("fd_step", 1e-3)))
    if int(data["dim"]) != patch.dim:
        raise InvalidInputError(f"metric {data['metric']!r} is {patch.dim}-dimensional")
    return MetricPatch(data.get("name", data["metric"]), patch.dim, patch.metric_fn,
                       patch.domain, patch.fd_step)


def zero_field(dim: int) -> VectorFieldPatch:
    return VectorFieldPatch(lambda p: np.zeros(dim), "zero")


def vertical_field(dim: int, scale: float = 1.0) -> VectorFieldPatch:
    """``scale * x_last * d_{x_last}``; unit length on half-space patches."""
    def fn(p):
        v = np.zeros(dim)
        v[-1] = scale * p[-1]
        return v
    return VectorFieldPatch(fn, f"{scale:g}*vertical")


def constant_field(values) -> VectorFieldPatch:
    values = np.asarray(values, dtype=float)
    return VectorFieldPatch(lambda p: values.copy(), "constant")


def random_smooth_field(dim: int, seed: int, modes: int = 3) -> VectorFieldPatch:
    """Seeded trigonometric field ``sum a sin(k.p + c)``."""
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=(modes, dim))
    freq = rng.normal(size=(modes, dim))
    phase = rng.uniform(0, 2 * np.pi, size=modes)
    return VectorFieldPatch(lambda p: amp.T @ np.sin(freq @ p + phase), f"random{seed}")


@dataclass
class Fixture:
    patch: MetricPatch
    field: VectorFieldPatch
    flat: bool
    notes: str = field(default="")
