"""Lie-algebraic side of skew torsion: generated algebras, irreducibility, Jacobi defect.

A structure-constant table ``c[i, j, k] = <[e_i, e_j], e_k>`` of a compact Lie algebra with
bi-invariant metric defines the flat Cartan-Schouten torsion ``T = -c``.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, NotFoundError
from .multilinear import AltForm, interior, skew_from_two_form
from .torsion import riemann_from_torsion


def trace_inner(A, B) -> float:
    return float(np.sum(np.asarray(A) * np.asarray(B)))


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


@dataclass(frozen=True)
class StructureConstants:
    """Totally antisymmetric structure constants in an orthonormal basis."""

    c: np.ndarray
    name: str = ""

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        n = c.shape[0] if c.ndim else 0
        if c.shape != (n, n, n):
            raise InvalidInputError("structure constants must have shape (n, n, n)")
        for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0)):
            if np.abs(c + c.transpose(perm)).max(initial=0.0) > 1e-12:
                raise InvalidInputError(f"structure constants '{self.name}' are not totally skew")
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def torsion(self) -> AltForm:
        """Torsion of the flat (-)-connection, ``T(e_k, e_l) = -[e_k, e_l]``."""
        return AltForm.from_array(-self.c) if self.dim >= 3 else AltForm.zero(self.dim, 3)

    def jacobiator(self) -> np.ndarray:
        """``J[i,j,k,l] = <[[e_i,e_j],e_k] + cyclic, e_l>``."""
        c = self.c
        cc = np.einsum("ijm,mkl->ijkl", c, c)
        return cc + np.einsum("jkil->ijkl", cc) + np.einsum("kijl->ijkl", cc)

    def jacobi_defect(self) -> float:
        J = self.jacobiator()
        return float(np.abs(J).max()) if J.size else 0.0

    def to_json(self) -> dict:
        entries = [[i, j, k, float(self.c[i, j, k])]
                   for i, j, k in itertools.combinations(range(self.dim), 3)
                   if self.c[i, j, k] != 0.0]
        return {"name": self.name, "dim": self.dim, "entries": entries}


def structure_constants_from_entries(name: str, dim: int, entries, *,
                                     jacobi_tol: float = 1e-12) -> StructureConstants:
    """Fill a skew table from ``[i, j, k, value]`` rows, then require the Jacobi identity."""
    c = np.zeros((dim, dim, dim))
    filled = np.zeros((dim, dim, dim), dtype=bool)
    for row in entries:
        i, j, k, value = int(row[0]), int(row[1]), int(row[2]), float(row[3])
        if len({i, j, k}) < 3:
            if value != 0.0:
                raise InvalidInputError(f"repeated index with nonzero value in {row}")
            continue
        for perm in itertools.permutations(range(3)):
            idx = tuple((i, j, k)[p] for p in perm)
            sign = 1.0 if perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1.0
            if filled[idx] and not math.isclose(c[idx], sign * value, abs_tol=1e-12):
                raise InvalidInputError(f"entry {row} contradicts antisymmetry")
            c[idx] = sign * value
            filled[idx] = True
    sc = StructureConstants(c, name)
    if sc.jacobi_defect() > jacobi_tol:
        raise InvalidInputError(f"'{name}' violates the Jacobi identity "
                                f"(defect {sc.jacobi_defect():.3g})")
    return sc


def load_catalog_json(source) -> StructureConstants:
    """Load ``{name, dim, entries: [[i, j, k, value], ...]}`` from a dict, path or JSON text."""
    if isinstance(source, dict):
        data = source
    elif isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        data = json.loads(Path(source).read_text())
    else:
        data = json.loads(source)
    return structure_constants_from_entries(data["name"], int(data["dim"]), data["entries"])


_SQ3 = math.sqrt(3.0) / 2.0
_SU3 = [  # Gell-Mann f_abc, 0-based
    (0, 1, 2, 1.0), (0, 3, 6, 0.5), (0, 4, 5, -0.5), (1, 3, 5, 0.5), (1, 4, 6, 0.5),
    (2, 3, 4, 0.5), (2, 5, 6, -0.5), (3, 4, 7, _SQ3), (5, 6, 7, _SQ3),
]


def catalog(name: str) -> StructureConstants:
    """Verified structure constants: ``su2``, ``su3``, ``so4`` or ``abelian(n)``.

    ``su2`` is scaled so that the group is the unit 3-sphere (``c_012 = 2``); ``so4`` is
    ``su2 + su2`` on disjoint index blocks.
    """
    key = name.strip().lower()
    m = re.fullmatch(r"abelian\(?(\d+)\)?", key)
    if m:
        n = int(m.group(1))
        return StructureConstants(np.zeros((n, n, n)), f"abelian({n})")
    if key == "su2":
        return structure_constants_from_entries("su2", 3, [(0, 1, 2, 2.0)])
    if key == "su3":
        return structure_constants_from_entries("su3", 8, _SU3)
    if key == "so4":
        return structure_constants_from_entries("so4", 6, [(0, 1, 2, 2.0), (3, 4, 5, 2.0)])
    raise NotFoundError(name)


# ---------------------------------------------------------------------------
# generated Lie algebras
# ---------------------------------------------------------------------------

@dataclass
class LieAlgebraSpan:
    """Subalgebra of so(n) with a trace-orthonormal basis."""

    dim_ambient: int
    basis: list[np.ndarray]
    generators: list[np.ndarray] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> np.ndarray:
        """Rows are the flattened basis elements."""
        if not self.basis:
            return np.zeros((0, self.dim_ambient ** 2))
        return np.array([b.ravel() for b in self.basis])

    def residual(self, M) -> float:
        """Distance of ``M`` from the span (trace norm)."""
        v = np.asarray(M, dtype=float).ravel()
        Q = self.basis_matrix()
        return float(np.linalg.norm(v - Q.T @ (Q @ v)))

    def closure_residual(self) -> float:
        res = 0.0
        for A, B in itertools.combinations(self.basis, 2):
            res = max(res, self.residual(commutator(A, B)))
        return res


def _append_orthonormal(Q: list[np.ndarray], M: np.ndarray, thresh: float) -> bool:
    v = M.astype(float).copy()
    for _ in range(2):
        for q in Q:
            v -= trace_inner(q, v) * q
    nv = math.sqrt(trace_inner(v, v))
    if nv <= thresh:
        return False
    Q.append(v / nv)
    return True


def bracket_closure(generators, tol: float = 1e-10) -> LieAlgebraSpan:
    """Smallest bracket-closed subspace of gl(n) containing ``generators``."""
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    gens = [np.asarray(g, dtype=float) for g in generators]
    if not gens:
        raise InvalidInputError("need at least one generator")
    n = gens[0].shape[0]
    if any(g.shape != (n, n) for g in gens):
        raise InvalidInputError("generators must share a square shape")
    thresh = tol * (1.0 + max(math.sqrt(trace_inner(g, g)) for g in gens))
    Q: list[np.ndarray] = []
    for g in gens:
        _append_orthonormal(Q, g, thresh)
    i = 0
    while i < len(Q):
        for j in range(i):
            _append_orthonormal(Q, commutator(Q[j], Q[i]), thresh)
        i += 1
    return LieAlgebraSpan(n, Q, gens)


def torsion_generators(T: AltForm) -> list[np.ndarray]:
    """The endomorphisms ``e_i _| T`` of R^n."""
    return [skew_from_two_form(interior(e, T)) for e in np.eye(T.dim)]


def generated_algebra(T: AltForm, tol: float = 1e-10) -> LieAlgebraSpan:
    """``Lie{X _| T}`` inside so(n)."""
    return bracket_closure(torsion_generators(T), tol)


@dataclass
class IrreducibilityCertificate:
    irreducible: bool
    commutant_dim: int
    invariant_subspace: np.ndarray | None  # orthonormal columns, when reducible
    orbit_dims: list[int]
    seed: int

    def __bool__(self) -> bool:
        return self.irreducible


def _nullspace(A: np.ndarray, tol: float) -> np.ndarray:
    if A.size == 0:
        return np.eye(A.shape[1])
    _, s, vt = np.linalg.svd(A)
    scale = max(1.0, s[0] if s.size else 1.0)
    rank = int(np.sum(s > tol * scale))
    return vt[rank:].T


def commutant(span: LieAlgebraSpan, tol: float = 1e-9) -> list[np.ndarray]:
    """Basis of ``{C : [C, B] = 0 for all B in span}``."""
    n = span.dim_ambient
    rows = []
    for B in span.basis:
        # vec(CB - BC) for C = E_ab, stacked column-wise over (a, b)
        cols = []
        for a in range(n):
            for b in range(n):
                E = np.zeros((n, n))
                E[a, b] = 1.0
                cols.append(commutator(E, B).ravel())
        rows.append(np.array(cols).T)
    N = _nullspace(np.vstack(rows), tol)
    return [N[:, i].reshape(n, n) for i in range(N.shape[1])]


def orbit_span(span: LieAlgebraSpan, v, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the smallest invariant subspace containing ``v``."""
    v = np.asarray(v, dtype=float)
    W = [v / np.linalg.norm(v)]
    i = 0
    while i < len(W):
        for B in span.basis:
            w = B @ W[i]
            for _ in range(2):
                for q in W:
                    w = w - (q @ w) * q
            nw = np.linalg.norm(w)
            if nw > tol:
                W.append(w / nw)
        i += 1
    return np.array(W).T


def is_irreducible(span: LieAlgebraSpan, seed: int = 0, tol: float = 1e-9,
                   n_starts: int = 3) -> IrreducibilityCertificate:
    """Decide irreducibility of the defining action on R^n.

    A proper invariant subspace exists iff the commutant contains a non-scalar symmetric
    element; its eigenspaces are then invariant. Commutants isomorphic to C or H (only
    skew non-scalar elements) leave the representation irreducible over R. Seeded orbit
    spans confirm the verdict either way.
    """
    if span.dim == 0:
        raise InvalidInputError("span is empty")
    n = span.dim_ambient
    rng = np.random.default_rng(seed)
    comm = commutant(span, tol)
    sym = []
    for C in comm:
        S = 0.5 * (C + C.T)
        S = S - np.trace(S) / n * np.eye(n)
        sym.append(S)
    sym_rank = 0
    if sym:
        sym_rank = int(np.linalg.matrix_rank(np.array([s.ravel() for s in sym]), tol=tol))

    if sym_rank == 0:
        dims = [orbit_span(span, rng.standard_normal(n), tol).shape[1] for _ in range(n_starts)]
        return IrreducibilityCertificate(all(d == n for d in dims), len(comm), None, dims, seed)

    S = sum(rng.standard_normal() * s for s in sym)
    evals, evecs = np.linalg.eigh(S)
    groups: list[list[int]] = [[0]]
    for i in range(1, n):
        if evals[i] - evals[groups[-1][-1]] > 1e-6 * max(1.0, np.abs(evals).max()):
            groups.append([i])
        else:
            groups[-1].append(i)
    blocks = [evecs[:, g] for g in groups]
    # Deterministic choice: the block carrying most of e_0.
    sub = max(blocks, key=lambda U: float(U[0] @ U[0]))
    sub = _canonical_basis(sub)
    dims = [orbit_span(span, sub @ rng.standard_normal(sub.shape[1]), tol).shape[1]
            for _ in range(n_starts)]
    return IrreducibilityCertificate(False, len(comm), sub, dims, seed)


def _canonical_basis(U: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``range(U)`` independent of eigensolver phases."""
    P = U @ U.T
    _, _, piv = scipy.linalg.qr(P, pivoting=True)
    Q, R = np.linalg.qr(P[:, sorted(piv[:U.shape[1]])])
    return Q * np.sign(np.diag(R))


# ---------------------------------------------------------------------------
# dichotomy checks
# ---------------------------------------------------------------------------

def jacobi_defect(T: AltForm) -> float:
    """Max over frame triples of the Jacobiator for ``[X, Y] := -T(X, Y)``.

    The Jacobiator's ``e_l``-component equals ``sigma_T(e_i, e_j, e_k, e_l)``, so the
    defect vanishes exactly when ``sigma_T`` does.
    """
    if T.degree != 3:
        raise InvalidInputError("need a 3-form")
    c = -T.to_array()
    cc = np.einsum("ijm,mkl->ijkl", c, c)
    J = cc + np.einsum("jkil->ijkl", cc) + np.einsum("kijl->ijkl", cc)
    return float(np.abs(J).max()) if J.size else 0.0


def frame_curvature_check(c: StructureConstants) -> float:
    """Max deviation of ``R^g(e_i, e_j) e_k`` from ``-1/4 [[e_i, e_j], e_k]``."""
    if not isinstance(c, StructureConstants):
        c = StructureConstants(c)
    if c.dim < 3:
        return 0.0
    R = riemann_from_torsion(c.torsion()).entries
    rhs = -0.25 * np.einsum("ijm,mkl->ijkl", c.c, c.c)
    return float(np.abs(R - rhs).max())
