"""Exterior algebra on R^n in a fixed oriented orthonormal frame.

Conventions used everywhere in the package:

* Frame indices are 0-based, ``0 .. n-1``.
* A k-form is stored by its components on strictly increasing multi-indices,
  ``a = sum_I a_I e_I``, and ``e_I`` evaluates to 1 on ``(e_{I_1}, ..., e_{I_k})``
  (determinant convention, no ``1/k!``).
* ``<a, b> = sum_I a_I b_I`` over increasing ``I``; hence ``<e_I, e_I> = 1``.
* ``*e_I = sign(I, I^c) e_{I^c}`` for the orientation ``e_0 ^ ... ^ e_{n-1}``.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidInputError

DEFAULT_TOL = 1e-10


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# cached index tables
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def multi_indices(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All strictly increasing k-tuples from ``range(n)`` in lexicographic order."""
    return tuple(itertools.combinations(range(n), k))


@lru_cache(maxsize=None)
def _position(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {I: p for p, I in enumerate(multi_indices(n, k))}


@lru_cache(maxsize=None)
def _index_array(n: int, k: int) -> np.ndarray:
    arr = np.array(multi_indices(n, k), dtype=np.intp)
    return arr.reshape(len(multi_indices(n, k)), k)


@lru_cache(maxsize=None)
def _wedge_table(n: int, k: int, l: int):
    pos = _position(n, k + l)
    ia, jb, kc, sg = [], [], [], []
    for a, I in enumerate(multi_indices(n, k)):
        sI = set(I)
        for b, J in enumerate(multi_indices(n, l)):
            if sI.intersection(J):
                continue
            ia.append(a)
            jb.append(b)
            kc.append(pos[tuple(sorted(I + J))])
            sg.append(permutation_sign(I + J))
    return (np.array(ia, dtype=np.intp), np.array(jb, dtype=np.intp),
            np.array(kc, dtype=np.intp), np.array(sg, dtype=float))


@lru_cache(maxsize=None)
def _interior_table(n: int, k: int):
    pos = _position(n, k - 1)
    src, slot, dst, sg = [], [], [], []
    for a, I in enumerate(multi_indices(n, k)):
        for p, i in enumerate(I):
            src.append(a)
            slot.append(i)
            dst.append(pos[I[:p] + I[p + 1:]])
            sg.append(-1.0 if p % 2 else 1.0)
    return (np.array(src, dtype=np.intp), np.array(slot, dtype=np.intp),
            np.array(dst, dtype=np.intp), np.array(sg))


@lru_cache(maxsize=None)
def _hodge_table(n: int, k: int):
    pos = _position(n, n - k)
    dst, sg = [], []
    full = set(range(n))
    for I in multi_indices(n, k):
        J = tuple(sorted(full - set(I)))
        dst.append(pos[J])
        sg.append(permutation_sign(I + J))
    return np.array(dst, dtype=np.intp), np.array(sg, dtype=float)


@lru_cache(maxsize=None)
def _dense_table(n: int, k: int):
    """Flat positions and signs of every permutation of every increasing index."""
    src, flat, sg = [], [], []
    strides = [n ** (k - 1 - s) for s in range(k)]
    for a, I in enumerate(multi_indices(n, k)):
        for perm in itertools.permutations(range(k)):
            J = [I[q] for q in perm]
            src.append(a)
            flat.append(sum(j * s for j, s in zip(J, strides)))
            sg.append(permutation_sign(perm))
    return (np.array(src, dtype=np.intp), np.array(flat, dtype=np.intp),
            np.array(sg, dtype=float))


# ---------------------------------------------------------------------------
# AltForm
# ---------------------------------------------------------------------------

class AltForm:
    """Alternating k-form on R^n with sparse increasing-index coefficients.

    Instances are immutable; arithmetic returns new forms.
    """

    __slots__ = ("_dim", "_degree", "_coeffs", "_vec")

    def __init__(self, dim: int, degree: int,
                 coeffs: Mapping[Sequence[int], float] | None = None):
        if dim < 0 or degree < 0:
            raise InvalidInputError(f"invalid dim/degree ({dim}, {degree})")
        clean: dict[tuple[int, ...], float] = {}
        for key, value in (coeffs or {}).items():
            key = tuple(int(i) for i in key)
            if len(key) != degree:
                raise InvalidInputError(f"index {key} has length != degree {degree}")
            if any(i < 0 or i >= dim for i in key):
                raise InvalidInputError(f"index {key} out of range for dim {dim}")
            sign = permutation_sign(key)
            if sign == 0:
                continue
            skey = tuple(sorted(key))
            clean[skey] = clean.get(skey, 0.0) + sign * float(value)
        self._dim = dim
        self._degree = degree
        self._coeffs = {I: clean[I] for I in sorted(clean) if clean[I] != 0.0}
        self._vec = None

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> "AltForm":
        return cls(dim, degree)

    @classmethod
    def basis(cls, dim: int, indices: Sequence[int], coeff: float = 1.0) -> "AltForm":
        """``coeff * e_{i1} ^ ... ^ e_{ik}`` (indices need not be sorted)."""
        return cls(dim, len(indices), {tuple(indices): coeff})

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec) -> "AltForm":
        """Build from the dense component vector over ``multi_indices(dim, degree)``."""
        vec = np.asarray(vec, dtype=float)
        idx = multi_indices(dim, degree)
        if vec.shape != (len(idx),):
            raise InvalidInputError(f"expected {len(idx)} components, got {vec.shape}")
        out = cls.__new__(cls)
        out._dim, out._degree = dim, degree
        out._coeffs = {I: float(v) for I, v in zip(idx, vec) if v != 0.0}
        out._vec = vec.copy()
        out._vec.setflags(write=False)
        return out

    @classmethod
    def from_array(cls, arr) -> "AltForm":
        """Read the increasing-index components of a totally antisymmetric array."""
        arr = np.asarray(arr, dtype=float)
        k = arr.ndim
        n = arr.shape[0] if k else 0
        if k == 0:
            raise InvalidInputError("use from_vector(dim, 0, [c]) for 0-forms")
        idx = _index_array(n, k)
        return cls.from_vector(n, k, arr[tuple(idx.T)])

    @classmethod
    def from_vector_field(cls, x) -> "AltForm":
        """The 1-form metrically dual to the frame vector ``x``."""
        x = np.asarray(x, dtype=float)
        return cls.from_vector(len(x), 1, x)

    # accessors ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def coeffs(self) -> Mapping[tuple[int, ...], float]:
        return dict(self._coeffs)

    def __getitem__(self, key: Sequence[int]) -> float:
        key = tuple(key)
        sign = permutation_sign(key)
        if sign == 0:
            return 0.0
        return sign * self._coeffs.get(tuple(sorted(key)), 0.0)

    def vector(self) -> np.ndarray:
        """Dense read-only component vector over ``multi_indices(dim, degree)``."""
        if self._vec is None:
            pos = _position(self._dim, self._degree)
            vec = np.zeros(len(pos))
            for I, v in self._coeffs.items():
                vec[pos[I]] = v
            vec.setflags(write=False)
            self._vec = vec
        return self._vec

    def to_array(self) -> np.ndarray:
        """Full antisymmetric array of shape ``(dim,) * degree``."""
        n, k = self._dim, self._degree
        if k == 0:
            return np.array(self.vector()[0])
        src, flat, sg = _dense_table(n, k)
        out = np.zeros(n ** k)
        out[flat] = sg * self.vector()[src]
        return out.reshape((n,) * k)

    def __call__(self, *vectors) -> float:
        """Evaluate on ``degree`` frame vectors."""
        if len(vectors) != self._degree:
            raise InvalidInputError(f"need {self._degree} arguments, got {len(vectors)}")
        if self._degree == 0:
            return float(self.vector()[0])
        V = np.array([np.asarray(v, dtype=float) for v in vectors])
        if V.shape[1] != self._dim:
            raise InvalidInputError("argument dimension mismatch")
        total = 0.0
        for I, c in self._coeffs.items():
            total += c * np.linalg.det(V[:, list(I)])
        return float(total)

    # arithmetic ---------------------------------------------------------

    def _check_same(self, other: "AltForm") -> None:
        if not isinstance(other, AltForm):
            raise InvalidInputError("expected an AltForm")
        if (self._dim, self._degree) != (other._dim, other._degree):
            raise InvalidInputError(
                f"shape mismatch: ({self._dim},{self._degree}) vs ({other._dim},{other._degree})")

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check_same(other)
        return AltForm.from_vector(self._dim, self._degree, self.vector() + other.vector())

    def __sub__(self, other: "AltForm") -> "AltForm":
        self._check_same(other)
        return AltForm.from_vector(self._dim, self._degree, self.vector() - other.vector())

    def __neg__(self) -> "AltForm":
        return AltForm.from_vector(self._dim, self._degree, -self.vector())

    def __mul__(self, scalar: float) -> "AltForm":
        return AltForm.from_vector(self._dim, self._degree, float(scalar) * self.vector())

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "AltForm":
        return self * (1.0 / scalar)

    def norm(self) -> float:
        return math.sqrt(inner(self, self))

    def max_abs(self) -> float:
        v = self.vector()
        return float(np.abs(v).max()) if v.size else 0.0

    def allclose(self, other: "AltForm", tol: float = DEFAULT_TOL) -> bool:
        self._check_same(other)
        return bool(np.all(np.abs(self.vector() - other.vector()) <= tol))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AltForm):
            return NotImplemented
        return (self._dim, self._degree) == (other._dim, other._degree) and \
            np.array_equal(self.vector(), other.vector())

    __hash__ = None

    def __repr__(self) -> str:
        terms = " + ".join(f"{c:g}*e{''.join(map(str, I))}" for I, c in self._coeffs.items())
        return f"AltForm(dim={self._dim}, degree={self._degree}, {terms or '0'})"

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"dim": self._dim, "degree": self._degree,
                "terms": [[list(I), c] for I, c in self._coeffs.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "AltForm":
        return cls(int(data["dim"]), int(data["degree"]),
                   {tuple(I): c for I, c in data["terms"]})


def volume_form(n: int, orientation: int = 1) -> AltForm:
    return AltForm.basis(n, range(n), float(orientation))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def wedge(a: AltForm, b: AltForm) -> AltForm:
    if a.dim != b.dim:
        raise InvalidInputError(f"dimension mismatch {a.dim} vs {b.dim}")
    n, k, l = a.dim, a.degree, b.degree
    if k + l > n:
        return AltForm.zero(n, k + l)
    ia, jb, kc, sg = _wedge_table(n, k, l)
    vals = sg * a.vector()[ia] * b.vector()[jb]
    out = np.bincount(kc, weights=vals, minlength=len(multi_indices(n, k + l)))
    return AltForm.from_vector(n, k + l, out)


def interior(x, a: AltForm) -> AltForm:
    """Contraction ``(x _| a)(Y_1..Y_{k-1}) = a(x, Y_1..Y_{k-1})``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (a.dim,):
        raise InvalidInputError(f"vector of length {x.shape} vs form dim {a.dim}")
    if a.degree == 0:
        raise InvalidInputError("interior product of a 0-form is undefined")
    src, slot, dst, sg = _interior_table(a.dim, a.degree)
    vals = sg * x[slot] * a.vector()[src]
    out = np.bincount(dst, weights=vals, minlength=len(multi_indices(a.dim, a.degree - 1)))
    return AltForm.from_vector(a.dim, a.degree - 1, out)


def inner(a: AltForm, b: AltForm) -> float:
    if (a.dim, a.degree) != (b.dim, b.degree):
        raise InvalidInputError(
            f"inner product needs equal dim/degree, got ({a.dim},{a.degree}) and ({b.dim},{b.degree})")
    return float(a.vector() @ b.vector())


def hodge(a: AltForm, orientation: int = 1) -> AltForm:
    """Hodge star; ``orientation=-1`` uses the reversed volume form."""
    if orientation not in (1, -1):
        raise InvalidInputError("orientation must be +1 or -1")
    n, k = a.dim, a.degree
    dst, sg = _hodge_table(n, k)
    out = np.zeros(len(multi_indices(n, n - k)))
    out[dst] = orientation * sg * a.vector()
    return AltForm.from_vector(n, n - k, out)


def hodge_inverse(a: AltForm, orientation: int = 1) -> AltForm:
    n, k = a.dim, a.degree
    return hodge(a, orientation) * (-1) ** (k * (n - k))


def skew_from_two_form(beta: AltForm) -> np.ndarray:
    """Endomorphism ``B`` with ``<B X, W> = beta(X, W)``."""
    if beta.degree != 2:
        raise InvalidInputError("need a 2-form")
    return beta.to_array().T.copy()


def two_form_from_skew(M) -> AltForm:
    M = np.asarray(M, dtype=float)
    return AltForm.from_array(M.T)


def form_action(M, a: AltForm) -> AltForm:
    """Derivation action of ``M in gl(n)``: ``(M.a)(X..) = -sum_p a(.., M X_p, ..)``."""
    M = np.asarray(M, dtype=float)
    if M.shape != (a.dim, a.dim):
        raise InvalidInputError("matrix/form dimension mismatch")
    if a.degree == 0:
        return AltForm.zero(a.dim, 0)
    return AltForm.from_array(tensor_action(M, a.to_array()))


def tensor_action(M, A: np.ndarray) -> np.ndarray:
    """Derivation action of ``M`` on a covariant tensor array, slot by slot."""
    out = np.zeros_like(A, dtype=float)
    for p in range(A.ndim):
        # A(.., M e_i, ..) = sum_m M[m, i] A(.., e_m, ..)
        moved = np.tensordot(M, A, axes=([0], [p]))  # new axis 0 is slot p
        out -= np.moveaxis(moved, 0, p)
    return out
