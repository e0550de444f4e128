"""Dense exact matrices over a :class:`~skewquiver.exactfield.FieldSpec`.

Prime-field elimination and multiplication dispatch to :mod:`skewquiver.backend`
(compiled or numpy); extension fields use the vectorized field operations.
"""

from __future__ import annotations

import itertools
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _poly, backend
from .errors import CharacteristicError, DomainError, ExtensionRequired, InconsistentSystemError
from .exactfield import (
    FieldElement,
    FieldSpec,
    embed_values,
    extend,
    nth_root_values,
    root_extension_degree,
)


class Matrix:
    """Immutable ``rows x cols`` matrix of encoded field elements."""

    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, a):
        arr = np.array(a, dtype=np.int64)
        if arr.ndim != 2:
            raise DomainError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr.setflags(write=False)
        self.field = field
        self.a = arr

    # ------------------------------------------------------ constructors
    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = list(rows)
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        data = [[field.coerce(x) for x in row] for row in rows]
        if len({len(r) for r in data}) > 1:
            raise DomainError("ragged matrix rows")
        if cols is not None and data[0] and len(data[0]) != cols:
            raise DomainError(f"expected {cols} columns, got {len(data[0])}")
        if not data[0]:
            return cls.zeros(field, len(data), cols or 0)
        return cls(field, data)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def scalar(cls, field: FieldSpec, n: int, c) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64) * field.coerce(c))

    @classmethod
    def diag(cls, field: FieldSpec, values: Sequence) -> "Matrix":
        vals = [field.coerce(v) for v in values]
        return cls(field, np.diag(np.array(vals, dtype=np.int64)).reshape(len(vals), len(vals)))

    @classmethod
    def antidiagonal(cls, field: FieldSpec, n: int, c=1) -> "Matrix":
        return cls(field, np.fliplr(np.eye(n, dtype=np.int64)) * field.coerce(c))

    @classmethod
    def jordan(cls, field: FieldSpec, lam, n: int) -> "Matrix":
        """Upper-triangular Jordan block: ``lam`` on the diagonal, 1 above it."""
        a = np.eye(n, dtype=np.int64) * field.coerce(lam) + np.eye(n, k=1, dtype=np.int64)
        return cls(field, a)

    @staticmethod
    def block_diag(field: FieldSpec, blocks: Sequence["Matrix"]) -> "Matrix":
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks)
        out = np.zeros((r, c), dtype=np.int64)
        i = j = 0
        for b in blocks:
            out[i:i + b.rows, j:j + b.cols] = b.a
            i += b.rows
            j += b.cols
        return Matrix(field, out)

    @staticmethod
    def hstack(field: FieldSpec, blocks: Sequence["Matrix"], rows: Optional[int] = None) -> "Matrix":
        if not blocks:
            return Matrix.zeros(field, rows or 0, 0)
        return Matrix(field, np.hstack([b.a for b in blocks]))

    @staticmethod
    def vstack(field: FieldSpec, blocks: Sequence["Matrix"], cols: Optional[int] = None) -> "Matrix":
        if not blocks:
            return Matrix.zeros(field, 0, cols or 0)
        return Matrix(field, np.vstack([b.a for b in blocks]))

    # ------------------------------------------------------- basics
    @property
    def shape(self) -> Tuple[int, int]:
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx) -> FieldElement:
        i, j = idx
        return FieldElement(self.field, int(self.a[i, j]))

    def column(self, j: int) -> "Matrix":
        return Matrix(self.field, self.a[:, j:j + 1])

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix(self.field, self.a[np.ix_(list(rows), list(cols))] if len(rows) and len(cols) else np.zeros((len(rows), len(cols)), dtype=np.int64))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.a.T)

    def _same(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise DomainError(f"matrices over {self.field} and {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.shape != other.shape:
            raise DomainError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix(self.field, self.field.vadd(self.a, other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.shape != other.shape:
            raise DomainError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix(self.field, self.field.vsub(self.a, other.a))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.field.vneg(self.a))

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, self.field.vmul(self.a, self.field.coerce(c)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.cols != other.rows:
            raise DomainError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.field, _matmul(self.field, self.a, other.a))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.field, self.shape, self.a.tobytes()))

    def key(self) -> tuple:
        """Sort key: shape, then row-major entries in encoding order."""
        return (self.shape, tuple(int(x) for x in self.a.ravel()))

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_identity(self) -> bool:
        return self.is_square and bool(np.array_equal(self.a, np.eye(self.rows, dtype=np.int64)))

    def trace(self) -> int:
        if not self.is_square:
            raise DomainError("trace of a non-square matrix")
        return int(self.field.vsum(np.diagonal(self.a), axis=0)) if self.rows else 0

    def rank(self) -> int:
        return rref(self)[1]

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise DomainError("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix(self.field, np.hstack([self.a, np.eye(n, dtype=np.int64)]))
        r, rank, piv = rref(aug)
        if rank < n or (n and piv[n - 1] != n - 1):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(self.field, r.a[:, n:])

    def pow(self, k: int) -> "Matrix":
        if not self.is_square:
            raise DomainError("power of a non-square matrix")
        if k < 0:
            return self.inverse().pow(-k)
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def lift(self, big: FieldSpec) -> "Matrix":
        if big == self.field:
            return self
        return Matrix(big, embed_values(self.field, big, self.a))

    def to_json(self) -> list:
        f = self.field
        return [[f.element_to_json(int(x)) for x in row] for row in self.a]

    @classmethod
    def from_json(cls, field: FieldSpec, obj, shape: Optional[Tuple[int, int]] = None) -> "Matrix":
        rows = [[field.element_from_json(x) for x in row] for row in obj]
        if shape is not None:
            if not rows:
                return cls.zeros(field, shape[0], shape[1])
            if all(len(r) == 0 for r in rows):
                return cls.zeros(field, len(rows), shape[1])
        if not rows:
            return cls.zeros(field, 0, 0)
        if len({len(r) for r in rows}) > 1:
            raise DomainError("ragged matrix rows")
        return cls(field, np.array(rows, dtype=np.int64).reshape(len(rows), len(rows[0])))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(self.field.element_to_json(int(x))) for x in row) for row in self.a)
        return f"Matrix<{self.field} {self.rows}x{self.cols}>[{body}]"


# ----------------------------------------------------------------- kernels
def _matmul(F: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if F.e == 1:
        return backend.matmul_prime(a, b, F.p)
    prod = F.vmul(a[:, :, None], b[None, :, :])
    return F.vsum(prod, axis=1)


def _rref_array(F: FieldSpec, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    if a.size == 0:
        return np.array(a, dtype=np.int64).reshape(a.shape), []
    if F.e == 1:
        return backend.rref_prime(a, F.p)
    m = np.array(a, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = F.vmul(m[r], F.inv(int(m[r, c])))
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = F.vsub(m[hit], F.vmul(col[hit][:, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return m, pivots


def rref(M: Matrix) -> Tuple[Matrix, int, List[int]]:
    """Reduced row-echelon form, rank and pivot columns (first pivot in column order)."""
    r, piv = _rref_array(M.field, M.a)
    return Matrix(M.field, r), len(piv), list(piv)


def kernel_matrix(M: Matrix) -> Matrix:
    """Right null space of ``M`` as the columns of a ``cols x nullity`` matrix."""
    F = M.field
    R, rank, piv = rref(M)
    free = [c for c in range(M.cols) if c not in set(piv)]
    K = np.zeros((M.cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        K[f, k] = 1
        if rank:
            K[piv, k] = F.vneg(R.a[:rank, f])
    return Matrix(F, K)


def kernel_basis(M: Matrix) -> List[Matrix]:
    K = kernel_matrix(M)
    return [K.column(j) for j in range(K.cols)]


def image_basis(M: Matrix) -> Matrix:
    """Columns of ``M`` at its pivot positions: a basis of the column space."""
    _, _, piv = rref(M)
    return Matrix(M.field, M.a[:, piv]) if piv else Matrix.zeros(M.field, M.rows, 0)


def rank_factorization(P: Matrix) -> Tuple[Matrix, Matrix]:
    """``P = B @ R`` with ``B`` full column rank and ``R`` full row rank.

    For an idempotent ``P`` this also gives ``R @ B = I``.
    """
    R, rank, piv = rref(P)
    B = Matrix(P.field, P.a[:, piv]) if piv else Matrix.zeros(P.field, P.rows, 0)
    return B, Matrix(P.field, R.a[:rank])


def solve(A: Matrix, b: Matrix) -> Matrix:
    """One solution of ``A x = b`` (free variables set to zero).

    ``b`` may be a column matrix or a sequence of entries.  Raises
    :class:`InconsistentSystemError` when there is none.
    """
    F = A.field
    if not isinstance(b, Matrix):
        b = Matrix.from_rows(F, [[x] for x in b], cols=1)
    if b.rows != A.rows:
        raise DomainError("right-hand side has the wrong length")
    aug = Matrix(F, np.hstack([A.a, b.a]))
    R, rank, piv = rref(aug)
    if piv and piv[-1] >= A.cols:
        raise InconsistentSystemError("linear system is inconsistent")
    x = np.zeros((A.cols, b.cols), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R.a[i, A.cols:]
    return Matrix(F, x)


def fitting_split(f: Matrix) -> Tuple[Matrix, Matrix]:
    """Projectors onto ker(f^d) and im(f^d), d = dim, along each other."""
    if not f.is_square:
        raise DomainError("fitting_split needs a square matrix")
    F, d = f.field, f.rows
    g = f.pow(d)
    B_im = image_basis(g)
    B_ker = kernel_matrix(g)
    C = Matrix.hstack(F, [B_im, B_ker], rows=d)
    Cinv = C.inverse()
    r = B_im.cols
    P_im = B_im @ Matrix(F, Cinv.a[:r])
    P_ker = Matrix.identity(F, d) - P_im
    return P_ker, P_im


# ------------------------------------------------------------ polynomials
def minimal_polynomial(M: Matrix) -> List[int]:
    """Monic minimal polynomial (little-endian, encoded coefficients)."""
    if not M.is_square:
        raise DomainError("minimal polynomial of a non-square matrix")
    F, d = M.field, M.rows
    if d == 0:
        return [1]
    powers = [np.eye(d, dtype=np.int64).ravel()]
    cur = Matrix.identity(F, d)
    for _ in range(d):
        cur = cur @ M
        powers.append(cur.a.ravel())
    K = Matrix(F, np.stack(powers, axis=1))
    R, rank, piv = rref(K)
    k = rank  # columns 0..rank-1 are pivots, column rank is the first dependent one
    coeffs = [F.neg(int(R.a[j, k])) for j in range(k)]
    return coeffs + [1]


def poly_eval(M: Matrix, poly: Sequence[int]) -> Matrix:
    """Evaluate ``poly`` at the square matrix ``M`` (Horner)."""
    F, d = M.field, M.rows
    eye = np.eye(d, dtype=np.int64)
    acc = Matrix.zeros(F, d, d)
    for c in reversed(list(poly)):
        # c is already encoded, so it bypasses coerce (which reads ints mod p)
        acc = acc @ M + Matrix(F, eye * int(c))
    return acc


def _interpolate(F: FieldSpec, xs: Sequence[int], ys: Sequence[int]) -> List[int]:
    out: List[int] = []
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = [yi]
        for j, xj in enumerate(xs):
            if j != i:
                term = _poly.mul(F, term, [F.neg(xj), 1])
                term = _poly.scale(F, term, F.inv(F.sub(xi, xj)))
        out = _poly.add(F, out, term)
    return out


def _newton_root(F: FieldSpec, g: List[int], mu: List[int], n: int) -> List[int]:
    x = _poly.mod(F, [0, 1], mu)
    nn = n % F.p
    for _ in range(2 * len(mu) + 8):
        resid = _poly.sub(F, _poly.powmod(F, g, n, mu), x)
        if not resid:
            return g
        deriv = _poly.scale(F, _poly.powmod(F, g, n - 1, mu), nn)
        step = _poly.mulmod(F, resid, _poly.invmod(F, deriv, mu), mu)
        g = _poly.sub(F, g, step)
    raise ArithmeticError("Newton iteration for the matrix root did not converge")


def _root_polynomials(theta: Matrix, n: int, limit: int) -> List[List[int]]:
    F = theta.field
    if not theta.is_square:
        raise DomainError("commutant_nth_root needs a square matrix")
    if n < 1:
        raise DomainError("root degree must be positive")
    if n % F.p == 0:
        raise CharacteristicError(f"characteristic {F.p} divides n = {n}")
    if theta.rows == 0:
        return [[]]
    if not theta.is_invertible():
        raise DomainError("commutant_nth_root needs an invertible matrix")
    mu = minimal_polynomial(theta)
    fac = _poly.factor(F, mu)
    need = 1
    for g, _ in fac:
        need = _poly.lcm(need, len(g) - 1)
    if need > 1:
        raise ExtensionRequired(need, f"eigenvalues of theta need an extension of degree {need}")
    eig = [F.neg(g[0]) for g, _ in fac]
    choices = []
    for lam in eig:
        rts = nth_root_values(F, lam, n)
        if not rts:
            need = _poly.lcm(need, root_extension_degree(F, lam, n))
        choices.append(rts)
    if need > 1:
        raise ExtensionRequired(need, f"eigenvalue roots need an extension of degree {need}")
    out = []
    for combo in itertools.islice(itertools.product(*choices), limit):
        g0 = _interpolate(F, eig, combo)
        out.append(_newton_root(F, g0, mu, n))
    return out


def commutant_nth_root(theta: Matrix, n: int, *, extend_field: bool = False) -> Matrix:
    """A polynomial ``rho`` in ``theta`` with ``rho^n = theta``.

    The minimal polynomial of ``theta`` is split over its eigenvalues; on each
    eigenvalue the least scalar n-th root is chosen, and the root is
    Hensel-lifted across the nilpotent parts by Newton iteration in
    ``F[x]/(minpoly)``.  When an eigenvalue or one of its roots lies outside
    the field, raises :class:`ExtensionRequired` -- or, with
    ``extend_field=True``, lifts ``theta`` and returns a matrix over the
    extension (check ``result.field``).
    """
    return commutant_nth_roots(theta, n, limit=1, extend_field=extend_field)[0]


def commutant_nth_roots(theta: Matrix, n: int, *, limit: int = 256, extend_field: bool = False) -> List[Matrix]:
    """Up to ``limit`` roots, one per choice of scalar root on each eigenvalue."""
    while True:
        try:
            polys = _root_polynomials(theta, n, limit)
            break
        except ExtensionRequired as exc:
            if not extend_field:
                raise
            theta = theta.lift(extend(theta.field, exc.degree))
    return [poly_eval(theta, g) for g in polys]
