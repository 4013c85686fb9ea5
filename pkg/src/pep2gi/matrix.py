"""Dense exact linear algebra over F_q.

Entries are integer element codes (see :mod:`pep2gi.field`) stored in an
int64 numpy array.  :func:`batch_rref` runs Gauss-Jordan elimination on a
whole stack of matrices at once; the single-matrix operations are thin
wrappers around it.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import FieldElement, FieldSpec


class ShapeError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


def batch_rref(field: FieldSpec, a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduced row echelon form of every matrix in an (N, r, c) stack.

    Pivot rule: scan columns left to right, take the first row at or below
    the current rank with a nonzero entry.  Returns ``(R, rank, is_pivot)``
    with ``rank`` of shape (N,) and ``is_pivot`` an (N, c) boolean mask.
    """
    R = np.array(a, dtype=np.int64, copy=True)
    N, r, c = R.shape
    rank = np.zeros(N, dtype=np.int64)
    is_pivot = np.zeros((N, c), dtype=bool)
    if r == 0 or N == 0:
        return R, rank, is_pivot
    rows = np.arange(r)
    batch = np.arange(N)
    for col in range(c):
        cand = (R[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = batch[has]
        nb = len(b)
        src = cand[b].argmax(axis=1)
        tgt = rank[b]
        swap = R[b, src]
        R[b, src] = R[b, tgt]
        R[b, tgt] = swap
        piv_row = field.vmul(field.vinv(R[b, tgt, col])[:, None], R[b, tgt])
        R[b, tgt] = piv_row
        factors = R[b, :, col]
        factors[np.arange(nb), tgt] = 0
        sub = R[b]
        R[b] = field.vsub(sub, field.vmul(factors[:, :, None], piv_row[:, None, :]))
        is_pivot[b, col] = True
        rank[b] += 1
        if (rank == r).all():
            break
    return R, rank, is_pivot


def batch_rank(field: FieldSpec, a: np.ndarray) -> np.ndarray:
    return batch_rref(field, a)[1]


class MatrixFq:
    """An immutable rows x cols matrix over a FieldSpec."""

    __slots__ = ("field", "_a")

    def __init__(self, field: FieldSpec, entries) -> None:
        a = np.array(entries, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ShapeError("matrix entries must form a 2-d grid")
        if a.size and (a.min() < 0 or a.max() >= field.q):
            raise ValueError(f"entries out of range for {field!r}")
        a.setflags(write=False)
        self.field = field
        self._a = a

    @classmethod
    def _wrap(cls, field: FieldSpec, a: np.ndarray) -> MatrixFq:
        m = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.setflags(write=False)
        m.field = field
        m._a = a
        return m

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> MatrixFq:
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> MatrixFq:
        return cls._wrap(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def ones(cls, field: FieldSpec, rows: int, cols: int) -> MatrixFq:
        return cls._wrap(field, np.ones((rows, cols), dtype=np.int64))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]], cols: int | None = None) -> MatrixFq:
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, rows)

    # -- basic accessors ---------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the element codes."""
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def __getitem__(self, idx):
        return int(self._a[idx]) if np.ndim(self._a[idx]) == 0 else self._a[idx]

    def element(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.field, int(self._a[i, j]))

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(self._a[i].tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixFq):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self._a, other._a)

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"MatrixFq({self.field!r}, {self.tolist()})"

    def is_zero(self) -> bool:
        return not self._a.any()

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and np.array_equal(self._a, self._a.T)

    # -- arithmetic --------------------------------------------------------

    def _same(self, other: MatrixFq) -> None:
        if self.field != other.field:
            raise ValueError("matrices over different fields")

    def __add__(self, other: MatrixFq) -> MatrixFq:
        self._same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return MatrixFq._wrap(self.field, self.field.vadd(self._a, other._a))

    def __sub__(self, other: MatrixFq) -> MatrixFq:
        self._same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return MatrixFq._wrap(self.field, self.field.vsub(self._a, other._a))

    def __neg__(self) -> MatrixFq:
        return MatrixFq._wrap(self.field, self.field.vneg(self._a))

    def scale(self, c: int | FieldElement) -> MatrixFq:
        return MatrixFq._wrap(self.field, self.field.vmul(int(c), self._a))

    def __matmul__(self, other: MatrixFq) -> MatrixFq:
        return mul(self, other)

    @property
    def T(self) -> MatrixFq:
        return MatrixFq._wrap(self.field, self._a.T)

    def transpose(self) -> MatrixFq:
        return self.T

    # -- elimination -------------------------------------------------------

    def rref(self) -> tuple[MatrixFq, int, list[int]]:
        return rref(self)

    def rank(self) -> int:
        return rref(self)[1]

    def det(self) -> FieldElement:
        return det(self)

    def inverse(self) -> MatrixFq:
        return inverse(self)

    # -- serialization -----------------------------------------------------

    def to_json(self, with_field: bool = False) -> dict:
        out = {"rows": self.rows, "cols": self.cols, "entries": self.tolist()}
        if with_field:
            out["field"] = self.field.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict, field: FieldSpec | None = None) -> MatrixFq:
        if field is None:
            field = FieldSpec.from_json(data["field"])
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = data["entries"]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ShapeError(f"declared shape {rows}x{cols} does not match entries")
        if rows == 0:
            return cls.zeros(field, 0, cols)
        return cls(field, entries)


def rref(A: MatrixFq) -> tuple[MatrixFq, int, list[int]]:
    """Unique reduced row echelon form, rank and pivot columns of A."""
    R, rank, piv = batch_rref(A.field, A.array[None])
    return MatrixFq._wrap(A.field, R[0]), int(rank[0]), np.flatnonzero(piv[0]).tolist()


def rank(A: MatrixFq) -> int:
    return rref(A)[1]


def transpose(A: MatrixFq) -> MatrixFq:
    return A.T


def mul(A: MatrixFq, B: MatrixFq) -> MatrixFq:
    A._same(B)
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if A.cols == 0:
        return MatrixFq.zeros(A.field, A.rows, B.cols)
    return MatrixFq._wrap(A.field, A.field.matmul(A.array, B.array))


def det(A: MatrixFq) -> FieldElement:
    if not A.is_square():
        raise ShapeError("determinant of a non-square matrix")
    f = A.field
    a = A.array.tolist()
    n = len(a)
    d = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return FieldElement(f, 0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            d = f.neg(d)
        pv = a[col][col]
        d = f.mul(d, pv)
        inv = f.inv(pv)
        for r in range(col + 1, n):
            if a[r][col]:
                fac = f.mul(a[r][col], inv)
                a[r] = [f.sub(x, f.mul(fac, y)) for x, y in zip(a[r], a[col])]
    return FieldElement(f, d)


def inverse(A: MatrixFq) -> MatrixFq:
    if not A.is_square():
        raise ShapeError("inverse of a non-square matrix")
    n = A.rows
    aug = np.concatenate([A.array, np.eye(n, dtype=np.int64)], axis=1)
    R, rk, _ = batch_rref(A.field, aug[None])
    if not np.array_equal(R[0, :, :n], np.eye(n, dtype=np.int64)):
        raise SingularMatrixError("matrix is singular")
    return MatrixFq._wrap(A.field, R[0, :, n:])


def right_nullspace_rows(field: FieldSpec, R: np.ndarray, pivots: list[int], cols: int) -> np.ndarray:
    """Basis of {x : A x^T = 0} read off an RREF R of A, one vector per free column."""
    free = [j for j in range(cols) if j not in set(pivots)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for t, fcol in enumerate(free):
        out[t, fcol] = 1
        for i, pcol in enumerate(pivots):
            out[t, pcol] = field.neg(int(R[i, fcol]))
    return out


def nullspace_left(A: MatrixFq) -> list[tuple[int, ...]]:
    """RREF basis of {c : cA = 0}."""
    B = A.T
    R, rk, piv = rref(B)
    vecs = right_nullspace_rows(A.field, R.array, piv, B.cols)
    if len(vecs) == 0:
        return []
    Rn, rn, _ = batch_rref(A.field, vecs[None])
    return [tuple(row) for row in Rn[0, :rn[0]].tolist()]


def is_invertible(A: MatrixFq) -> bool:
    return A.is_square() and rank(A) == A.rows
