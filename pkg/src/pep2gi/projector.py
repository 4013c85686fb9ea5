"""Orthogonal projectors onto M-LCD codes, M = aI + bJ."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code import LinearCode, Permutation, StructureParams, apply_permutation, gram
from .matrix import MatrixFq, SingularMatrixError, inverse, nullspace_left


class NotMLCD(ValueError):
    """The Gram matrix G M G^T is singular, so no projector exists."""


@dataclass(frozen=True)
class Projector:
    mat: MatrixFq
    source_code: LinearCode
    params: StructureParams | None = None

    def to_json(self) -> dict:
        out = self.mat.to_json()
        if self.params is None:
            out.update({"a": 1, "b": 0})
        else:
            out.update(self.params.to_json())
        return out

    def kernel_basis(self) -> list[tuple[int, ...]]:
        """Basis of {w : w Pi = 0}."""
        return nullspace_left(self.mat)


def projector(C: LinearCode, M: StructureParams | None = None) -> Projector:
    """M G^T (G M G^T)^{-1} G; vectors act on the right (x -> x Pi)."""
    f = C.field
    if C.k == 0:
        return Projector(MatrixFq.zeros(f, C.n, C.n), C, M)
    try:
        inv = inverse(gram(C, M)).array
    except SingularMatrixError:
        raise NotMLCD(f"code has nontrivial {'M-' if M else ''}hull; Gram matrix is singular") from None
    G = C.gen.array
    if M is None:
        MGt = G.T
    else:
        # (M G^T)[i, r] = a G[r, i] + b v[r], v = G 1^T
        v = f.vsum(G, axis=1)
        MGt = f.vadd(f.vmul(M.a.value, G.T), f.vmul(M.b.value, v)[None, :])
    mat = f.matmul(f.matmul(MGt, inv), G)
    return Projector(MatrixFq._wrap(f, mat), C, M)


def conjugate(A: MatrixFq, pi: Permutation) -> MatrixFq:
    """P^T A P, i.e. entry (pi(i), pi(j)) of the result is A[i, j]."""
    idx = pi.column_order()
    return MatrixFq._wrap(A.field, A.array[np.ix_(idx, idx)])


def projector_equivariant(C: LinearCode, pi: Permutation, M: StructureParams | None) -> bool:
    """Whether Pi_{C pi, M} = P^T Pi_{C, M} P."""
    lhs = projector(apply_permutation(C, pi), M).mat
    rhs = conjugate(projector(C, M).mat, pi)
    return lhs == rhs
