"""Permutation equivalence via projector graphs, plus brute-force oracles."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, permutations, product

import numpy as np

from .code import (
    LinearCode,
    Permutation,
    StructureParams,
    apply_permutation,
    candidate_bs,
    centralizer_check,
    dual,
    hull_dim,
    is_m_lcd,
)
from .field import FieldElement
from .graph import WeightedDigraph, wdg_iso
from .matrix import MatrixFq, ShapeError, det
from .projector import projector

DEFAULT_BRUTE_FORCE_CAP = 8


class PepTag(str, enum.Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    NOT_REDUCIBLE = "NotReducible"


class PepReason(str, enum.Enum):
    DIMENSION_MISMATCH = "DimensionMismatch"
    HULL_MISMATCH = "HullMismatch"
    NO_VALID_B = "NoValidB"
    GRAPH_NON_ISO = "GraphNonIso"
    GRAPH_ISO = "GraphIso"
    HULL_TOO_LARGE = "HullTooLarge"


@dataclass(frozen=True)
class PepVerdict:
    tag: PepTag
    reason: PepReason
    permutation: Permutation | None = None
    used_b: FieldElement | None = None
    hull_dim: int | None = None
    # necessity of aI + bJ is only established for n >= 3
    short_length: bool = False

    def to_json(self) -> dict:
        return {
            "tag": self.tag.value,
            "permutation": self.permutation.to_json() if self.permutation else None,
            "used_b": self.used_b.value if self.used_b is not None else None,
            "reason": self.reason.value,
            "hull_dim": self.hull_dim,
            "short_length": self.short_length,
        }


def _check_pair(C1: LinearCode, C2: LinearCode) -> None:
    if C1.field != C2.field:
        raise ValueError(f"codes over different fields: {C1.field!r} vs {C2.field!r}")
    if C1.n != C2.n:
        raise ShapeError(f"codes of different length: {C1.n} vs {C2.n}")


def find_shared_b(C1: LinearCode, C2: LinearCode) -> FieldElement | None:
    """Smallest valid b != 0 making both codes (I + bJ)-LCD."""
    _check_pair(C1, C2)
    f = C1.field
    for b in candidate_bs(f, C1.n):
        M = StructureParams.of(f, 1, b, C1.n)
        if is_m_lcd(C1, M) and is_m_lcd(C2, M):
            return FieldElement(f, b)
    return None


def _admits_some_b(C: LinearCode) -> bool:
    f = C.field
    return any(is_m_lcd(C, StructureParams.of(f, 1, b, C.n)) for b in candidate_bs(f, C.n))


def pep_solve(C1: LinearCode, C2: LinearCode) -> PepVerdict:
    """Decide C2 = C1 P for some permutation P by reduction to digraph isomorphism."""
    _check_pair(C1, C2)
    short = C1.n <= 2
    if C1.k != C2.k:
        return PepVerdict(PepTag.NOT_EQUIVALENT, PepReason.DIMENSION_MISMATCH, short_length=short)
    h1, h2 = hull_dim(C1), hull_dim(C2)
    if h1 != h2:
        return PepVerdict(PepTag.NOT_EQUIVALENT, PepReason.HULL_MISMATCH, short_length=short)
    if h1 >= 2:
        return PepVerdict(PepTag.NOT_REDUCIBLE, PepReason.HULL_TOO_LARGE, hull_dim=h1, short_length=short)
    M = None
    used_b = None
    if h1 == 1:
        used_b = find_shared_b(C1, C2)
        if used_b is None:
            # Closure under permutations only separates the codes when one of
            # them admits some b; if neither does, nothing is decided.
            if _admits_some_b(C1) or _admits_some_b(C2):
                return PepVerdict(PepTag.NOT_EQUIVALENT, PepReason.NO_VALID_B, hull_dim=1, short_length=short)
            return PepVerdict(PepTag.NOT_REDUCIBLE, PepReason.NO_VALID_B, hull_dim=1, short_length=short)
        M = StructureParams(FieldElement(C1.field, 1), used_b, C1.n)
    A1 = WeightedDigraph(projector(C1, M).mat)
    A2 = WeightedDigraph(projector(C2, M).mat)
    pi = wdg_iso(A1, A2)
    if pi is None:
        return PepVerdict(PepTag.NOT_EQUIVALENT, PepReason.GRAPH_NON_ISO, used_b=used_b, hull_dim=h1, short_length=short)
    if apply_permutation(C1, pi) != C2:
        raise AssertionError("graph isomorphism does not map C1 onto C2")
    return PepVerdict(PepTag.EQUIVALENT, PepReason.GRAPH_ISO, pi, used_b, hull_dim=h1, short_length=short)


def pep_brute_force(C1: LinearCode, C2: LinearCode, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> Permutation | None:
    """First pi in lexicographic order of S_n with C1 P_pi = C2.

    Every permutation is tested at once: C1 P = C2 iff the permuted generator
    rows are orthogonal to a parity-check matrix of C2 (dimensions agree).
    """
    _check_pair(C1, C2)
    n = C1.n
    if n > cap:
        raise ValueError(f"brute force over S_{n} exceeds the cap n <= {cap}")
    if C1.k != C2.k:
        return None
    f = C1.field
    H = dual(C2).gen.array
    G = C1.gen.array
    if C2.k == n or C1.k == 0:
        return Permutation.identity(n)
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    inv = np.argsort(perms, axis=1)
    chunk = 20000
    for start in range(0, len(perms), chunk):
        cols = inv[start : start + chunk]
        Gp = G[:, cols].transpose(1, 0, 2)  # (N, k, n): (G P)[:, j] = G[:, pi^-1(j)]
        prod = f.matmul(Gp, H.T)
        ok = ~prod.reshape(len(cols), -1).any(axis=1)
        if ok.any():
            pi = Permutation(tuple(perms[start + int(np.argmax(ok))]))
            assert apply_permutation(C1, pi) == C2
            return pi
    return None


def necessity_witness(M: MatrixFq) -> tuple[tuple[int, ...], Permutation] | None:
    """A vector u and transposition P with exactly one of uMu^T, u(PMP^T)u^T zero.

    Such a pair shows <u> is M-LCD while <u>P is not (or the reverse), so the
    projector biconditional fails for M.  Returns None if no witness exists.
    """
    f = M.field
    n = M.rows
    if not M.is_symmetric():
        raise ValueError("M must be symmetric")
    if not f.odd:
        raise ValueError("necessity witnesses are searched for odd q only")
    if n < 3:
        raise ValueError("necessity witnesses need n >= 3")
    if not det(M):
        raise ValueError("M is degenerate")
    if centralizer_check(M):
        raise ValueError("M = aI + bJ already; no witness exists")
    vecs = np.array(list(product(range(f.q), repeat=n)), dtype=np.int64)
    a = M.array

    def qform(mat: np.ndarray) -> np.ndarray:
        return f.vsum(f.vmul(f.matmul(vecs, mat), vecs), axis=1)

    base = qform(a) != 0
    for i, j in combinations(range(n), 2):
        tau = Permutation.transposition(n, i, j)
        idx = tau.column_order()
        # P M P^T with (P)_{r, tau(r)} = 1 equals M with rows and columns i, j swapped
        conj = a[np.ix_(idx, idx)]
        other = qform(conj) != 0
        diff = base != other
        if diff.any():
            u = tuple(vecs[int(np.argmax(diff))].tolist())
            return u, tau
    return None
