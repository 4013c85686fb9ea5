"""Linear codes, permutations, structure matrices aI + bJ, hulls and the
GI-reducibility classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import FieldElement, FieldSpec
from .matrix import MatrixFq, ShapeError, batch_rref, nullspace_left, rank, rref


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0..n-1}.

    The matrix is (P)_{ij} = 1 iff j = image[i], and it acts on row vectors
    by x -> xP, which moves coordinate i to position image[i].
    """

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        img = tuple(int(i) for i in self.image)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"{list(img)} is not a permutation")
        object.__setattr__(self, "image", img)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        img = list(range(n))
        img[i], img[j] = img[j], img[i]
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def then(self, other: Permutation) -> Permutation:
        """Apply self first, then other (P_self P_other)."""
        return Permutation(tuple(other.image[j] for j in self.image))

    def is_identity(self) -> bool:
        return self.image == tuple(range(self.n))

    def matrix(self, field: FieldSpec) -> MatrixFq:
        P = np.zeros((self.n, self.n), dtype=np.int64)
        P[np.arange(self.n), list(self.image)] = 1
        return MatrixFq(field, P)

    def column_order(self) -> list[int]:
        """Index list ``idx`` with (GP)[:, j] = G[:, idx[j]]."""
        return list(self.inverse().image)

    def apply_vector(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(x[i] for i in self.column_order())

    def to_json(self) -> list[int]:
        return list(self.image)


@dataclass(frozen=True)
class StructureParams:
    """The symmetric form M = aI + bJ on F_q^n, kept as the pair (a, b)."""

    a: FieldElement
    b: FieldElement
    n: int

    def __post_init__(self) -> None:
        if self.a.field != self.b.field:
            raise ValueError("a and b must lie in the same field")
        if not self.a:
            raise ValueError("aI + bJ is degenerate: a = 0")
        if not self.a + self.n * self.b:
            raise ValueError("aI + bJ is degenerate: a + n b = 0")

    @classmethod
    def of(cls, field: FieldSpec, a: int, b: int, n: int) -> StructureParams:
        return cls(FieldElement(field, a), FieldElement(field, b), n)

    @staticmethod
    def is_valid(field: FieldSpec, a: int, b: int, n: int) -> bool:
        return a != 0 and field.add(a, field.mul(field.from_int(n), b)) != 0

    @property
    def field(self) -> FieldSpec:
        return self.a.field

    def matrix(self) -> MatrixFq:
        f = self.field
        M = np.full((self.n, self.n), self.b.value, dtype=np.int64)
        np.fill_diagonal(M, f.add(self.a.value, self.b.value))
        return MatrixFq(f, M)

    def det(self) -> FieldElement:
        return self.a ** (self.n - 1) * (self.a + self.n * self.b)

    def to_json(self) -> dict:
        return {"a": self.a.value, "b": self.b.value}


class LinearCode:
    """An [n, k]_q code; equality is equality of the RREF generator matrix."""

    __slots__ = ("field", "n", "k", "gen", "canon")

    def __init__(self, field: FieldSpec, gen: MatrixFq) -> None:
        if gen.field != field:
            raise ValueError("generator matrix over a different field")
        R, k, _ = rref(gen)
        canon = MatrixFq._wrap(field, R.array[:k])
        self.field = field
        self.n = gen.cols
        self.k = k
        self.gen = gen if k == gen.rows else canon
        self.canon = canon

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self.canon == other.canon

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.canon))

    def __repr__(self) -> str:
        return f"LinearCode([{self.n},{self.k}]_{self.field.q}, canon={self.canon.tolist()})"

    def contains(self, x: Sequence[int]) -> bool:
        if self.k == 0:
            return not any(x)
        stacked = MatrixFq(self.field, np.vstack([self.canon.array, np.asarray(x, dtype=np.int64)[None]]))
        return rank(stacked) == self.k

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "n": self.n, "k": self.k, "gen": self.gen.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> LinearCode:
        field = FieldSpec.from_json(data["field"])
        n = int(data["n"])
        gen = data["gen"]
        if any(len(r) != n for r in gen):
            bad = next(i for i, r in enumerate(gen) if len(r) != n)
            raise ShapeError(f"gen row {bad} has length {len(gen[bad])}, expected n = {n}")
        C = code_make(field, MatrixFq.from_rows(field, gen, cols=n))
        if "k" in data and int(data["k"]) != C.k:
            raise ValueError(f"declared k = {data['k']} but generator rank is {C.k}")
        return C


def code_make(field: FieldSpec, gen: MatrixFq | Sequence[Sequence[int]]) -> LinearCode:
    if isinstance(gen, np.ndarray):
        gen = MatrixFq(field, gen)
    elif not isinstance(gen, MatrixFq):
        gen = MatrixFq.from_rows(field, gen)
    if gen.cols == 0:
        raise ShapeError("generator matrix has no columns")
    return LinearCode(field, gen)


def apply_permutation(C: LinearCode, pi: Permutation) -> LinearCode:
    """The code C P_pi."""
    if pi.n != C.n:
        raise ShapeError(f"permutation on {pi.n} points applied to length-{C.n} code")
    G = C.gen.array[:, pi.column_order()]
    return LinearCode(C.field, MatrixFq._wrap(C.field, G))


def _row_sums(field: FieldSpec, G: np.ndarray) -> np.ndarray:
    return field.vsum(G, axis=-1)


def gram(C: LinearCode, M: StructureParams | None = None) -> MatrixFq:
    """G M G^T, evaluated as a GG^T + b vv^T with v = G1^T."""
    f = C.field
    G = C.gen.array
    GGt = f.matmul(G, G.T) if C.k else np.zeros((0, 0), dtype=np.int64)
    if M is None:
        return MatrixFq._wrap(f, GGt)
    _check_params(C, M)
    v = _row_sums(f, G)
    outer = f.vmul(v[:, None], v[None, :])
    return MatrixFq._wrap(f, f.vadd(f.vmul(M.a.value, GGt), f.vmul(M.b.value, outer)))


def _check_params(C: LinearCode, M: StructureParams) -> None:
    if M.n != C.n or M.field != C.field:
        raise ShapeError("structure matrix does not match the code")


def hull_dim(C: LinearCode, M: StructureParams | None = None) -> int:
    if C.k == 0:
        return 0
    return C.k - rank(gram(C, M))


def is_m_lcd(C: LinearCode, M: StructureParams | None = None) -> bool:
    return hull_dim(C, M) == 0


def hull_basis(C: LinearCode, M: StructureParams | None = None) -> list[tuple[int, ...]]:
    """RREF basis of C intersected with its M-dual."""
    if C.k == 0:
        return []
    coeffs = nullspace_left(gram(C, M))
    if not coeffs:
        return []
    f = C.field
    lifted = f.matmul(np.array(coeffs, dtype=np.int64), C.gen.array)
    R, rk, _ = batch_rref(f, lifted[None])
    return [tuple(r) for r in R[0, : rk[0]].tolist()]


def dual(C: LinearCode, M: StructureParams | None = None) -> LinearCode:
    """{y : x M y^T = 0 for all x in C}."""
    f = C.field
    if C.k == 0:
        return LinearCode(f, MatrixFq.identity(f, C.n))
    G = C.gen.array
    if M is None:
        GM = G
    else:
        _check_params(C, M)
        v = _row_sums(f, G)
        GM = f.vadd(f.vmul(M.a.value, G), f.vmul(M.b.value, v)[:, None])
    basis = nullspace_left(MatrixFq._wrap(f, np.ascontiguousarray(GM.T)))
    return LinearCode(f, MatrixFq.from_rows(f, basis, cols=C.n) if basis else MatrixFq.zeros(f, 0, C.n))


class ReducibilityTag(str, enum.Enum):
    LCD = "LCD"
    HULL_ONE_REDUCIBLE = "HullOneReducible"
    HULL_ONE_IRREDUCIBLE = "HullOneIrreducible"
    HULL_TOO_LARGE = "HullTooLarge"


@dataclass(frozen=True)
class ReducibilityVerdict:
    tag: ReducibilityTag
    hull_dim: int
    hull_vector: tuple[int, ...] | None = None
    witness_b: FieldElement | None = None

    @property
    def reducible(self) -> bool:
        return self.tag in (ReducibilityTag.LCD, ReducibilityTag.HULL_ONE_REDUCIBLE)

    def to_json(self) -> dict:
        return {
            "tag": self.tag.value,
            "hull_dim": self.hull_dim,
            "hull_vector": list(self.hull_vector) if self.hull_vector is not None else None,
            "witness_b": self.witness_b.value if self.witness_b is not None else None,
        }


def candidate_bs(field: FieldSpec, n: int) -> list[int]:
    """b in F_q^*, ascending, with 1 + nb != 0."""
    return [b for b in field.nonzero() if StructureParams.is_valid(field, 1, b, n)]


def classify(C: LinearCode) -> ReducibilityVerdict:
    """LCD, or hull of dimension one spanned by x with (x, 1) != 0, is reducible."""
    h = hull_dim(C)
    if h == 0:
        return ReducibilityVerdict(ReducibilityTag.LCD, 0)
    if h >= 2:
        return ReducibilityVerdict(ReducibilityTag.HULL_TOO_LARGE, h)
    f = C.field
    (x,) = hull_basis(C)
    if f.sum(x) == 0:
        return ReducibilityVerdict(ReducibilityTag.HULL_ONE_IRREDUCIBLE, 1, x)
    for b in candidate_bs(f, C.n):
        if is_m_lcd(C, StructureParams.of(f, 1, b, C.n)):
            return ReducibilityVerdict(ReducibilityTag.HULL_ONE_REDUCIBLE, 1, x, FieldElement(f, b))
    raise AssertionError("hull-one code with (x, 1) != 0 admits no valid b")


def centralizer_check(M: MatrixFq) -> bool:
    """True iff M has constant diagonal and constant off-diagonal."""
    if not M.is_square():
        return False
    a = M.array
    n = M.rows
    if n == 0:
        return True
    diag = np.diagonal(a)
    off = a[~np.eye(n, dtype=bool)]
    return bool((diag == diag[0]).all() and (off.size == 0 or (off == off[0]).all()))
