"""Exact arithmetic over small finite fields F_q, q = p^m.

Elements are encoded as integers 0..q-1: the integer ``x`` stands for the
polynomial whose coefficient vector is the base-p expansion of ``x``
(constant term = least significant digit).  Integer order is therefore the
canonical element order used for tie-breaking throughout the package.

Bulk arithmetic (matrices, census batches) runs on numpy arrays of these
integer codes.  Prime fields use plain modular arithmetic; extension fields
go through precomputed q x q tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

import numpy as np

DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),  # t^2 + t + 1
    (2, 3): (1, 1, 0, 1),  # t^3 + t + 1
    (3, 2): (1, 0, 1),  # t^2 + 1
    (2, 4): (1, 1, 0, 0, 1),  # t^4 + t + 1
    (5, 2): (2, 0, 1),  # t^2 + 2
    (3, 3): (1, 2, 0, 1),  # t^3 + 2t + 1
}


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a divided by b over F_p (coefficient lists, constant first)."""
    r = _poly_trim([x % p for x in a])
    b = _poly_trim([x % p for x in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(r) >= len(b):
        f = r[-1] * inv_lead % p
        shift = len(r) - len(b)
        for i, c in enumerate(b):
            r[shift + i] = (r[shift + i] - f * c) % p
        _poly_trim(r)
    return r


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..deg/2 divides ``modulus``."""
    f = _poly_trim([c % p for c in modulus])
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^m} presented as F_p[t]/(modulus)."""

    p: int
    m: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise FieldError("extension degree must be >= 1")
        if self.m == 1:
            if self.modulus:
                raise FieldError("prime fields take no modulus")
            return
        mod = tuple(c % self.p for c in self.modulus)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {self.m}")
        if not is_irreducible(mod, self.p):
            raise FieldError(f"modulus {list(mod)} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    # -- basic facts -------------------------------------------------------

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def order(self) -> int:
        return self.q

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    @property
    def odd(self) -> bool:
        return self.p != 2

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    # -- encoding ----------------------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.m:
            raise FieldError("too many coefficients")
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + (c % self.p)
        return x

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    def check(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element code of {self!r}")
        return x

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def __call__(self, x: int | Sequence[int]) -> FieldElement:
        if isinstance(x, (list, tuple)):
            return FieldElement(self, self.from_coeffs(x))
        return FieldElement(self, self.check(x))

    # -- tables ------------------------------------------------------------

    def _poly_mul_code(self, x: int, y: int) -> int:
        a, b = self.coeffs(x), self.coeffs(y)
        prod = [0] * (2 * self.m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % self.p
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    @cached_property
    def add_table(self) -> np.ndarray:
        q, p = self.q, self.p
        digits = np.array([self.coeffs(x) for x in range(q)], dtype=np.int64)
        s = (digits[:, None, :] + digits[None, :, :]) % p
        weights = p ** np.arange(self.m, dtype=np.int64)
        return (s * weights).sum(axis=2)

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        if self.m == 1:
            a = np.arange(q, dtype=np.int64)
            return np.outer(a, a) % q
        t = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(x, q):
                t[x, y] = t[y, x] = self._poly_mul_code(x, y)
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.argmin(self.add_table, axis=1).astype(np.int64)

    @cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[0] is 0 as a sentinel; callers guard against zero."""
        inv = np.zeros(self.q, dtype=np.int64)
        ones = np.argwhere(self.mul_table == 1)
        inv[ones[:, 0]] = ones[:, 1]
        return inv

    @cached_property
    def _lists(self) -> tuple[list, list, list, list]:
        return (
            self.add_table.tolist(),
            self.mul_table.tolist(),
            self.neg_table.tolist(),
            self.inv_table.tolist(),
        )

    # -- scalar arithmetic on codes ---------------------------------------

    def add(self, x: int, y: int) -> int:
        return self._lists[0][x][y]

    def sub(self, x: int, y: int) -> int:
        return self._lists[0][x][self._lists[2][y]]

    def mul(self, x: int, y: int) -> int:
        return self._lists[1][x][y]

    def neg(self, x: int) -> int:
        return self._lists[2][x]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._lists[3][x]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def sum(self, xs) -> int:
        s = 0
        for x in xs:
            s = self.add(s, x)
        return s

    # -- vectorized arithmetic on code arrays -----------------------------

    def vadd(self, x, y):
        if self.m == 1:
            return (np.asarray(x) + y) % self.p
        return self.add_table[x, y]

    def vsub(self, x, y):
        if self.m == 1:
            return (np.asarray(x) - y) % self.p
        return self.sub_table[x, y]

    def vmul(self, x, y):
        if self.m == 1:
            return (np.asarray(x) * y) % self.p
        return self.mul_table[x, y]

    def vneg(self, x):
        if self.m == 1:
            return (-np.asarray(x)) % self.p
        return self.neg_table[x]

    def vinv(self, x):
        return self.inv_table[x]

    def vsum(self, x, axis: int = -1):
        """Field sum along ``axis``."""
        x = np.asarray(x)
        if self.m == 1:
            return x.sum(axis=axis) % self.p
        x = np.moveaxis(x, axis, -1)
        acc = np.zeros(x.shape[:-1], dtype=np.int64)
        for i in range(x.shape[-1]):
            acc = self.add_table[acc, x[..., i]]
        return acc

    def matmul(self, a, b):
        """Matrix product over F_q; broadcasts over leading batch axes."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return np.matmul(a, b) % self.p
        inner = a.shape[-1]
        out_shape = np.broadcast_shapes(a.shape[:-1] + (1,), b.shape[:-2] + (1, b.shape[-1]))
        acc = np.zeros(out_shape, dtype=np.int64)
        for s in range(inner):
            acc = self.add_table[acc, self.mul_table[a[..., :, s : s + 1], b[..., s : s + 1, :]]]
        return acc

    # -- squares -----------------------------------------------------------

    @cached_property
    def squares(self) -> frozenset[int]:
        return frozenset(self.mul(x, x) for x in range(self.q))

    def quadratic_character(self, x: int) -> int:
        if not self.odd:
            raise FieldError("quadratic character needs odd characteristic; use is_square")
        if x == 0:
            return 0
        r = self.pow(x, (self.q - 1) // 2)
        return 1 if r == 1 else -1

    def chi(self, x: int) -> int:
        return self.quadratic_character(x)

    def is_square(self, x: int) -> bool:
        return x in self.squares

    @cached_property
    def smallest_nonsquare(self) -> int:
        for x in self.nonzero():
            if not self.is_square(x):
                return x
        raise FieldError(f"{self!r} has no non-squares")

    def sum_of_two_squares(self, c: int) -> tuple[int, int]:
        if not self.odd:
            raise FieldError("sum_of_two_squares is defined for odd q")
        sq = [self.mul(x, x) for x in range(self.q)]
        for a in range(self.q):
            for b in range(self.q):
                if self.add(sq[a], sq[b]) == c:
                    return a, b
        raise AssertionError("unreachable for odd q")

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> FieldSpec:
        return field_make(int(data["p"]), int(data.get("m", 1)), data.get("modulus") or None)


def field_make(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build F_{p^m}; a default modulus is used for q in {4, 8, 9, 16, 25, 27}."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m == 1:
        # any monic linear modulus t + c gives the same field
        if modulus and (len(modulus) != 2 or modulus[1] % p != 1):
            raise FieldError("a prime field modulus must be monic of degree 1, or omitted")
        return FieldSpec(p, 1, ())
    if modulus is None:
        if (p, m) not in DEFAULT_MODULI:
            raise FieldError(f"no default modulus for q = {p}^{m}; supply one")
        modulus = DEFAULT_MODULI[(p, m)]
    return FieldSpec(p, m, tuple(modulus))


def field_of_order(q: int) -> FieldSpec:
    """F_q for a prime or a supported prime power q."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1 or not is_prime(p):
        raise FieldError(f"{q} is not a prime power")
    return field_make(p, m)


@dataclass(frozen=True, order=False)
class FieldElement:
    """A single element of a FieldSpec, with operator overloading."""

    field: FieldSpec
    value: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.field.check(self.value))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("mixed fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inv(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __lt__(self, other: FieldElement) -> bool:
        return self.value < other.value

    def __le__(self, other: FieldElement) -> bool:
        return self.value <= other.value

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __repr__(self) -> str:
        return f"{self.value}@{self.field!r}"


def elements(field: FieldSpec) -> Iterator[FieldElement]:
    for x in field.elements():
        yield FieldElement(field, x)


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def neg(x: FieldElement) -> FieldElement:
    return -x


def inv(x: FieldElement) -> FieldElement:
    return x.inv()


def power(x: FieldElement, e: int) -> FieldElement:
    return x**e


def quadratic_character(x: FieldElement) -> int:
    """chi(x) in {-1, 0, +1}; computed as x^((q-1)/2)."""
    return x.field.quadratic_character(x.value)


def is_square(x: FieldElement) -> bool:
    return x.field.is_square(x.value)


def sum_of_two_squares(c: FieldElement) -> tuple[FieldElement, FieldElement]:
    """First (a, b) in canonical order with a^2 + b^2 = c."""
    a, b = c.field.sum_of_two_squares(c.value)
    return FieldElement(c.field, a), FieldElement(c.field, b)
