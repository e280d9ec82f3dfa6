"""Exact dense linear algebra over prime fields and the rationals.

Matrices are numpy arrays: ``int64`` reduced mod p for prime fields, ``object``
arrays of :class:`fractions.Fraction` for the rationals.  No floating point is
used anywhere.  Pivoting is deterministic (first nonzero entry of the leftmost
available column), so every result below is reproducible bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np


class Inconsistent(ValueError):
    """Raised by :func:`solve_affine` when ``A x = b`` has no solution."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """A prime field F_p (``p`` set) or the rational field (``p is None``)."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None:
            if not _is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            if self.p >= 2**24:
                # keeps sums of products inside int64
                raise ValueError("prime too large for int64 arithmetic")

    @classmethod
    def parse(cls, text: str | int | "Field") -> "Field":
        if isinstance(text, Field):
            return text
        if isinstance(text, int):
            return cls(text)
        t = str(text).strip().upper()
        if t in ("Q", "QQ", "RATIONAL", "RATIONALS"):
            return cls(None)
        if t.startswith("F_"):
            t = t[2:]
        elif t.startswith("F") or t.startswith("GF"):
            t = t.lstrip("GF")
        return cls(int(t))

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def order(self) -> int | None:
        return self.p

    @property
    def dtype(self):
        return np.int64 if self.p is not None else object

    def __str__(self) -> str:
        return f"F{self.p}" if self.p is not None else "Q"

    # -- scalars ---------------------------------------------------------
    def scalar(self, x) -> int | Fraction:
        if self.p is not None:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def parse_scalar(self, text: str) -> int | Fraction:
        return self.scalar(Fraction(str(text)))

    def inv(self, x) -> int | Fraction:
        if self.p is not None:
            return pow(int(x), -1, self.p)
        return 1 / Fraction(x)

    def elements(self) -> list[int]:
        if self.p is None:
            raise ValueError("the rational field is infinite")
        return list(range(self.p))

    def units(self) -> list[int]:
        return self.elements()[1:]

    def random_scalar(self, rng: random.Random, bound: int = 7) -> int | Fraction:
        if self.p is not None:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-bound, bound))

    def to_json(self, x) -> str:
        return str(self.scalar(x))

    # -- arrays ----------------------------------------------------------
    def array(self, data) -> np.ndarray:
        if self.p is not None:
            a = np.array(data, dtype=object)
            if a.size:
                a = np.vectorize(self.scalar, otypes=[object])(a)
            return a.astype(np.int64)
        a = np.array(data, dtype=object)
        if a.size:
            a = np.vectorize(Fraction, otypes=[object])(a)
        return a

    def zeros(self, shape) -> np.ndarray:
        if self.p is not None:
            return np.zeros(shape, dtype=np.int64)
        z = np.empty(shape, dtype=object)
        z.fill(Fraction(0))
        return z

    def eye(self, n: int) -> np.ndarray:
        e = self.zeros((n, n))
        for i in range(n):
            e[i, i] = 1 if self.p is not None else Fraction(1)
        return e

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p is not None:
            return np.mod(a, self.p)
        return a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p is not None:
            return np.mod(a @ b, self.p)
        if a.shape[-1] == 0:
            return self.zeros(a.shape[:-1] + b.shape[-1:])
        return a @ b

    def einsum(self, spec: str, *ops: np.ndarray) -> np.ndarray:
        out = np.einsum(spec, *ops)
        if self.p is not None:
            return np.mod(out, self.p)
        return out

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a != 0)


QQ = Field(None)
GF2 = Field(2)
GF3 = Field(3)


def _as(field: Field, A) -> np.ndarray:
    if isinstance(A, np.ndarray) and A.dtype == (np.int64 if field.p is not None else object):
        return A.copy()
    return field.array(A)


def rref(A, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = _as(field, A)
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    m, n = R.shape
    if field.p == 2:
        return _rref_gf2(R)
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(R[row:, col] != 0)
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = field.reduce(R[row] * field.inv(R[row, col]))
        others = np.flatnonzero(R[:, col] != 0)
        others = others[others != row]
        if others.size:
            R[others] = field.reduce(R[others] - np.outer(R[others, col], R[row]))
        pivots.append(col)
        row += 1
    return R, pivots


def _rref_gf2(R: np.ndarray) -> tuple[np.ndarray, list[int]]:
    # rows packed into python ints; bit j <-> column j
    m, n = R.shape
    rows = []
    for i in range(m):
        v = 0
        for j in np.flatnonzero(R[i]):
            v |= 1 << int(j)
        rows.append(v)
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        bit = 1 << col
        piv = next((i for i in range(r, m) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        for i in range(m):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(col)
        r += 1
    out = np.zeros((m, n), dtype=np.int64)
    for i, v in enumerate(rows):
        j = 0
        while v:
            if v & 1:
                out[i, j] = 1
            v >>= 1
            j += 1
    return out, pivots


def _gf2_rank(A: np.ndarray) -> int:
    m, n = A.shape
    rows = []
    for i in range(m):
        v = 0
        for j in np.flatnonzero(A[i]):
            v |= 1 << int(j)
        if v:
            rows.append(v)
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def rank(A, field: Field) -> int:
    A = _as(field, A)
    if A.size == 0:
        return 0
    if field.p == 2:
        return _gf2_rank(A)
    return len(rref(A, field)[1])


def nullspace(A, field: Field) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as the rows of the returned matrix."""
    A = _as(field, A)
    m, n = A.shape
    if m == 0:
        return field.eye(n)
    R, pivots = rref(A, field)
    free = [j for j in range(n) if j not in set(pivots)]
    K = field.zeros((len(free), n))
    for k, j in enumerate(free):
        K[k, j] = 1
        for i, pc in enumerate(pivots):
            K[k, pc] = field.reduce(-R[i, j]) if field.p is not None else -R[i, j]
    return K


def solve_affine(A, b, field: Field) -> tuple[np.ndarray, np.ndarray]:
    """Particular solution of ``A x = b`` and a kernel basis (rows).

    Raises :class:`Inconsistent` when no solution exists.  The particular
    solution has zeros in every free coordinate.
    """
    A = _as(field, A)
    b = _as(field, b).reshape(-1)
    m, n = A.shape
    if b.shape[0] != m:
        raise ValueError("shape mismatch")
    aug = field.zeros((m, n + 1))
    aug[:, :n] = A
    aug[:, n] = b
    R, pivots = rref(aug, field)
    if n in pivots:
        raise Inconsistent("system is inconsistent")
    x = field.zeros(n)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x, nullspace(A, field)


def inverse(A, field: Field) -> np.ndarray:
    A = _as(field, A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of non-square matrix")
    aug = field.zeros((n, 2 * n))
    aug[:, :n] = A
    aug[:, n:] = field.eye(n)
    R, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def is_invertible(A, field: Field) -> bool:
    A = _as(field, A)
    return A.shape[0] == A.shape[1] and rank(A, field) == A.shape[0]


def row_space_basis(A, field: Field) -> np.ndarray:
    R, pivots = rref(A, field)
    return R[: len(pivots)]


def independent_rows(rows: np.ndarray, field: Field, start: np.ndarray | None = None) -> list[int]:
    """Indices of ``rows`` that extend the span of ``start`` greedily."""
    n = rows.shape[1]
    basis = field.zeros((0, n)) if start is None else row_space_basis(start, field)
    r0 = basis.shape[0]
    picked = []
    for i in range(rows.shape[0]):
        cand = np.vstack([basis, rows[i : i + 1]])
        if rank(cand, field) > r0:
            basis = cand
            r0 += 1
            picked.append(i)
    return picked


def iter_vectors(field: Field, dim: int) -> Iterator[tuple[int, ...]]:
    """All coefficient vectors of a finite field, in lexicographic order."""
    if field.p is None:
        raise ValueError("cannot enumerate a vector space over Q")
    yield from _product(range(field.p), dim)


def _product(rng: Sequence[int], dim: int):
    import itertools

    return itertools.product(rng, repeat=dim)


def combine(field: Field, coeffs, basis: Sequence[np.ndarray]) -> np.ndarray:
    """Linear combination ``sum c_i * basis[i]`` of equally shaped arrays."""
    if not len(basis):
        raise ValueError("empty basis")
    out = field.zeros(basis[0].shape)
    for c, b in zip(coeffs, basis):
        if c:
            out = out + c * b
    return field.reduce(out)
