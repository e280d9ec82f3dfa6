"""Idempotent search in small finite-dimensional algebras of matrices.

The algebras handled here are "tops" of endomorphism rings: a matrix algebra
``B`` which is the image of an endomorphism algebra under a homomorphism with
nilpotent kernel.  ``B`` is local iff the endomorphism ring is; a split element
of ``B`` (minimal polynomial with two coprime factors) gives an idempotent
modulo the kernel, which callers lift with ``e <- 3e^2 - 2e^3``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .exactla import Field, Inconsistent, rank, row_space_basis, solve_affine

DEFAULT_BUDGET = 2 ** 20


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive search would exceed its element budget."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def min_poly(field: Field, X: np.ndarray) -> list:
    """Monic minimal polynomial of a square matrix, coefficients low to high."""
    n = X.shape[0]
    powers = [field.eye(n)]
    while True:
        P = field.matmul(powers[-1], X)
        A = np.stack([p.reshape(-1) for p in powers], axis=1)
        try:
            c, _ = solve_affine(A, P.reshape(-1), field)
        except Inconsistent:
            powers.append(P)
            continue
        return [field.scalar(-x) for x in c] + [field.scalar(1)]


def _sympy_poly(field: Field, coeffs: list):
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(int(Fraction(c).numerator), int(Fraction(c).denominator)) * t ** i
               if field.p is None else int(c) * t ** i for i, c in enumerate(coeffs))
    if field.p is None:
        return sympy.Poly(expr, t, domain="QQ")
    return sympy.Poly(expr, t, modulus=field.p)


def _coeffs(field: Field, poly) -> list:
    cs = [field.scalar(Fraction(str(c)) if field.p is None else int(c)) for c in reversed(poly.all_coeffs())]
    return cs


def factor_poly(field: Field, coeffs: list) -> list[tuple]:
    """Irreducible factorization as (monic factor poly, multiplicity) pairs."""
    P = _sympy_poly(field, coeffs)
    _, facs = P.factor_list()
    out = []
    for f, m in facs:
        out.append((f.monic(), m))
    return out


def split_polynomial(field: Field, coeffs: list):
    """Polynomial ``u`` with ``u(X)`` a nontrivial idempotent, or None.

    ``u ≡ 1`` modulo the first primary component of the minimal polynomial and
    ``u ≡ 0`` modulo the rest.
    """
    facs = factor_poly(field, coeffs)
    if len(facs) < 2:
        return None
    facs.sort(key=lambda fm: (fm[0].degree(), str(fm[0].all_coeffs())))
    f1, m1 = facs[0]
    a = f1 ** m1
    b = facs[1][0] ** facs[1][1]
    for f, m in facs[2:]:
        b = b * f ** m
    # s*a + t*b = 1  => u = t*b is 1 mod a and 0 mod b
    _, t, _ = a.gcdex(b)
    u = (t * b).rem(a * b)
    return _coeffs(field, u)


def poly_eval_matrix(field: Field, coeffs: list, X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    out = field.zeros((n, n))
    for c in reversed(coeffs):
        out = field.matmul(out, X) + field.scalar(c) * field.eye(n)
        out = field.reduce(out)
    return out


@dataclass
class SplitResult:
    coeffs: np.ndarray   # coefficients of the split element in the basis
    poly: list           # idempotent polynomial


class TopAlgebra:
    """A unital matrix algebra given by a spanning set of square matrices."""

    def __init__(self, field: Field, mats: list[np.ndarray]):
        self.field = field
        if not mats:
            raise ValueError("empty algebra")
        self.n = mats[0].shape[0]
        flat = np.stack([m.reshape(-1) for m in mats]) if mats else field.zeros((0, self.n ** 2))
        # independent subset, remembering positions
        self.index: list[int] = []
        basis = field.zeros((0, self.n * self.n))
        for i in range(flat.shape[0]):
            cand = np.vstack([basis, flat[i:i + 1]])
            if rank(cand, field) > basis.shape[0]:
                basis = cand
                self.index.append(i)
        self.flat = basis
        self.mats = [basis[i].reshape(self.n, self.n) for i in range(basis.shape[0])]

    @property
    def dim(self) -> int:
        return len(self.mats)

    def element(self, coeffs) -> np.ndarray:
        f = self.field
        out = f.zeros((self.n, self.n))
        for c, m in zip(coeffs, self.mats):
            if c:
                out = out + f.scalar(c) * m
        return f.reduce(out)

    def _try(self, coeffs) -> SplitResult | None:
        X = self.element(coeffs)
        mp = min_poly(self.field, X)
        if len(mp) <= 2:
            return None
        u = split_polynomial(self.field, mp)
        if u is None:
            return None
        return SplitResult(np.array(coeffs, dtype=object), u)

    def _unit(self, i: int) -> list:
        c = [0] * self.dim
        c[i] = 1
        return c

    def local_certificate(self) -> bool:
        """True if ``span(b_i - λ_i)`` is a nilpotent ideal of codimension one."""
        f = self.field
        shifted = []
        for i, m in enumerate(self.mats):
            mp = min_poly(f, m)
            facs = factor_poly(f, mp)
            if len(facs) != 1 or facs[0][0].degree() != 1:
                return False
            lam = f.scalar(-_coeffs(f, facs[0][0])[0])
            shifted.append(f.reduce(m - lam * f.eye(self.n)))
        if not shifted:
            return True
        N = row_space_basis(np.stack([s.reshape(-1) for s in shifted]), f)
        if N.shape[0] >= self.dim:
            return False
        # nilpotency: powers of N shrink to zero (this also forces N·N ⊆ N-chain)
        cur = N
        for _ in range(self.n + 1):
            if cur.shape[0] == 0:
                break
            prods = [f.matmul(a.reshape(self.n, self.n), b.reshape(self.n, self.n)).reshape(-1)
                     for a in cur for b in N]
            cur = row_space_basis(np.stack(prods), f) if prods else cur[:0]
        if cur.shape[0]:
            return False
        # ideal: B·N ⊆ N and N·B ⊆ N
        r0 = N.shape[0]
        prods = []
        for b in self.mats:
            for a in N:
                A = a.reshape(self.n, self.n)
                prods.append(f.matmul(b, A).reshape(-1))
                prods.append(f.matmul(A, b).reshape(-1))
        return rank(np.vstack([N, np.stack(prods)]), f) == r0

    def find_split(self, budget: int = DEFAULT_BUDGET, seed: int = 0) -> SplitResult | None:
        """A split element, or None if the algebra is local."""
        f = self.field
        if self.dim <= 1:
            return None
        for i in range(self.dim):
            r = self._try(self._unit(i))
            if r is not None:
                return r
        rng = random.Random(seed)
        for _ in range(8 * self.dim):
            c = [f.random_scalar(rng) for _ in range(self.dim)]
            r = self._try(c)
            if r is not None:
                return r
        if self.local_certificate():
            return None
        if f.p is None:
            raise BudgetExceeded("no split element found and no locality certificate over Q")
        if f.p ** self.dim > budget:
            raise BudgetExceeded(f"exhaustive idempotent search needs {f.p}^{self.dim} elements")
        for c in itertools.product(range(f.p), repeat=self.dim):
            r = self._try(list(c))
            if r is not None:
                return r
        return None

    def is_local(self, budget: int = DEFAULT_BUDGET) -> bool:
        return self.find_split(budget) is None
