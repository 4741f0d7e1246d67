"""
Matrices whose entries are elements of a slot algebra.

Provides the products, Kronecker embeddings and relation residuals needed
to check RTT-type equations exactly, plus the quantum determinant and the
inverse of triangular generator matrices.
"""

from __future__ import annotations

import json
from itertools import permutations
from typing import Callable, Iterable, Sequence

from .rmatrix import RMatrix
from .slotalg import AlgebraElement, AlgebraSignature, invert

__all__ = [
    "OpMatrix",
    "matmul",
    "gauss_product",
    "rtt_residual",
    "relation_residual",
    "qdet",
    "triangular_inverse",
    "gauss_factors",
    "inversions",
]


class OpMatrix:
    """Rectangular grid of :class:`AlgebraElement` over one signature."""

    __slots__ = ("sig", "rows")

    def __init__(self, sig: AlgebraSignature, rows: Sequence[Sequence[AlgebraElement]]):
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("OpMatrix must be rectangular and nonempty")
        for r in rows:
            for x in r:
                if x.sig != sig:
                    raise ValueError("entry signature mismatch")
        self.sig = sig
        self.rows = rows

    @classmethod
    def identity(cls, sig: AlgebraSignature, n: int) -> "OpMatrix":
        return cls(sig, [[sig.one() if i == j else sig.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, sig: AlgebraSignature, r: int, c: int | None = None) -> "OpMatrix":
        return cls(sig, [[sig.zero() for _ in range(c or r)] for _ in range(r)])

    @classmethod
    def diagonal(cls, sig: AlgebraSignature, diag: Sequence[AlgebraElement]) -> "OpMatrix":
        n = len(diag)
        return cls(sig, [[diag[i] if i == j else sig.zero() for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij) -> AlgebraElement:
        i, j = ij
        return self.rows[i][j]

    def entry(self, i: int, j: int) -> AlgebraElement:
        """1-based access, matching t_ij notation."""
        return self.rows[i - 1][j - 1]

    def replace(self, i: int, j: int, value: AlgebraElement) -> "OpMatrix":
        rows = [list(r) for r in self.rows]
        rows[i][j] = value
        return OpMatrix(self.sig, rows)

    def map(self, fn: Callable[[AlgebraElement], AlgebraElement]) -> "OpMatrix":
        return OpMatrix(self.sig, [[fn(x) for x in r] for r in self.rows])

    def __matmul__(self, other: "OpMatrix") -> "OpMatrix":
        return matmul(self, other)

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        self._same_shape(other)
        return OpMatrix(self.sig, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        self._same_shape(other)
        return OpMatrix(self.sig, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def _same_shape(self, other):
        if self.shape != other.shape or self.sig != other.sig:
            raise ValueError("shape or signature mismatch")

    def __eq__(self, other):
        if not isinstance(other, OpMatrix):
            return NotImplemented
        return self.sig == other.sig and self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def first_nonzero(self) -> tuple[int, int] | None:
        """Row-major first nonzero entry, 0-based, or None."""
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if not x.is_zero():
                    return i, j
        return None

    def nonzero_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j, x in enumerate(r) if not x.is_zero()]

    def support(self) -> set[int]:
        out: set[int] = set()
        for r in self.rows:
            for x in r:
                out |= x.support()
        return out

    def diagonal_entries(self) -> list[AlgebraElement]:
        return [self.rows[i][i] for i in range(min(self.shape))]

    def scalar_left(self, R: RMatrix) -> "OpMatrix":
        """R * self for a scalar matrix R."""
        nr, nc = self.shape
        if R.size != nr:
            raise ValueError("dimension mismatch")
        rows = [[self.sig.zero() for _ in range(nc)] for _ in range(nr)]
        for i, entries in R.rows().items():
            for k, c in entries:
                for j in range(nc):
                    x = self.rows[k][j]
                    if x:
                        rows[i][j] = rows[i][j] + x * c
        return OpMatrix(self.sig, rows)

    def scalar_right(self, R: RMatrix) -> "OpMatrix":
        """self * R for a scalar matrix R."""
        nr, nc = self.shape
        if R.size != nc:
            raise ValueError("dimension mismatch")
        rows = [[self.sig.zero() for _ in range(nc)] for _ in range(nr)]
        for j, entries in R.cols().items():
            for k, c in entries:
                for i in range(nr):
                    x = self.rows[i][k]
                    if x:
                        rows[i][j] = rows[i][j] + x * c
        return OpMatrix(self.sig, rows)

    def embed_first(self) -> "OpMatrix":
        """T (x) I: entry ((i,k),(j,l)) = t_ij delta_kl."""
        n = self.shape[0]
        z = self.sig.zero()
        return OpMatrix(self.sig, [[self.rows[i][j] if k == l else z for j in range(n) for l in range(n)]
                                   for i in range(n) for k in range(n)])

    def embed_second(self) -> "OpMatrix":
        """I (x) T: entry ((i,k),(j,l)) = delta_ij t_kl."""
        n = self.shape[0]
        z = self.sig.zero()
        return OpMatrix(self.sig, [[self.rows[k][l] if i == j else z for j in range(n) for l in range(n)]
                                   for i in range(n) for k in range(n)])

    def to_json(self) -> list:
        return [[x.to_json() for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, sig: AlgebraSignature, data) -> "OpMatrix":
        return cls(sig, [[AlgebraElement.from_json(sig, x) for x in r] for r in data])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __str__(self):
        return "\n".join(f"t{i + 1}{j + 1} = {x}" for i, r in enumerate(self.rows) for j, x in enumerate(r))


def matmul(a: OpMatrix, b: OpMatrix) -> OpMatrix:
    if a.sig != b.sig:
        raise ValueError("signature mismatch")
    (r, m), (m2, c) = a.shape, b.shape
    if m != m2:
        raise ValueError(f"inner dimensions differ: {a.shape} x {b.shape}")
    rows = []
    for i in range(r):
        row = []
        for j in range(c):
            acc = a.sig.zero()
            for k in range(m):
                x, y = a.rows[i][k], b.rows[k][j]
                if x and y:
                    acc = acc + x * y
            row.append(acc)
        rows.append(row)
    return OpMatrix(a.sig, rows)


def gauss_product(tminus: OpMatrix, tplus: OpMatrix) -> OpMatrix:
    """``T^(-) (x) T^(+)``: plain matrix product of factors on disjoint slots."""
    overlap = tminus.support() & tplus.support()
    if overlap:
        names = sorted(tminus.sig.slots[i].name for i in overlap)
        raise ValueError(f"factors share slots {names}")
    return matmul(tminus, tplus)


def _pair(A: OpMatrix, B: OpMatrix, reverse: bool) -> OpMatrix:
    """A_1 B_2 (entries a_ij b_kl), or B_2 A_1 (entries b_kl a_ij) if ``reverse``."""
    n = A.shape[0]
    z = A.sig.zero()
    rows = []
    for i in range(n):
        for k in range(n):
            row = []
            for j in range(n):
                for l in range(n):
                    a, b = A.rows[i][j], B.rows[k][l]
                    row.append((b * a if reverse else a * b) if (a and b) else z)
            rows.append(row)
    return OpMatrix(A.sig, rows)


def relation_residual(R: RMatrix | None, A: OpMatrix, B: OpMatrix,
                      R_right: RMatrix | None = None) -> OpMatrix:
    """``R A_1 B_2 - B_2 A_1 R'`` (``R' = R``); ``R=None`` means identity."""
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError("square matrices of equal size required")
    if R is not None and R.size != A.shape[0] ** 2:
        raise ValueError(f"R is {R.size}x{R.size}, T is {A.shape}")
    R_right = R if R_right is None else R_right
    lhs = _pair(A, B, reverse=False)
    rhs = _pair(A, B, reverse=True)
    if R is not None:
        lhs = lhs.scalar_left(R)
        rhs = rhs.scalar_right(R_right)
    return lhs - rhs


def rtt_residual(R: RMatrix, T: OpMatrix) -> OpMatrix:
    """``R T_1 T_2 - T_2 T_1 R`` with T_1 = T (x) I, T_2 = I (x) T."""
    return relation_residual(R, T, T)


def inversions(perm: Sequence[int]) -> int:
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


def qdet(T: OpMatrix, n: int | None = None, q=None) -> AlgebraElement:
    """sum_sigma (-q)^inv(sigma) t_{1 s(1)} ... t_{n s(n)}, rows ascending."""
    r, c = T.shape
    if r != c:
        raise ValueError("qdet needs a square matrix")
    if n is not None and n != r:
        raise ValueError(f"n={n} does not match matrix size {r}")
    ring = T.sig.ring
    mq = -(q if q is not None else ring.var("q"))
    total = T.sig.zero()
    for perm in permutations(range(r)):
        prod = T.sig.one()
        for i, j in enumerate(perm):
            prod = prod * T.rows[i][j]
            if not prod:
                break
        if prod:
            total = total + prod * mq ** inversions(perm)
    return total


def triangular_inverse(T: OpMatrix, shape: str) -> OpMatrix:
    """Exact inverse of a triangular matrix with invertible torus diagonal.

    Writes ``T = D + N`` and sums ``sum_k (-D^-1 N)^k D^-1``, which is a
    finite sum because ``D^-1 N`` is strictly triangular.
    """
    n, m = T.shape
    if n != m:
        raise ValueError("square matrix required")
    for i in range(n):
        for j in range(n):
            bad = (j < i) if shape == "upper" else (j > i) if shape == "lower" else None
            if bad is None:
                raise ValueError(f"shape must be 'upper' or 'lower', got {shape!r}")
            if bad and T.rows[i][j]:
                raise ValueError(f"matrix is not {shape} triangular at ({i}, {j})")
    dinv = [invert(T.rows[i][i]) for i in range(n)]
    Dinv = OpMatrix.diagonal(T.sig, dinv)
    N = T.map(lambda x: x)
    for i in range(n):
        N = N.replace(i, i, T.sig.zero())
    step = (Dinv @ N).map(lambda x: -x)
    term = OpMatrix.identity(T.sig, n)
    acc = OpMatrix.identity(T.sig, n)
    for _ in range(n - 1):
        term = term @ step
        if term.is_zero():
            break
        acc = acc + term
    return acc @ Dinv


def gauss_factors(T: OpMatrix):
    """Split ``T = T_L T_D T_U`` (unit-triangular T_L, T_U) for T a
    product of a lower and an upper triangular factor.

    Works from the principal minors recursively: with ``d_1 = t_11`` the
    first column and row give ``l_i1 = t_i1 d_1^-1`` and
    ``u_1j = d_1^-1 t_1j``; the Schur complement continues the recursion.
    Needs every pivot to be an invertible torus monomial.
    """
    n = T.shape[0]
    sig = T.sig
    S = [list(r) for r in T.rows]
    L = [[sig.one() if i == j else sig.zero() for j in range(n)] for i in range(n)]
    U = [[sig.one() if i == j else sig.zero() for j in range(n)] for i in range(n)]
    D = []
    for k in range(n):
        d = S[k][k]
        dinv = invert(d)
        D.append(d)
        for i in range(k + 1, n):
            L[i][k] = S[i][k] * dinv
        for j in range(k + 1, n):
            U[k][j] = dinv * S[k][j]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                S[i][j] = S[i][j] - L[i][k] * d * U[k][j]
    return OpMatrix(sig, L), OpMatrix.diagonal(sig, D), OpMatrix(sig, U)


def is_triangular(T: OpMatrix, shape: str) -> bool:
    n = T.shape[0]
    return all(not T.rows[i][j] for i in range(n) for j in range(n)
               if ((j < i) if shape == "upper" else (j > i)))


def perturb(T: OpMatrix, i: int, j: int, factor) -> OpMatrix:
    """Multiply entry (i, j), 0-based, by a scalar."""
    return T.replace(i, j, T.rows[i][j] * factor)


def involved_positions(R: RMatrix | None, n: int, p: int, q: int) -> set[tuple[int, int]]:
    """Residual positions of ``R A_1 B_2 - B_2 A_1 R`` whose formula mentions entry (p, q)."""
    rows = R.rows() if R is not None else {i: [(i, None)] for i in range(n * n)}
    cols = R.cols() if R is not None else {i: [(i, None)] for i in range(n * n)}
    out = set()
    for r in range(n * n):
        for c in range(n * n):
            j, l = divmod(c, n)
            hit = any(divmod(s, n)[0] == p and j == q or divmod(s, n)[1] == p and l == q
                      for s, _ in rows.get(r, ()))
            i, k = divmod(r, n)
            hit = hit or any(i == p and divmod(s, n)[0] == q or k == p and divmod(s, n)[1] == q
                             for s, _ in cols.get(c, ()))
            if hit:
                out.add((r, c))
    return out


def union_support(items: Iterable[OpMatrix]) -> set[int]:
    out: set[int] = set()
    for m in items:
        out |= m.support()
    return out
