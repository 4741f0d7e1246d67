"""
Chevalley data for sl(n): Cartan matrix, the combinations Htilde_i,
the adjoint-action exponents of the torus elements K_i = exp(h*Htilde_i),
and the fundamental n-dimensional representation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .ring import LaurentPoly, VarSet

__all__ = [
    "ChevalleyData",
    "FundamentalRep",
    "build_chevalley",
    "fundamental_rep",
    "mirrored_ad_table",
    "torus_exponents",
]

Matrix = list[list[Fraction]]


def _check_n(n):
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"sl(n) needs an integer n >= 2, got {n!r}")


def cartan_matrix(n: int) -> list[list[int]]:
    r = n - 1
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(r)] for i in range(r)]


def htilde_coeffs(n: int) -> list[list[Fraction]]:
    """Row i (0-based) expresses Htilde_{i+1} in the basis H_1..H_{n-1}."""
    rows = []
    for i in range(1, n + 1):
        row = []
        for k in range(1, n):
            if k >= i:
                row.append(Fraction(n - k, n))
            else:
                row.append(Fraction(-k, n))
        rows.append(row)
    return rows


@dataclass(frozen=True)
class ChevalleyData:
    n: int
    cartan: tuple[tuple[int, ...], ...]
    htilde: tuple[tuple[Fraction, ...], ...]
    # ad_plus[m][j]: Ad K_{m+1} (X_{j+1}^+) = q^{ad_plus[m][j]} X_{j+1}^+, m = 0..n-1
    ad_plus: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return self.n - 1

    def ad_exponent(self, m: int, j: int, sign: int = +1) -> int:
        """Exponent c(m, j) for K_m acting on X_j^(sign); 1-based indices."""
        c = self.ad_plus[m - 1][j - 1]
        return c if sign > 0 else -c

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "cartan": [list(r) for r in self.cartan],
            "htilde": [[str(c) for c in r] for r in self.htilde],
            "ad_plus": [list(r) for r in self.ad_plus],
            "ad_minus": [[-c for c in r] for r in self.ad_plus],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def build_chevalley(n: int) -> ChevalleyData:
    _check_n(n)
    A = cartan_matrix(n)
    H = htilde_coeffs(n)
    table = []
    for m in range(n):
        row = []
        for j in range(n - 1):
            c = sum(H[m][k] * A[k][j] for k in range(n - 1))
            if c.denominator != 1:
                raise ArithmeticError(f"non-integral adjoint exponent {c} at ({m + 1},{j + 1})")
            row.append(int(c))
        table.append(tuple(row))
    return ChevalleyData(
        n=n,
        cartan=tuple(tuple(r) for r in A),
        htilde=tuple(tuple(r) for r in H),
        ad_plus=tuple(table),
    )


def mirrored_ad_table(n: int) -> list[list[tuple[int, int]]]:
    """Three-case adjoint table with the lower-sign branch mirrored.

    Entry [m][j] is ``(exp_plus, exp_minus)``.  Here the lower-sign branch
    puts ``q^{+1}`` at ``j = i + 1``, whereas direct computation puts it at
    ``j = i - 1``.  Kept for comparison against :func:`build_chevalley`.
    """
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n):
            plus = 1 if j == i else -1 if j == i - 1 else 0
            minus = -1 if j == i else 1 if j == i + 1 else 0
            row.append((plus, minus))
        out.append(row)
    return out


def torus_exponents(n: int, i: int) -> tuple[int, ...]:
    """K_i in the independent basis K_1..K_{n-1}; K_n = (K_1...K_{n-1})^-1."""
    if not 1 <= i <= n:
        raise ValueError(f"torus index {i} out of range 1..{n}")
    if i == n:
        return (-1,) * (n - 1)
    return tuple(1 if k == i else 0 for k in range(1, n))


def _zeros(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _unit(n, i, j):
    m = _zeros(n)
    m[i][j] = Fraction(1)
    return m


def matmul_q(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def bracket(a: Matrix, b: Matrix) -> Matrix:
    ab, ba = matmul_q(a, b), matmul_q(b, a)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


@dataclass(frozen=True)
class FundamentalRep:
    """Chevalley generators of sl(n) as n x n rational matrices.

    ``K[i]`` is the diagonal of K_{i+1} as Laurent monomials in ``v`` with
    ``q = v**n``.
    """

    n: int
    x_plus: tuple
    x_minus: tuple
    h: tuple
    htilde: tuple
    K: tuple
    ring: VarSet

    @property
    def root_power(self) -> int:
        return self.n

    def k_diag(self, exps: tuple[int, ...]) -> list[LaurentPoly]:
        """Diagonal of the torus monomial K_1^e1 ... K_{n-1}^e_{n-1}."""
        out = []
        for a in range(self.n):
            p = 0
            for m, e in enumerate(exps):
                p += e * self._htilde_eig(m, a)
            out.append(self.ring.monomial({"v": p}))
        return out

    def _htilde_eig(self, m: int, a: int) -> int:
        # n * eigenvalue of Htilde_{m+1} on basis vector a
        val = self.htilde[m][a][a] * self.n
        assert val.denominator == 1
        return int(val)


def fundamental_rep(n: int, ring: VarSet | None = None) -> FundamentalRep:
    _check_n(n)
    ring = ring or VarSet(["v"])
    if "v" not in ring:
        raise ValueError("the representation ring needs a root variable 'v'")
    xp = tuple(_unit(n, i, i + 1) for i in range(n - 1))
    xm = tuple(_unit(n, i + 1, i) for i in range(n - 1))
    hs = []
    for i in range(n - 1):
        m = _zeros(n)
        m[i][i] = Fraction(1)
        m[i + 1][i + 1] = Fraction(-1)
        hs.append(m)
    hts = []
    for i in range(n):
        m = _zeros(n)
        for a in range(n):
            m[a][a] = (Fraction(1) if a == i else Fraction(0)) - Fraction(1, n)
        hts.append(m)
    rep = FundamentalRep(n=n, x_plus=xp, x_minus=xm, h=tuple(hs), htilde=tuple(hts), K=(), ring=ring)
    ks = tuple(tuple(rep.k_diag(torus_exponents(n, i))) for i in range(1, n + 1))
    return FundamentalRep(n=n, x_plus=xp, x_minus=xm, h=tuple(hs), htilde=tuple(hts), K=ks, ring=ring)
