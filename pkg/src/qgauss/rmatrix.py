"""
Scalar R-matrices: the standard SL_q(n) R, the two-parameter R_{p,q} of
GL_{p,q}(2), and the derived objects R_d, P and PRP.

Index convention: basis vector e_i (x) e_k sits at position ``i*n + k``
(first tensor factor varies slowest).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .ring import LaurentPoly, VarSet

__all__ = [
    "RMatrix",
    "standard_r",
    "rpq",
    "derived_parts",
    "yang_baxter_residual",
    "SL_RING_BASE",
    "GLPQ_RING",
    "catalog",
    "permutation",
    "sl_ring",
]

GLPQ_RING = VarSet(["k", "p", "q", "v", "c_plus", "c_minus"])
SL_RING_BASE = ("q", "v", "lambda")


@dataclass(frozen=True)
class RMatrix:
    """Sparse square matrix of Laurent polynomials."""

    size: int
    ring: VarSet
    entries: Mapping[tuple[int, int], LaurentPoly] = field(default_factory=dict)
    name: str = ""
    convention: str = "first-factor-slowest"

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.size and 0 <= j < self.size):
                raise IndexError((i, j))
            if v.vars != self.ring:
                raise ValueError("entry ring mismatch")
            if not v.is_zero():
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @property
    def n(self) -> int:
        r = round(self.size ** 0.5)
        if r * r != self.size:
            raise ValueError(f"size {self.size} is not a square")
        return r

    def __getitem__(self, ij) -> LaurentPoly:
        return self.entries.get(ij, self.ring.zero())

    def rows(self) -> dict[int, list[tuple[int, LaurentPoly]]]:
        out: dict[int, list] = {}
        for (i, j), v in sorted(self.entries.items()):
            out.setdefault(i, []).append((j, v))
        return out

    def cols(self) -> dict[int, list[tuple[int, LaurentPoly]]]:
        out: dict[int, list] = {}
        for (i, j), v in sorted(self.entries.items()):
            out.setdefault(j, []).append((i, v))
        return out

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if other.size != self.size or other.ring != self.ring:
            raise ValueError("shape or ring mismatch")
        cols = other.rows()
        out: dict[tuple[int, int], LaurentPoly] = {}
        for (i, k), a in self.entries.items():
            for j, b in cols.get(k, ()):
                out[(i, j)] = out[(i, j)] + a * b if (i, j) in out else a * b
        return RMatrix(self.size, self.ring, out)

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        out = dict(self.entries)
        for ij, v in other.entries.items():
            out[ij] = out[ij] - v if ij in out else -v
        return RMatrix(self.size, self.ring, out)

    def scale(self, c: LaurentPoly) -> "RMatrix":
        return RMatrix(self.size, self.ring, {ij: v * c for ij, v in self.entries.items()}, self.name)

    def map(self, fn, ring: VarSet | None = None) -> "RMatrix":
        return RMatrix(self.size, ring or self.ring, {ij: fn(v) for ij, v in self.entries.items()}, self.name)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, RMatrix) and self.size == other.size
                and self.ring == other.ring and self.entries == other.entries)

    __hash__ = None

    def dense(self) -> list[list[LaurentPoly]]:
        return [[self[i, j] for j in range(self.size)] for i in range(self.size)]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "size": self.size,
            "convention": self.convention,
            "vars": list(self.ring.names),
            "entries": [
                {"row": i, "col": j, "value": v.to_json()["terms"]}
                for (i, j), v in sorted(self.entries.items())
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def identity(cls, size: int, ring: VarSet) -> "RMatrix":
        return cls(size, ring, {(i, i): ring.one() for i in range(size)}, "I")

    def kron(self, other: "RMatrix") -> "RMatrix":
        out = {}
        for (i, j), a in self.entries.items():
            for (k, l), b in other.entries.items():
                out[(i * other.size + k, j * other.size + l)] = a * b
        return RMatrix(self.size * other.size, self.ring, out)


def sl_ring(n: int, extra: tuple[str, ...] = ()) -> VarSet:
    """Coefficient ring for SL_q(n): q, v (q = v^n), lambda, f_i, g_i."""
    names = list(SL_RING_BASE)
    names += [f"f{i}" for i in range(1, n)]
    names += [f"g{i}" for i in range(1, n)]
    names += list(extra)
    return VarSet(names)


def standard_r(n: int, ring: VarSet | None = None, placement: str = "lower",
               lam: LaurentPoly | None = None) -> RMatrix:
    """Standard SL_q(n) R-matrix.

    ``q`` on e_ii(x)e_ii, ``1`` on e_ii(x)e_jj (i != j), and ``lam`` on
    e_ij(x)e_ji for i > j (``placement="lower"``) or i < j (``"upper"``).
    ``lam`` defaults to q - q^-1.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    ring = ring or sl_ring(n)
    q = ring.var("q")
    if lam is None:
        lam = q - q ** -1
    if placement not in ("lower", "upper"):
        raise ValueError(f"placement must be 'lower' or 'upper', got {placement!r}")
    ent = {}
    for i in range(n):
        for j in range(n):
            ent[(i * n + j, i * n + j)] = q if i == j else ring.one()
            if (i > j) if placement == "lower" else (i < j):
                ent[(i * n + j, j * n + i)] = lam
    return RMatrix(n * n, ring, ent, name="sl_q")


def rpq(ring: VarSet = GLPQ_RING) -> RMatrix:
    """Two-parameter R_{p,q} in the variables k, p, q."""
    k, p, q = ring.var("k"), ring.var("p"), ring.var("q")
    ent = {
        (0, 0): k,
        (1, 1): p,
        (2, 1): k - p * q * k ** -1,
        (2, 2): q,
        (3, 3): k,
    }
    return RMatrix(4, ring, ent, name="gl_pq_2")


def permutation(n: int, ring: VarSet) -> RMatrix:
    one = ring.one()
    return RMatrix(n * n, ring, {(i * n + k, k * n + i): one for i in range(n) for k in range(n)}, "P")


@dataclass(frozen=True)
class DerivedParts:
    R_d: RMatrix
    P: RMatrix
    R_plus: RMatrix


def derived_parts(R: RMatrix) -> DerivedParts:
    n = R.n
    R_d = RMatrix(R.size, R.ring, {(i, i): v for (i, j), v in R.entries.items() if i == j}, "R_d")
    P = permutation(n, R.ring)
    return DerivedParts(R_d=R_d, P=P, R_plus=P @ R @ P)


def _embed3(R: RMatrix, a: int, b: int) -> RMatrix:
    """R acting on tensor factors a < b of V(x)V(x)V."""
    n = R.n
    out = {}
    for (rij, cij), v in R.entries.items():
        i, j = divmod(rij, n)
        k, l = divmod(cij, n)
        for m in range(n):
            row = [0, 0, 0]
            col = [0, 0, 0]
            c = 3 - a - b
            row[a], row[b], row[c] = i, j, m
            col[a], col[b], col[c] = k, l, m
            out[(row[0] * n * n + row[1] * n + row[2], col[0] * n * n + col[1] * n + col[2])] = v
    return RMatrix(n ** 3, R.ring, out)


def yang_baxter_residual(R: RMatrix) -> RMatrix:
    """R12 R13 R23 - R23 R13 R12."""
    R12, R13, R23 = _embed3(R, 0, 1), _embed3(R, 0, 2), _embed3(R, 1, 2)
    return (R12 @ R13 @ R23) - (R23 @ R13 @ R12)


@lru_cache(maxsize=None)
def catalog(name: str, n: int = 2) -> RMatrix:
    """Catalog lookup (``sl_q`` or ``gl_pq_2``); Yang-Baxter checked on first use."""
    if name == "sl_q":
        R = standard_r(n)
    elif name == "gl_pq_2":
        R = rpq()
    else:
        raise KeyError(f"unknown R-matrix {name!r}")
    if not yang_baxter_residual(R).is_zero():
        raise ArithmeticError(f"{name} fails the Yang-Baxter equation")
    return R
