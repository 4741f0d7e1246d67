"""
Normal-form engine for tensor products of torus-extended algebras.

Every tensor slot carries the full torus K_1..K_r together with one or
more mutually commuting generators X_g.  The only rewrite rule is

    K_m X_g = c[g][m] X_g K_m,

with ``c[g][m]`` a Laurent monomial of the coefficient ring (a power of
``q`` in the standard case).  Per slot a word is normal ordered as
``K^a X^m``; these words form a basis, so equality of normal forms is
equality of elements.  Different slots commute.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .ring import LaurentPoly, VarSet

__all__ = ["SlotSpec", "AlgebraSignature", "AlgebraElement", "nf_multiply", "commutator", "invert"]

SlotWord = tuple[tuple[int, ...], tuple[int, ...]]  # (torus exponents, X powers)
Word = tuple[SlotWord, ...]


@dataclass(frozen=True)
class SlotSpec:
    """One tensor factor.

    ``comm[g][m]`` is the exponent vector (in the ring) of the monomial
    picked up by ``K_m X_g = c X_g K_m``.
    """

    name: str
    gens: tuple[str, ...]
    comm: tuple[tuple[tuple[int, ...], ...], ...]


class AlgebraSignature:
    """Coefficient ring, torus generator names and slot layout."""

    def __init__(self, ring: VarSet, torus: Sequence[str], slots: Iterable[SlotSpec]):
        self.ring = ring
        self.torus = tuple(torus)
        self.slots = tuple(slots)
        r = len(self.torus)
        for s in self.slots:
            if len(s.comm) != len(s.gens):
                raise ValueError(f"slot {s.name}: one commutation row per generator")
            for row in s.comm:
                if len(row) != r or any(len(e) != len(ring) for e in row):
                    raise ValueError(f"slot {s.name}: bad commutation data")
        self._slot_index = {s.name: i for i, s in enumerate(self.slots)}
        if len(self._slot_index) != len(self.slots):
            raise ValueError("duplicate slot names")
        self._key = (ring, self.torus, self.slots)

    def __eq__(self, other):
        return isinstance(other, AlgebraSignature) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"AlgebraSignature(slots={[s.name for s in self.slots]}, torus={list(self.torus)})"

    @classmethod
    def q_power(cls, ring: VarSet, slots: Sequence[tuple[str, Sequence[str], Sequence[Sequence[int]]]],
                torus: Sequence[str], qvar: str = "q") -> "AlgebraSignature":
        """Signature whose commutation monomials are integer powers of ``qvar``."""
        qi = ring.index(qvar)
        specs = []
        for name, gens, exps in slots:
            comm = []
            for row in exps:
                comm.append(tuple(tuple(e if k == qi else 0 for k in range(len(ring))) for e in row))
            specs.append(SlotSpec(name, tuple(gens), tuple(comm)))
        return cls(ring, torus, specs)

    def slot_index(self, name: str) -> int:
        return self._slot_index[name]

    # -- element constructors -------------------------------------------

    def _empty_slot(self, s: SlotSpec) -> SlotWord:
        return ((0,) * len(self.torus), (0,) * len(s.gens))

    def identity_word(self) -> Word:
        return tuple(self._empty_slot(s) for s in self.slots)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def scalar(self, c) -> "AlgebraElement":
        c = self._coeff(c)
        return AlgebraElement(self, {self.identity_word(): c})

    def one(self) -> "AlgebraElement":
        return self.scalar(1)

    def _coeff(self, c) -> LaurentPoly:
        if isinstance(c, int):
            return self.ring.const(c)
        if isinstance(c, str):
            return self.ring.parse(c)
        if c.vars != self.ring:
            raise ValueError(f"coefficient ring mismatch: {c.vars} vs {self.ring}")
        return c

    def word(self, parts: Mapping[str, tuple[Sequence[int], Sequence[int] | int]], coeff=1) -> "AlgebraElement":
        """Single-term element from ``{slot_name: (torus_exps, x_pows)}``."""
        w = list(self.identity_word())
        for name, (tor, xp) in parts.items():
            s = self.slots[self.slot_index(name)]
            if isinstance(xp, int):
                xp = (xp,)
            tor, xp = tuple(tor), tuple(xp)
            if len(tor) != len(self.torus) or len(xp) != len(s.gens):
                raise ValueError(f"bad word shape for slot {name}")
            if any(x < 0 for x in xp):
                raise ValueError("X powers must be nonnegative")
            w[self.slot_index(name)] = (tor, xp)
        return AlgebraElement(self, {tuple(w): self._coeff(coeff)})

    def torus_word(self, slot: str, exps: Sequence[int], coeff=1) -> "AlgebraElement":
        s = self.slots[self.slot_index(slot)]
        return self.word({slot: (exps, (0,) * len(s.gens))}, coeff)

    def gen(self, slot: str, g: int | str = 0, power: int = 1, coeff=1) -> "AlgebraElement":
        s = self.slots[self.slot_index(slot)]
        gi = s.gens.index(g) if isinstance(g, str) else g
        xp = tuple(power if k == gi else 0 for k in range(len(s.gens)))
        return self.word({slot: ((0,) * len(self.torus), xp)}, coeff)

    # -- the rewrite rule -------------------------------------------------

    def word_product(self, w1: Word, w2: Word) -> tuple[Word, tuple[int, ...]]:
        """Normal-ordered ``w1 * w2`` and the ring exponent of the scalar picked up."""
        out = []
        shift = [0] * len(self.ring)
        for s, (t1, x1), (t2, x2) in zip(self.slots, w1, w2):
            # X^m K^b = prod c[g][m]^(-b_m * m_g) K^b X^m
            for g, mg in enumerate(x1):
                if not mg:
                    continue
                for m, bm in enumerate(t2):
                    if not bm:
                        continue
                    k = -bm * mg
                    for idx, e in enumerate(s.comm[g][m]):
                        if e:
                            shift[idx] += k * e
            out.append((tuple(a + b for a, b in zip(t1, t2)), tuple(a + b for a, b in zip(x1, x2))))
        return tuple(out), tuple(shift)


class AlgebraElement:
    """Finite sum of normal-ordered words with Laurent coefficients."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: Mapping[Word, LaurentPoly]):
        self.sig = sig
        self.terms = {w: c for w, c in terms.items() if not c.is_zero()}

    def _check(self, other: "AlgebraElement"):
        if other.sig != self.sig:
            raise ValueError("signature mismatch")

    def _lift(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        if isinstance(other, (int, LaurentPoly)):
            return self.sig.scalar(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = self.sig.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.sig == other.sig and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return AlgebraElement(self.sig, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.sig, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            c = self.sig._coeff(other)
            return AlgebraElement(self.sig, {w: v * c for w, v in self.terms.items()})
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return nf_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        out = self.sig.one()
        for _ in range(k):
            out = out * self
        return out

    def support(self) -> set[int]:
        """Indices of slots carrying a nontrivial torus or X factor."""
        used = set()
        for w in self.terms:
            for i, (t, x) in enumerate(w):
                if any(t) or any(x):
                    used.add(i)
        return used

    def x_degree(self) -> set[tuple[int, ...]]:
        return {tuple(sum(x) for _, x in w) for w in self.terms}

    def map_coeffs(self, fn) -> "AlgebraElement":
        return AlgebraElement(self.sig, {w: fn(c) for w, c in self.terms.items()})

    def subs(self, **images) -> "AlgebraElement":
        return self.map_coeffs(lambda c: c.subs(**images))

    def sorted_terms(self) -> list[tuple[Word, LaurentPoly]]:
        return sorted(self.terms.items(), key=lambda item: item[0])

    # -- text / JSON -------------------------------------------------------

    def _word_str(self, w: Word) -> str:
        parts = []
        for s, (t, x) in zip(self.sig.slots, w):
            fac = []
            for name, e in zip(self.sig.torus, t):
                if e:
                    fac.append(name if e == 1 else f"{name}^{e}")
            for g, e in zip(s.gens, x):
                if e:
                    fac.append(g if e == 1 else f"{g}^{e}")
            parts.append("*".join(fac) if fac else "1")
        return " (x) ".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for w, c in self.sorted_terms():
            cs = str(c)
            if len(c.terms) > 1:
                cs = f"({cs})"
            out.append(f"{cs}*[{self._word_str(w)}]")
        return " + ".join(out)

    def __repr__(self):
        return f"AlgebraElement({self})"

    def to_json(self) -> list:
        out = []
        for w, c in self.sorted_terms():
            slots = []
            for s, (t, x) in zip(self.sig.slots, w):
                slots.append({"slot": s.name, "torus": list(t), "x": list(x)})
            out.append({"coeff": c.to_json()["terms"], "word": slots})
        return out

    @classmethod
    def from_json(cls, sig: AlgebraSignature, data: list) -> "AlgebraElement":
        terms = {}
        for item in data:
            w = sig.identity_word()
            w = list(w)
            for part in item["word"]:
                w[sig.slot_index(part["slot"])] = (tuple(part["torus"]), tuple(part["x"]))
            c = LaurentPoly.from_json({"vars": list(sig.ring.names), "terms": item["coeff"]}, sig.ring)
            terms[tuple(w)] = c
        return cls(sig, terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def nf_multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    sig = a.sig
    out: dict[Word, LaurentPoly] = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            w, shift = sig.word_product(w1, w2)
            c = (c1 * c2).shift(shift)
            out[w] = out[w] + c if w in out else c
    return AlgebraElement(sig, out)


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b - b * a


def invert(a: AlgebraElement) -> AlgebraElement:
    """Inverse of a torus monomial ``c * K^a`` (per slot) with unit ``c``."""
    if len(a.terms) != 1:
        raise ValueError(f"not invertible in this engine: {a}")
    (w, c), = a.terms.items()
    if any(any(x) for _, x in w):
        raise ValueError(f"X-bearing element is not invertible: {a}")
    inv_c = c.inverse()  # raises for non-units
    inv_w = tuple((tuple(-e for e in t), x) for t, x in w)
    return AlgebraElement(a.sig, {inv_w: inv_c})
