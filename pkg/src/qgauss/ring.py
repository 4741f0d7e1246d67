"""
Exact multivariate Laurent polynomials over the integers.

A polynomial is a sparse map from integer exponent vectors to nonzero
``int`` coefficients, tied to a fixed ordered :class:`VarSet`.  Values are
immutable once built.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, NamedTuple

__all__ = [
    "VarSet",
    "LaurentPoly",
    "Scaled",
    "NotDivisible",
    "laurent_arith",
    "substitute",
    "derive_at_one",
]


class NotDivisible(ArithmeticError):
    """Raised when an exact division leaves a remainder."""


class VarSet:
    """An ordered tuple of distinct variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"bad variable name {name!r}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarSet({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} (have {self.names})") from None

    def zero_exp(self) -> tuple[int, ...]:
        return (0,) * len(self.names)

    # constructors

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return LaurentPoly(self, {self.zero_exp(): 1})

    def const(self, c: int) -> "LaurentPoly":
        return LaurentPoly(self, {self.zero_exp(): c} if c else {})

    def var(self, name: str) -> "LaurentPoly":
        return self.monomial({name: 1})

    def monomial(self, powers: Mapping[str, int], coeff: int = 1) -> "LaurentPoly":
        exp = [0] * len(self.names)
        for name, e in powers.items():
            exp[self.index(name)] += e
        return LaurentPoly(self, {tuple(exp): coeff} if coeff else {})

    def gens(self) -> tuple["LaurentPoly", ...]:
        return tuple(self.var(name) for name in self.names)

    def parse(self, text: str) -> "LaurentPoly":
        return LaurentPoly.parse(self, text)


_TERM_SPLIT = re.compile(r"(?<![\^{])\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^\{?(-?\d+)\}?)?$")


def _exp_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class LaurentPoly:
    """Sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: VarSet, terms: Mapping[tuple[int, ...], int]):
        self.vars = vars
        self.terms = {e: c for e, c in terms.items() if c}
        for e in self.terms:
            if len(e) != len(vars):
                raise ValueError(f"exponent {e} does not fit {vars}")

    # -- helpers ---------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise ValueError(f"VarSet mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, int):
            return self.vars.const(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.vars.zero_exp() in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(self.vars.zero_exp(), 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items())

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(n for n, k in zip(self.vars.names, e) if k)
        return used

    def degree_in(self, name: str) -> tuple[int, int]:
        """(min, max) exponent of ``name``; (0, 0) for the zero polynomial."""
        i = self.vars.index(name)
        exps = [e[i] for e in self.terms]
        return (min(exps), max(exps)) if exps else (0, 0)

    def shift(self, exp: tuple[int, ...], coeff: int = 1) -> "LaurentPoly":
        """Multiply by the monomial ``coeff * x^exp``."""
        if not coeff:
            return self.vars.zero()
        return LaurentPoly(self.vars, {_exp_add(e, exp): c * coeff for e, c in self.terms.items()})

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _exp_add(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.vars.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit, i.e. a single term with coefficient +-1."""
        if len(self.terms) != 1:
            raise ValueError(f"only single-term polynomials are invertible, got {self}")
        (e, c), = self.terms.items()
        if c not in (1, -1):
            raise ValueError(f"coefficient {c} is not a unit in Z")
        return LaurentPoly(self.vars, {tuple(-x for x in e): c})

    def divexact(self, other) -> "LaurentPoly":
        """Exact quotient ``self / other``; raise :class:`NotDivisible` otherwise.

        Long division on the lexicographic leading term.  Lex order is a
        group order on exponent vectors, so an exact quotient is found term
        by term from the top; any candidate below the bound
        ``lowest(self) - lowest(other)`` proves a remainder.
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        if other.is_monomial():
            (e, c), = other.terms.items()
            out = {}
            for e1, c1 in self.terms.items():
                qc, r = divmod(c1, c)
                if r:
                    raise NotDivisible(f"{self} / {other}")
                out[tuple(a - b for a, b in zip(e1, e))] = qc
            return LaurentPoly(self.vars, out)
        lead_d = max(other.terms)
        lc_d = other.terms[lead_d]
        floor = tuple(a - b for a, b in zip(min(self.terms), min(other.terms)))
        rem = self
        quot: dict[tuple[int, ...], int] = {}
        while not rem.is_zero():
            lead_r = max(rem.terms)
            e = tuple(a - b for a, b in zip(lead_r, lead_d))
            if e < floor:
                raise NotDivisible(f"{self} / {other}")
            qc, r = divmod(rem.terms[lead_r], lc_d)
            if r:
                raise NotDivisible(f"{self} / {other}")
            quot[e] = qc
            rem = rem - other.shift(e, qc)
        return LaurentPoly(self.vars, quot)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.vars.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- substitution and calculus --------------------------------------

    def map_vars(self, target: VarSet, images: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """Ring homomorphism into ``target``.

        Every variable of ``self`` that occurs must either be in ``images``
        or exist under the same name in ``target``.  Negative powers need a
        monomial image.
        """
        imgs = []
        for name in self.vars.names:
            if name in images:
                img = images[name]
                if img.vars != target:
                    raise ValueError(f"image of {name} lives in {img.vars}, not {target}")
                imgs.append(img)
            elif name in target:
                imgs.append(target.var(name))
            else:
                imgs.append(None)
        result = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for name, img, k in zip(self.vars.names, imgs, e):
                if not k:
                    continue
                if img is None:
                    raise KeyError(f"variable {name!r} has no image in {target}")
                if k < 0 and not img.is_monomial():
                    raise ValueError(f"negative power of {name} needs a monomial image, got {img}")
                term = term * img ** k
            result = result + term
        return result

    def subs(self, **images) -> "LaurentPoly":
        """Substitute variables by polynomials in the same ring.

        Values may be polynomials, ints or strings parsed in this ring.
        """
        conv = {}
        for name, val in images.items():
            self.vars.index(name)
            if isinstance(val, str):
                val = self.vars.parse(val)
            elif isinstance(val, int):
                val = self.vars.const(val)
            conv[name] = val
        return self.map_vars(self.vars, conv)

    def evaluate(self, values: Mapping[str, Fraction | int]) -> Fraction:
        """Exact rational value; every used variable must be given a nonzero value."""
        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for name, k in zip(self.vars.names, e):
                if k:
                    term *= Fraction(values[name]) ** k
            total += term
        return total

    # -- text and JSON ---------------------------------------------------

    @classmethod
    def parse(cls, vars: VarSet, text: str) -> "LaurentPoly":
        """Parse e.g. ``"q^-1*lambda"``, ``"-q*lambda + 2"``, ``"q^{-2}"``."""
        src = text.strip()
        if not src:
            raise ValueError("empty polynomial")
        if src[0] not in "+-":
            src = "+" + src
        pieces = _TERM_SPLIT.split(src)
        # split yields ['', sign, term, sign, term, ...]
        if pieces[0].strip():
            raise ValueError(f"cannot parse {text!r}")
        result = vars.zero()
        for sign, body in zip(pieces[1::2], pieces[2::2]):
            body = body.strip()
            if not body:
                raise ValueError(f"cannot parse {text!r}")
            coeff = 1 if sign == "+" else -1
            powers: dict[str, int] = {}
            for factor in body.split("*"):
                factor = factor.strip()
                if re.fullmatch(r"\d+", factor):
                    coeff *= int(factor)
                    continue
                m = _FACTOR.match(factor)
                if not m:
                    raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
                name, exp = m.group(1), int(m.group(2) or 1)
                if name not in vars:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                powers[name] = powers.get(name, 0) + exp
            result = result + vars.monomial(powers, coeff)
        return result

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            factors = []
            for name, k in zip(self.vars.names, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars.names),
            "terms": [{"exp": list(e), "coeff": str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping, vars: VarSet | None = None) -> "LaurentPoly":
        vs = VarSet(data["vars"])
        if vars is not None and vars != vs:
            raise ValueError(f"VarSet mismatch: {vars} vs {vs}")
        terms = {}
        for t in data["terms"]:
            e = tuple(int(x) for x in t["exp"])
            if e in terms:
                raise ValueError(f"duplicate exponent {e}")
            terms[e] = int(t["coeff"])
        return cls(vars or vs, terms)


def laurent_arith(a: LaurentPoly, b, op: str) -> LaurentPoly:
    """Dispatch ``add|sub|mul|neg|int_pow``; for ``int_pow`` ``b`` is the exponent."""
    if op == "add":
        return a + a._coerce(b)
    if op == "sub":
        return a - a._coerce(b)
    if op == "mul":
        return a * a._coerce(b)
    if op == "neg":
        return -a
    if op == "int_pow":
        return a ** b
    raise ValueError(f"unknown op {op!r}")


def substitute(p: LaurentPoly, var: str, replacement: LaurentPoly) -> LaurentPoly:
    """Replace ``var`` by a Laurent monomial in the same ring."""
    p.vars.index(var)
    if not replacement.is_monomial():
        raise ValueError(f"replacement must be a single term, got {replacement}")
    return p.map_vars(p.vars, {var: replacement})


class Scaled(NamedTuple):
    """An exact rational multiple ``num / den`` of a Laurent polynomial."""

    num: LaurentPoly
    den: int

    @classmethod
    def make(cls, num: LaurentPoly, den: int) -> "Scaled":
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = den
        for c in num.terms.values():
            g = gcd(g, c)
        g = g or 1
        return cls(LaurentPoly(num.vars, {e: c // g for e, c in num.terms.items()}), den // g)

    def value(self) -> Fraction:
        """The rational value of a constant result."""
        return Fraction(self.num.constant_value(), self.den)


def derive_at_one(p: LaurentPoly, var: str, slope: Fraction | int) -> Scaled:
    """h-derivative at h=0 of ``p`` where ``var = exp(slope*h)``.

    Returns ``slope * dp/dvar`` evaluated at ``var = 1``, as a scaled
    polynomial in the remaining variables.
    """
    i = p.vars.index(var)
    slope = Fraction(slope)
    acc: dict[tuple[int, ...], int] = {}
    for e, c in p.terms.items():
        if e[i]:
            e1 = e[:i] + (0,) + e[i + 1:]
            acc[e1] = acc.get(e1, 0) + e[i] * c * slope.numerator
    return Scaled.make(LaurentPoly(p.vars, acc), slope.denominator)
