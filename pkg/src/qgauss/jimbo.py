"""
Gauss generators of SL_q(n) realised inside tensor products of
torus-extended one-generator algebras.

The ambient algebra for rank n-1 has 2(n-1) slots, ``U-1 .. U-(n-1)``
followed by ``U+1 .. U+(n-1)``.  Slot ``U+j`` carries X_j^+ and slot
``U-j`` carries X_j^-; every slot carries the full torus K_1..K_{n-1}
(K_n is the inverse of their product).

Also builds the GL_{p,q}(2) realisation and the one-slot realisation
through the dual algebra sl*(2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .cartan import ChevalleyData, build_chevalley, torus_exponents
from .opmatrix import OpMatrix, gauss_product, is_triangular, matmul
from .ring import LaurentPoly, NotDivisible, VarSet
from .rmatrix import GLPQ_RING, sl_ring
from .slotalg import AlgebraElement, AlgebraSignature, SlotSpec, commutator, invert

__all__ = [
    "GaussTriple",
    "sl_signature",
    "delta_generators",
    "ladder_reconstruct",
    "closed_form",
    "cartan_automorphism",
    "assemble_T",
    "build_glpq2",
    "build_dual_sl2",
    "glpq_one_parameter",
    "bind_parameters",
    "lower_via_automorphism",
    "glpq_signature",
    "dual_signature",
    "DUAL_RING",
]


@lru_cache(maxsize=None)
def sl_signature(n: int) -> AlgebraSignature:
    data = build_chevalley(n)
    ring = sl_ring(n)
    torus = [f"K{m}" for m in range(1, n)]
    slots = []
    for sign, label in ((-1, "-"), (+1, "+")):
        for j in range(1, n):
            exps = [[data.ad_exponent(m, j, sign) for m in range(1, n)]]
            slots.append((f"U{label}{j}", [f"X{j}{label}"], exps))
    return AlgebraSignature.q_power(ring, slots, torus)


def _slot_names(n: int, sign: int) -> list[str]:
    label = "+" if sign > 0 else "-"
    return [f"U{label}{j}" for j in range(1, n)]


@dataclass
class GaussTriple:
    """Upper factor ``T_plus`` (on U+ slots) and lower factor ``T_minus`` (on U- slots)."""

    n: int
    T_plus: OpMatrix
    T_minus: OpMatrix
    bindings: dict = field(default_factory=dict)

    @property
    def sig(self) -> AlgebraSignature:
        return self.T_plus.sig

    def check_shape(self):
        if not is_triangular(self.T_plus, "upper"):
            raise ValueError("T_plus is not upper triangular")
        if not is_triangular(self.T_minus, "lower"):
            raise ValueError("T_minus is not lower triangular")

    def diagonal_product(self, sign: int) -> AlgebraElement:
        T = self.T_plus if sign > 0 else self.T_minus
        out = T.sig.one()
        for d in T.diagonal_entries():
            out = out * d
        return out

    def map(self, fn) -> "GaussTriple":
        return GaussTriple(self.n, self.T_plus.map(fn), self.T_minus.map(fn), dict(self.bindings))


def _tensor_word(sig: AlgebraSignature, n: int, sign: int, left_torus: int, xs: range,
                 right_torus: int, coeff) -> AlgebraElement:
    """K_left^{(+-1)} on the slots before ``xs``, X_l^{+-} on slots in ``xs``,
    K_right^{(+-1)} after; slots indexed 1..n-1 within the U+- block."""
    parts = {}
    names = _slot_names(n, sign)
    lt = tuple(sign * e for e in torus_exponents(n, left_torus))
    rt = tuple(sign * e for e in torus_exponents(n, right_torus))
    zero = (0,) * (n - 1)
    for pos in range(1, n):
        if pos < xs.start:
            parts[names[pos - 1]] = (lt, 0)
        elif pos in xs:
            parts[names[pos - 1]] = (zero, 1)
        else:
            parts[names[pos - 1]] = (rt, 0)
    return sig.word(parts, coeff)


def diagonal_element(n: int, i: int, sign: int) -> AlgebraElement:
    """t_ii^(+-) = (K_i^{+-1})^{(x)(n-1)} on the U+- slots."""
    sig = sl_signature(n)
    t = tuple(sign * e for e in torus_exponents(n, i))
    return sig.word({name: (t, 0) for name in _slot_names(n, sign)})


def _param(sig, name):
    return sig.ring.var(name)


def delta_generators(data: ChevalleyData | int) -> GaussTriple:
    """Diagonals and first off-diagonals; the rest of the triangle is zero."""
    n = data if isinstance(data, int) else data.n
    sig = sl_signature(n)
    Tp = [[sig.zero() for _ in range(n)] for _ in range(n)]
    Tm = [[sig.zero() for _ in range(n)] for _ in range(n)]
    for i in range(1, n + 1):
        Tp[i - 1][i - 1] = diagonal_element(n, i, +1)
        Tm[i - 1][i - 1] = diagonal_element(n, i, -1)
    for i in range(1, n):
        Tp[i - 1][i] = _tensor_word(sig, n, +1, i, range(i, i + 1), i + 1, _param(sig, f"f{i}"))
        Tm[i][i - 1] = _tensor_word(sig, n, -1, i, range(i, i + 1), i + 1, _param(sig, f"g{i}"))
    return GaussTriple(n, OpMatrix(sig, Tp), OpMatrix(sig, Tm))


def _divide(x: AlgebraElement, lam: LaurentPoly, power: int) -> AlgebraElement:
    if power == 0:
        return x
    if lam.is_zero():
        raise ZeroDivisionError("lambda is bound to 0 but the ladder needs lambda^-1")
    den = lam ** power
    try:
        return x.map_coeffs(lambda c: c.divexact(den))
    except NotDivisible as exc:
        raise NotDivisible(f"ladder entry is not divisible by ({lam})^{power}") from exc


def ladder_reconstruct(partial: GaussTriple, lambda_binding: LaurentPoly | str | None = None) -> GaussTriple:
    """Fill both triangles from the first off-diagonals by nested commutators.

    Upper:  t_{i,i+k} = lam^{1-k} (prod_{l=1}^{k-1} t_{i+l,i+l})^{-1}
                       [t_{i,i+1}, [t_{i+1,i+2}, ... [t_{i+k-2,i+k-1}, t_{i+k-1,i+k}]]].
    Lower: the image of the same formula under the Cartan automorphism,
    i.e. with t_{j+1,j}^(-) in place of t_{j,j+1}^(+).
    """
    n = partial.n
    sig = partial.sig
    ring = sig.ring
    if lambda_binding is None:
        q = ring.var("q")
        lam = q - q ** -1
    elif isinstance(lambda_binding, str):
        lam = ring.parse(lambda_binding)
    else:
        lam = lambda_binding
    Tp = [list(r) for r in partial.T_plus.rows]
    Tm = [list(r) for r in partial.T_minus.rows]
    for k in range(2, n):
        for i in range(0, n - k):
            # upper
            acc = Tp[i + k - 1][i + k]
            for l in range(i + k - 2, i - 1, -1):
                acc = commutator(Tp[l][l + 1], acc)
            for l in range(1, k):
                acc = invert(Tp[i + l][i + l]) * acc
            Tp[i][i + k] = _divide(acc, lam, k - 1)
            # lower
            acc = Tm[i + k][i + k - 1]
            for l in range(i + k - 2, i - 1, -1):
                acc = commutator(Tm[l + 1][l], acc)
            for l in range(1, k):
                acc = invert(Tm[i + l][i + l]) * acc
            Tm[i + k][i] = _divide(acc, lam, k - 1)
    return GaussTriple(n, OpMatrix(sig, Tp), OpMatrix(sig, Tm), {**partial.bindings, "lambda": str(lam)})


def closed_form(data: ChevalleyData | int) -> GaussTriple:
    """All entries from the product formulas.

    t_{i,k+1}^(+) = f_i...f_k K_i^{(x)(i-1)} (x) X_i^+ (x) ... (x) X_k^+ (x) K_{k+1}^{(x)(n-k-1)},
    and the lower triangle with g_j, X^- and inverse K's.
    """
    n = data if isinstance(data, int) else data.n
    sig = sl_signature(n)
    Tp = [[sig.zero() for _ in range(n)] for _ in range(n)]
    Tm = [[sig.zero() for _ in range(n)] for _ in range(n)]
    for i in range(1, n + 1):
        Tp[i - 1][i - 1] = diagonal_element(n, i, +1)
        Tm[i - 1][i - 1] = diagonal_element(n, i, -1)
        for k in range(i, n):
            fprod = sig.ring.one()
            gprod = sig.ring.one()
            for j in range(i, k + 1):
                fprod = fprod * _param(sig, f"f{j}")
                gprod = gprod * _param(sig, f"g{j}")
            Tp[i - 1][k] = _tensor_word(sig, n, +1, i, range(i, k + 1), k + 1, fprod)
            Tm[k][i - 1] = _tensor_word(sig, n, -1, i, range(i, k + 1), k + 1, gprod)
    return GaussTriple(n, OpMatrix(sig, Tp), OpMatrix(sig, Tm))


def cartan_automorphism(x: AlgebraElement, n: int) -> AlgebraElement:
    """H -> -H, X^+ -> X^-: moves U+j to U-j, inverts the torus, f_i -> g_i.

    Defined on elements supported on the U+ slots.
    """
    sig = x.sig
    plus = {sig.slot_index(s) for s in _slot_names(n, +1)}
    if not x.support() <= plus:
        raise ValueError("Cartan automorphism is applied to U+ elements only")
    ring = sig.ring
    swap = {f"f{i}": ring.var(f"g{i}") for i in range(1, n)}
    terms = {}
    for w, c in x.terms.items():
        new = list(sig.identity_word())
        for j in range(1, n):
            t, xp = w[sig.slot_index(f"U+{j}")]
            new[sig.slot_index(f"U-{j}")] = (tuple(-e for e in t), xp)
        terms[tuple(new)] = c.map_vars(ring, swap)
    return AlgebraElement(sig, terms)


def lower_via_automorphism(upper: GaussTriple) -> OpMatrix:
    """T^(-) as the transposed image of T^(+) under the Cartan automorphism."""
    n = upper.n
    T = upper.T_plus
    return OpMatrix(T.sig, [[cartan_automorphism(T.rows[j][i], n) for j in range(n)] for i in range(n)])


def assemble_T(triple: GaussTriple) -> OpMatrix:
    return gauss_product(triple.T_minus, triple.T_plus)


def bind_parameters(obj, bindings: Mapping[str, str | LaurentPoly]):
    """Substitute ring variables (f_i, g_i, lambda, ...) in a triple or matrix.

    String values are parsed in the object's ring; ``lambda`` inside them is
    left symbolic unless ``lambda`` itself is bound.
    """
    if not bindings:
        return obj
    sig = obj.sig
    ring = sig.ring
    conv = {}
    for name, val in bindings.items():
        ring.index(name)
        conv[name] = ring.parse(val) if isinstance(val, str) else val
    lam = conv.pop("lambda", None)

    def fn(x):
        def coeff(c):
            c = c.map_vars(ring, conv)
            if lam is not None:
                c = c.map_vars(ring, {"lambda": lam})
            return c
        return x.map_coeffs(coeff)

    if isinstance(obj, GaussTriple):
        out = obj.map(fn)
        out.bindings.update({k: str(v) for k, v in bindings.items()})
        return out
    return obj.map(fn)


# -- two-parameter GL_{p,q}(2) --------------------------------------------

@lru_cache(maxsize=None)
def glpq_signature() -> AlgebraSignature:
    """Torus A = (k/p)^{H/2}, B = (k/q)^{H/2} in each of two slots.

    A X^+ = (k/p) X^+ A,  B X^+ = (k/q) X^+ B, inverses for X^-.
    """
    ring = GLPQ_RING
    def vec(**e):
        out = [0] * len(ring)
        for name, k in e.items():
            out[ring.index(name)] = k
        return tuple(out)

    kp = vec(k=1, p=-1)
    kq = vec(k=1, q=-1)
    neg = lambda t: tuple(-x for x in t)
    slots = [
        SlotSpec("U-", ("X-",), ((neg(kp), neg(kq)),)),
        SlotSpec("U+", ("X+",), ((kp, kq),)),
    ]
    return AlgebraSignature(ring, ("A", "B"), slots)


def build_glpq2(c_plus: str | LaurentPoly = "c_plus", c_minus: str | LaurentPoly = "c_minus") -> GaussTriple:
    sig = glpq_signature()
    ring = sig.ring
    cp = ring.parse(c_plus) if isinstance(c_plus, str) else c_plus
    cm = ring.parse(c_minus) if isinstance(c_minus, str) else c_minus
    z = sig.zero()
    A_inv_m = sig.torus_word("U-", (-1, 0))
    B_m = sig.torus_word("U-", (0, 1))
    B_p = sig.torus_word("U+", (0, 1))
    A_inv_p = sig.torus_word("U+", (-1, 0))
    Tm = OpMatrix(sig, [[A_inv_m, z], [sig.gen("U-", coeff=cm), B_m]])
    Tp = OpMatrix(sig, [[B_p, sig.gen("U+", coeff=cp)], [z, A_inv_p]])
    return GaussTriple(2, Tp, Tm, {"c_plus": str(cp), "c_minus": str(cm)})


def glpq_one_parameter(T: OpMatrix) -> OpMatrix:
    """Specialise k -> v, p -> v^-1, q -> v^-1 (one-parameter q = v^2).

    Both torus generators collapse to K_1 = q^{H/2}; c_plus -> f1 and
    c_minus -> g1.  The result lives in ``sl_signature(2)``.
    """
    target = sl_signature(2)
    tr = target.ring
    v = tr.var("v")
    images = {"k": v, "p": v ** -1, "q": v ** -1, "v": v,
              "c_plus": tr.var("f1"), "c_minus": tr.var("g1")}
    terms_rows = []
    for row in T.rows:
        out_row = []
        for x in row:
            terms = {}
            for w, c in x.terms.items():
                new = []
                for t, xp in w:
                    new.append(((t[0] + t[1],), xp))
                c2 = c.map_vars(tr, images)
                terms[tuple(new)] = terms[tuple(new)] + c2 if tuple(new) in terms else c2
            out_row.append(AlgebraElement(target, terms))
        terms_rows.append(out_row)
    return OpMatrix(target, terms_rows)


def sl_to_v(T: OpMatrix) -> OpMatrix:
    """Rewrite the coefficients of an SL_q(n) matrix with q = v^n."""
    ring = T.sig.ring
    n = len(T.sig.torus) + 1
    v = ring.var("v")
    return T.map(lambda x: x.map_coeffs(lambda c: c.map_vars(ring, {"q": v ** n})))


# -- dual algebra sl*(2) -----------------------------------------------------

DUAL_RING = VarSet(["q", "c_plus", "c_minus"])


@lru_cache(maxsize=None)
def dual_signature() -> AlgebraSignature:
    """One slot, torus K = q^{Htilde}, commuting Xt+ and Xt- with K Xt = q Xt K."""
    return AlgebraSignature.q_power(DUAL_RING, [("D", ["Xt+", "Xt-"], [[1], [1]])], ["K"])


def build_dual_sl2(c_plus: str | LaurentPoly = "c_plus", c_minus: str | LaurentPoly = "c_minus"):
    """``T = T_L T_D T_U`` with T_L = [[1,0],[c- Xt-,1]], T_D = diag(K, K^-1),
    T_U = [[1, c+ Xt+],[0,1]].  Returns ``(T, T_L, T_D, T_U)``."""
    sig = dual_signature()
    ring = sig.ring
    cp = ring.parse(c_plus) if isinstance(c_plus, str) else c_plus
    cm = ring.parse(c_minus) if isinstance(c_minus, str) else c_minus
    one, z = sig.one(), sig.zero()
    TL = OpMatrix(sig, [[one, z], [sig.gen("D", "Xt-", coeff=cm), one]])
    TD = OpMatrix.diagonal(sig, [sig.torus_word("D", (1,)), sig.torus_word("D", (-1,))])
    TU = OpMatrix(sig, [[one, sig.gen("D", "Xt+", coeff=cp)], [z, one]])
    return matmul(matmul(TL, TD), TU), TL, TD, TU
