"""
Relation checks with exact residuals and JSON reports.

Each check returns a :class:`VerificationReport`; ``passed`` is true iff
every residual is identically zero in normal form.  There are no
tolerances anywhere.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping, Sequence

from .jimbo import (
    DUAL_RING,
    GaussTriple,
    assemble_T,
    bind_parameters,
    build_dual_sl2,
    build_glpq2,
    closed_form,
)
from .opmatrix import (
    OpMatrix,
    gauss_factors,
    matmul,
    qdet,
    relation_residual,
    rtt_residual,
    triangular_inverse,
)
from .rmatrix import RMatrix, derived_parts, rpq, standard_r
from .slotalg import AlgebraElement

__all__ = [
    "VerificationReport",
    "Construction",
    "build_construction",
    "check_rtt",
    "check_gauss",
    "check_gauss_factors",
    "check_serre_and_qcomm",
    "check_qdet_and_diagonal",
    "check_inverse_relations",
    "run_checks",
    "CHECKS",
]

CHECKS = ("rtt", "gauss", "serre", "qdet", "inverse")


@dataclass
class VerificationReport:
    check: str
    n: int
    passed: bool
    bindings: dict = field(default_factory=dict)
    residual: dict = field(default_factory=lambda: {"zero": True})
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: Mapping) -> "VerificationReport":
        return cls(**data)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _first(relation: str, res: OpMatrix | AlgebraElement) -> dict | None:
    if isinstance(res, AlgebraElement):
        return None if res.is_zero() else {"zero": False, "relation": relation, "index": None, "value": str(res)}
    pos = res.first_nonzero()
    if pos is None:
        return None
    return {"zero": False, "relation": relation, "index": list(pos), "value": str(res[pos])}


def _run(name: str, n: int, bindings, relations: Sequence[tuple[str, Callable]], details=None) -> VerificationReport:
    """Evaluate relations in order; stop at the first nonzero residual."""
    t0 = time.perf_counter()
    residual = {"zero": True}
    checked = []
    for rel, thunk in relations:
        try:
            res = thunk()
        except (ValueError, ArithmeticError) as exc:
            residual = {"zero": False, "relation": rel, "index": None, "value": f"error: {exc}"}
            break
        checked.append(rel)
        bad = _first(rel, res)
        if bad:
            residual = bad
            break
    det = dict(details or {})
    det["relations_checked"] = checked
    return VerificationReport(
        check=name,
        n=n,
        passed=residual["zero"],
        bindings={k: str(v) for k, v in (bindings or {}).items()},
        residual=residual,
        wall_time=round(time.perf_counter() - t0, 6),
        details=det,
    )


def check_rtt(R: RMatrix, T: OpMatrix, bindings=None) -> VerificationReport:
    n = T.shape[0]
    if R.size != n * n:
        raise ValueError(f"R is {R.size}x{R.size} but T is {n}x{n}")
    return _run("rtt", n, bindings, [("R T1 T2 = T2 T1 R", lambda: rtt_residual(R, T))])


def check_gauss_factors(R: RMatrix, T_L: OpMatrix, T_D: OpMatrix, T_U: OpMatrix,
                        extra: Sequence[tuple[str, Callable]] = (), bindings=None) -> VerificationReport:
    """Gauss-basis relations for given unit-lower, diagonal and unit-upper factors.

    Checked in order: RTT for T+ = T_D T_U and T- = T_L T_D, the R_d
    cross relations (T+, T-), (T_D, T-), (T+, T_D), and [T_L, T_U] = 0.
    """
    n = T_D.shape[0]
    R_d = derived_parts(R).R_d
    T_minus = matmul(T_L, T_D)
    T_plus = matmul(T_D, T_U)
    relations = list(extra) + [
        ("rtt T+", lambda: rtt_residual(R, T_plus)),
        ("rtt T-", lambda: rtt_residual(R, T_minus)),
        ("R_d T+ T-", lambda: relation_residual(R_d, T_plus, T_minus)),
        ("R_d T_D T-", lambda: relation_residual(R_d, T_D, T_minus)),
        ("R_d T+ T_D", lambda: relation_residual(R_d, T_plus, T_D)),
        ("[T_L, T_U] = 0", lambda: relation_residual(None, T_L, T_U)),
    ]
    return _run("gauss", n, bindings, relations)


def check_gauss(R: RMatrix, triple: GaussTriple, T: OpMatrix | None = None) -> VerificationReport:
    """Gauss relations for the factors of ``T`` (default: the assembled triple).

    The separate factors T^(+) and T^(-) of the triple are checked against
    RTT first; then ``T = T_L T_D T_U`` is refactored and the Gauss-basis
    relations are checked for the resulting generators, whose diagonals
    are identified by construction.
    """
    T = assemble_T(triple) if T is None else T
    try:
        T_L, T_D, T_U = gauss_factors(T)
    except (ValueError, ArithmeticError) as exc:
        return _run("gauss", triple.n, triple.bindings, [("factorization", _raiser(exc))])
    extra = [
        ("rtt triple T+", lambda: rtt_residual(R, triple.T_plus)),
        ("rtt triple T-", lambda: rtt_residual(R, triple.T_minus)),
        ("T = T_L T_D T_U", lambda: matmul(matmul(T_L, T_D), T_U) - T),
    ]
    return check_gauss_factors(R, T_L, T_D, T_U, extra, triple.bindings)


def _raiser(exc):
    def f():
        raise exc
    return f


def _serre(xi: AlgebraElement, xj: AlgebraElement, s: int) -> AlgebraElement:
    q = xi.sig.ring.var("q")
    qs = q ** s
    return (xi * xi * xj
            - xi * xj * xi * (qs * (q + q ** -1))
            + xj * xi * xi * (qs * qs))


def _serre_block(gens: list[AlgebraElement], label: str, relations: list, found: dict):
    r = len(gens)
    q = gens[0].sig.ring.var("q") if gens else None
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            a, b = gens[i], gens[j]
            if abs(i - j) == 1:
                e = 2 if j == i + 1 else -2
                relations.append((f"{label} qcomm({i + 1},{j + 1})", lambda a=a, b=b, e=e: a * b - b * a * q ** e))
                for s in (+1, -1):
                    found[(label, i + 1, j + 1, s)] = _serre(a, b, s).is_zero()
                s_doc = +1 if j == i + 1 else -1
                relations.append((f"{label} serre({i + 1},{j + 1}) q^{s_doc:+d}",
                                  lambda a=a, b=b, s=s_doc: _serre(a, b, s)))
            else:
                relations.append((f"{label} comm({i + 1},{j + 1})", lambda a=a, b=b: a * b - b * a))


def check_serre_and_qcomm(triple: GaussTriple) -> VerificationReport:
    """q^{+-2}-commutation and deformed Serre cubics of t_{i,i+1}^(+) (and
    of t_{i+1,i}^(-)).

    Both Serre sign branches are evaluated for every adjacent pair; the
    report records which one vanishes.  The pass criterion uses the pairing
    ``j = i + 1 <-> q^{+1}``, ``j = i - 1 <-> q^{-1}``.
    """
    n = triple.n
    plus = [triple.T_plus.rows[i][i + 1] for i in range(n - 1)]
    minus = [triple.T_minus.rows[i + 1][i] for i in range(n - 1)]
    relations: list = []
    found: dict = {}
    _serre_block(plus, "X+", relations, found)
    _serre_block(minus, "X-", relations, found)
    pairing = {}
    for (label, i, j, s), zero in sorted(found.items()):
        key = f"{label} j=i{'+' if j > i else '-'}1"
        if zero:
            pairing.setdefault(key, set()).add(f"q^{s:+d}")
    details = {
        "serre_pairing": {k: sorted(v) for k, v in sorted(pairing.items())},
        "serre_branches": {f"{lab} ({i},{j}) q^{s:+d}": z for (lab, i, j, s), z in sorted(found.items())},
    }
    if n < 3:
        details["note"] = "n < 3: no adjacent pairs"
    return _run("serre", n, triple.bindings, relations, details)


def check_qdet_and_diagonal(triple: GaussTriple, T: OpMatrix | None = None) -> VerificationReport:
    T = assemble_T(triple) if T is None else T
    one = T.sig.one()
    relations = [
        ("qdet = 1", lambda: qdet(T) - one),
        ("prod t_ii^(+) = 1", lambda: triple.diagonal_product(+1) - one),
        ("prod t_ii^(-) = 1", lambda: triple.diagonal_product(-1) - one),
    ]
    return _run("qdet", triple.n, triple.bindings, relations)


def check_inverse_relations(triple: GaussTriple, R: RMatrix) -> VerificationReport:
    """Inverses of the triangular factors.

    Inverting ``R T1 T2 = T2 T1 R`` gives ``R S2 S1 = S1 S2 R`` for
    ``S = T^-1``, i.e. the RTT relation with ``P R P`` in place of ``R``.
    The check requires exact two-sided inverses and that relation.  The
    residual of RTT against ``R`` itself is recorded under
    ``details["same_R"]``; it is nonzero unless ``R`` commutes with ``P``.
    """
    R_swap = derived_parts(R).R_plus
    relations = []
    invs = {}
    for label, T, shape in (("+", triple.T_plus, "upper"), ("-", triple.T_minus, "lower")):

        def inv(T=T, shape=shape, label=label):
            if label not in invs:
                invs[label] = triangular_inverse(T, shape)
            return invs[label]

        ident = OpMatrix.identity(T.sig, T.shape[0])
        relations += [
            (f"T{label} T{label}^-1 = I", lambda T=T, inv=inv, ident=ident: matmul(T, inv()) - ident),
            (f"T{label}^-1 T{label} = I", lambda T=T, inv=inv, ident=ident: matmul(inv(), T) - ident),
            (f"PRP S1 S2 = S2 S1 PRP, S = (T{label})^-1", lambda inv=inv: rtt_residual(R_swap, inv())),
        ]
    report = _run("inverse", triple.n, triple.bindings, relations)
    same = {}
    for label in sorted(invs):
        pos = rtt_residual(R, invs[label]).first_nonzero()
        same[f"T{label}"] = {"zero": pos is None, "index": None if pos is None else list(pos)}
    report.details["same_R"] = same
    return report


# -- constructions and the suite ---------------------------------------------


@dataclass
class Construction:
    group: str
    n: int
    R: RMatrix
    T: OpMatrix
    triple: GaussTriple | None = None
    factors: tuple | None = None
    bindings: dict = field(default_factory=dict)


def build_construction(group: str = "sl_q", n: int = 2, bindings: Mapping[str, str] | None = None) -> Construction:
    bindings = dict(bindings or {})
    if group == "sl_q":
        if not isinstance(n, int) or n < 2:
            raise ValueError(f"sl_q needs n >= 2, got {n}")
        triple = closed_form(n)
        if bindings:
            triple = bind_parameters(triple, bindings)
        return Construction(group, n, standard_r(n, triple.sig.ring), assemble_T(triple), triple,
                            bindings=bindings)
    if group == "gl_pq_2":
        if n != 2:
            raise ValueError("gl_pq_2 is defined for n = 2 only")
        triple = build_glpq2(bindings.pop("c_plus", "c_plus"), bindings.pop("c_minus", "c_minus"))
        if bindings:
            triple = bind_parameters(triple, bindings)
        return Construction(group, 2, rpq(), assemble_T(triple), triple, bindings=dict(triple.bindings))
    if group == "dual_sl2":
        if n != 2:
            raise ValueError("dual_sl2 is defined for n = 2 only")
        T, TL, TD, TU = build_dual_sl2(bindings.get("c_plus", "c_plus"), bindings.get("c_minus", "c_minus"))
        return Construction(group, 2, standard_r(2, DUAL_RING), T, None, (TL, TD, TU), bindings)
    raise ValueError(f"unknown group {group!r}")


def _dual_triple(c: Construction) -> GaussTriple:
    TL, TD, TU = c.factors
    return GaussTriple(2, matmul(TD, TU), matmul(TL, TD), c.bindings)


def _check_for(name: str, c: Construction, T: OpMatrix) -> VerificationReport:
    if name == "rtt":
        return check_rtt(c.R, T, c.bindings)
    if c.group == "dual_sl2":
        triple = _dual_triple(c)
        if name == "gauss":
            TL, TD, TU = c.factors
            return check_gauss_factors(c.R, TL, TD, TU, [("T = T_L T_D T_U", lambda: matmul(matmul(TL, TD), TU) - T)],
                                       c.bindings)
        if name == "qdet":
            one = T.sig.one()
            return _run("qdet", 2, c.bindings, [("qdet = 1", lambda: qdet(T) - one)])
        if name == "inverse":
            return check_inverse_relations(triple, c.R)
        if name == "serre":
            return _run("serre", 2, c.bindings, [], {"note": "no adjacent pairs for n = 2"})
    triple = c.triple
    if name == "gauss":
        return check_gauss(c.R, triple, T)
    if name == "serre":
        if c.group != "sl_q":
            return _run("serre", c.n, c.bindings, [], {"note": f"not defined for {c.group}"})
        return check_serre_and_qcomm(triple)
    if name == "qdet":
        if c.group != "sl_q":
            return _run("qdet", c.n, c.bindings, [], {"note": f"one-parameter qdet not defined for {c.group}"})
        return check_qdet_and_diagonal(triple, T)
    if name == "inverse":
        return check_inverse_relations(triple, c.R)
    raise ValueError(f"unknown check {name!r}")


def parse_perturb(spec: str | None, n: int) -> tuple[int, int] | None:
    if not spec:
        return None
    import re

    m = re.fullmatch(r"t(\d)(\d)", spec)
    if not m:
        raise ValueError(f"--perturb expects tIJ, got {spec!r}")
    i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"entry {spec} outside a {n}x{n} matrix")
    return i, j


def run_checks(checks: Sequence[str], construction: Construction, perturb: str | None = None,
               threads: int | None = None) -> list[VerificationReport]:
    """Run ``checks`` (``"all"`` expands) concurrently; results keep request order.

    ``perturb="tIJ"`` multiplies entry (I, J) of the assembled T by q
    before the T-based checks (rtt, qdet, gauss) run.
    """
    names = []
    for c in checks:
        if c == "all":
            names.extend(x for x in CHECKS if x not in names)
        elif c in CHECKS:
            if c not in names:
                names.append(c)
        else:
            raise ValueError(f"unknown check {c!r}; choose from {CHECKS + ('all',)}")
    T = construction.T
    pos = parse_perturb(perturb, construction.n)
    if pos is not None:
        q = T.sig.ring.var("q")
        T = T.replace(*pos, T[pos] * q)
    threads = threads or int(os.environ.get("QGAUSS_THREADS", "1") or 1)
    if threads <= 1:
        reports = [_check_for(name, construction, T) for name in names]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda name: _check_for(name, construction, T), names))
    if pos is not None:
        for r in reports:
            r.details["perturbed"] = f"t{pos[0] + 1}{pos[1] + 1} *= q"
    return reports
