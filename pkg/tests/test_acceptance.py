"""Acceptance criteria, one test each.  All comparisons are exact."""

import json
import time

import pytest

from conftest import ACCEPTANCE
from qgauss.cli import main
from qgauss.jimbo import (
    DUAL_RING,
    GaussTriple,
    assemble_T,
    build_dual_sl2,
    build_glpq2,
    closed_form,
    delta_generators,
    ladder_reconstruct,
    sl_signature,
)
from qgauss.matrixrep import DEFAULT_LIMIT_BINDINGS, classical_limit, expected_limit_sl2, reproduce_reference_table
from qgauss.opmatrix import (
    OpMatrix,
    gauss_factors,
    involved_positions,
    qdet,
    relation_residual,
    rtt_residual,
    triangular_inverse,
)
from qgauss.rmatrix import GLPQ_RING, catalog, rpq, standard_r
from qgauss.verify import (
    build_construction,
    check_gauss,
    check_gauss_factors,
    check_inverse_relations,
    check_qdet_and_diagonal,
    check_rtt,
    check_serre_and_qcomm,
    run_checks,
)


def record(k: int, ok: bool, title: str, elapsed: float, note: str = ""):
    line = f"AC{k:<2} {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f} s)"
    if note:
        line += f"  {note}"
    ACCEPTANCE[k] = line
    print(line)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_ac01_sl2_entries_from_build(capsys):
    with Timer() as t:
        code = main(["build", "--group", "sl_q", "--n", "2"])
        doc = json.loads(capsys.readouterr().out)
        sig = sl_signature(2)
        T = OpMatrix.from_json(sig, doc["T"])
        f, g = sig.ring.var("f1"), sig.ring.var("g1")
        K, Ki, z = (1,), (-1,), (0,)
        expected = [
            [sig.word({"U-1": (Ki, 0), "U+1": (K, 0)}),
             sig.word({"U-1": (Ki, 0), "U+1": (z, 1)}, f)],
            [sig.word({"U-1": (z, 1), "U+1": (K, 0)}, g),
             sig.word({"U-1": (K, 0), "U+1": (Ki, 0)}) + sig.word({"U-1": (z, 1), "U+1": (z, 1)}, f * g)],
        ]
        ok = code == 0 and T == OpMatrix(sig, expected) and doc["torus_legend"] == {"K1": "q^{H/2}"}
    record(1, ok and t.elapsed < 1, "SL_q(2) entries from build, f and g formal", t.elapsed)
    assert ok
    assert t.elapsed < 1


def test_ac02_rtt_for_n_up_to_4():
    times = {}
    ok = True
    for n in (2, 3, 4):
        with Timer() as t:
            tr = closed_form(n)
            rep = check_rtt(standard_r(n, tr.sig.ring), assemble_T(tr))
        times[n] = t.elapsed
        ok = ok and rep.passed
    total = sum(times.values())
    record(2, ok and times[4] < 300, "RTT with the calibrated standard R, n = 2, 3, 4", total,
           f"n=4 took {times[4]:.2f} s")
    assert ok
    assert times[4] < 300


def test_ac03_quantum_determinant():
    with Timer() as t:
        ok = True
        for n in (2, 3):
            tr = closed_form(n)
            ok = ok and qdet(assemble_T(tr)) == tr.sig.one()
        for n in (2, 3, 4):
            tr = closed_form(n)
            ok = ok and tr.diagonal_product(+1) == tr.sig.one() and tr.diagonal_product(-1) == tr.sig.one()
    record(3, ok and t.elapsed < 60, "qdet(T) = 1 for n = 2, 3; diagonal products = 1 for n <= 4", t.elapsed)
    assert ok
    assert t.elapsed < 60


def test_ac04_ladder_equals_closed_form():
    with Timer() as t:
        ok = True
        for n in (3, 4):
            built = ladder_reconstruct(delta_generators(n), "q - q^-1")
            tr = closed_form(n)
            ok = ok and built.T_plus == tr.T_plus and built.T_minus == tr.T_minus
    record(4, ok and t.elapsed < 60, "nested-commutator ladder equals closed forms, n = 3, 4", t.elapsed)
    assert ok
    assert t.elapsed < 60


def test_ac05_gauss_relations():
    with Timer() as t:
        ok = True
        checked = set()
        for n in (2, 3):
            R = catalog("sl_q", n)
            tr = closed_form(n)
            assert tr.sig.ring == R.ring
            rep = check_gauss(R, tr)
            ok = ok and rep.passed
            checked.update(rep.details["relations_checked"])
        needed = {"rtt T+", "rtt T-", "R_d T+ T-", "R_d T_D T-", "R_d T+ T_D", "[T_L, T_U] = 0"}
        ok = ok and needed <= checked
    record(5, ok and t.elapsed < 120, "Gauss-basis relations incl. R_d cross relations, n = 2, 3", t.elapsed)
    assert ok
    assert t.elapsed < 120


def test_ac06_serre_and_q_commutation():
    with Timer() as t:
        ok = True
        pairing = None
        for n in (3, 4):
            rep = check_serre_and_qcomm(closed_form(n))
            ok = ok and rep.passed
            pairing = rep.details["serre_pairing"]
        ok = ok and pairing == {
            "X+ j=i+1": ["q^+1"], "X+ j=i-1": ["q^-1"],
            "X- j=i+1": ["q^+1"], "X- j=i-1": ["q^-1"],
        }
    record(6, ok and t.elapsed < 60, "q^{+-2}-commutation and deformed Serre cubics, n = 3, 4", t.elapsed,
           "pairing j=i+1 <-> q^{+1}, j=i-1 <-> q^{-1}")
    assert ok
    assert t.elapsed < 60


def test_ac07_reference_table(capsys):
    with Timer() as t:
        code = main(["rep", "--group", "sl_q", "--n", "2", "--calibrate-table"])
        doc = json.loads(capsys.readouterr().out)
        repro = reproduce_reference_table()
        ok = (code == 0 and repro.ok and all(doc["matches_reference_table"].values())
              and doc["calibration"]["kronecker_order"] == "reversed"
              and doc["calibration"]["f"] == "v" and doc["calibration"]["g"] == "v^-1")
    record(7, ok and t.elapsed < 1, "4x4 reference table under calibrated order and (f, g)", t.elapsed,
           "order=reversed, f=q^{1/2}, g=q^{-1/2}")
    assert ok
    assert t.elapsed < 1


def _substituted_rpq():
    v = GLPQ_RING.var("v")
    sub = rpq().map(lambda c: c.map_vars(GLPQ_RING, {"k": v, "p": v ** -1, "q": v ** -1}))
    std = standard_r(2, GLPQ_RING).map(lambda c: c.map_vars(GLPQ_RING, {"q": v ** 2}))
    return v, sub, std


def test_ac08_multiparameter_rtt_and_scalar_relation():
    """The part of the criterion that holds: RTT, and proportionality with scalar v^-1."""
    with Timer() as t:
        rtt_ok = check_rtt(rpq(), assemble_T(build_glpq2())).passed
        v, sub, std = _substituted_rpq()
        proportional = sub == std.scale(v ** -1)
    assert rtt_ok
    assert proportional
    assert t.elapsed < 10


@pytest.mark.xfail(strict=True, reason="substitution gives v^-1 * standard_r(2); see decisions ledger")
def test_ac08_multiparameter_literal():
    with Timer() as t:
        rtt_ok = check_rtt(rpq(), assemble_T(build_glpq2())).passed
        v, sub, std = _substituted_rpq()
        literal = sub == std.scale(v)
    ok = rtt_ok and literal and t.elapsed < 10
    record(8, ok, "GL_{p,q}(2): RTT against R_{p,q}; substitution gives v*standard_r(2)", t.elapsed,
           f"RTT {'holds' if rtt_ok else 'fails'}; substitution gives v^-1*standard_r(2), not v*standard_r(2)")
    assert ok


def test_ac09_classical_limit(capsys):
    with Timer() as t:
        code = main(["limit", "--group", "sl_q", "--n", "2", "--f", "q^-1*lambda", "--g", "-q*lambda"])
        doc = json.loads(capsys.readouterr().out)
        M = classical_limit(assemble_T(closed_form(2)), DEFAULT_LIMIT_BINDINGS)
        Ht, Xp, Xm = M[0][0], M[0][1], M[1][0]
        ok = (code == 0 and M == expected_limit_sl2()
              and doc["M"]["m12"] == Xp.to_json()
              and Ht.bracket(Xp) == Xp and Ht.bracket(Xm) == Xm and Xp.bracket(Xm).is_zero())
    record(9, ok and t.elapsed < 1, "classical limit M matches and satisfies the sl*(2) brackets", t.elapsed)
    assert ok
    assert t.elapsed < 1


def test_ac10_dual_three_factor_rtt():
    with Timer() as t:
        T, TL, TD, TU = build_dual_sl2()
        ok = check_rtt(standard_r(2, DUAL_RING), T).passed
    record(10, ok and t.elapsed < 10, "dual sl*(2) three-factor T passes RTT", t.elapsed)
    assert ok
    assert t.elapsed < 10


def _negative_controls() -> list[tuple[str, bool]]:
    out = []
    # rtt: every entry of T, n = 2 and 3, residual located at a position that involves it
    for n in (2, 3):
        c = build_construction("sl_q", n)
        for i in range(n):
            for j in range(n):
                rep = run_checks(["rtt"], c, perturb=f"t{i + 1}{j + 1}")[0]
                located = rep.residual.get("index") is not None and \
                    tuple(rep.residual["index"]) in involved_positions(c.R, n, i, j)
                out.append((f"rtt n={n} t{i + 1}{j + 1}", not rep.passed and located))
    # qdet: rescaled t11 of T, and rescaled t11^(+)
    c = build_construction("sl_q", 2)
    rep = run_checks(["qdet"], c, perturb="t11")[0]
    out.append(("qdet t11", not rep.passed and rep.residual["relation"] == "qdet = 1"))
    tr = closed_form(2)
    q = tr.sig.ring.var("q")
    bad = GaussTriple(2, tr.T_plus.replace(0, 0, tr.T_plus[0, 0] * q), tr.T_minus)
    rep = check_qdet_and_diagonal(bad, assemble_T(tr))
    out.append(("diag t11+", not rep.passed and rep.residual["relation"] == "prod t_ii^(+) = 1"))
    # gauss: an upper unit-triangle entry moved onto a lower slot
    R = standard_r(2, tr.sig.ring)
    T_L, T_D, T_U = gauss_factors(assemble_T(tr))
    bad_U = T_U.replace(0, 1, T_U[0, 1] * tr.sig.gen("U-1"))
    rep = check_gauss_factors(R, T_L, T_D, bad_U)
    located = rep.residual.get("index") is not None and tuple(rep.residual["index"]) in involved_positions(R, 2, 0, 1)
    out.append(("gauss u12", not rep.passed and located))
    out.append(("gauss [T_L, T_U]", not relation_residual(None, T_L, bad_U).is_zero()))
    # serre / q-commutation: t12^(+) += t11^(+) for n = 3
    tr3 = closed_form(3)
    bad = GaussTriple(3, tr3.T_plus.replace(0, 1, tr3.T_plus[0, 1] + tr3.T_plus[0, 0]), tr3.T_minus)
    rep = check_serre_and_qcomm(bad)
    out.append(("serre t12+", not rep.passed and "(1,2)" in rep.residual["relation"]))
    # inverse: same perturbation at n = 2
    bad = GaussTriple(2, tr.T_plus.replace(0, 1, tr.T_plus[0, 1] + tr.T_plus[0, 0]), tr.T_minus)
    rep = check_inverse_relations(bad, R)
    out.append(("inverse t12+", not rep.passed and "(T+)^-1" in rep.residual["relation"]))
    return out


def test_ac11_negative_controls():
    with Timer() as t:
        results = _negative_controls()
    bad = [name for name, ok in results if not ok]
    ok = not bad
    record(11, ok and t.elapsed < 60, f"negative controls flip their checks ({len(results)} cases)", t.elapsed,
           f"unflipped: {bad}" if bad else "")
    assert not bad
    assert t.elapsed < 60


def test_ac12_inverse_relations_with_swapped_r():
    """What does hold: exact inverses, and RTT with P R P in place of R."""
    with Timer() as t:
        reports = []
        for n in (2, 3):
            tr = closed_form(n)
            reports.append(check_inverse_relations(tr, standard_r(n, tr.sig.ring)))
    assert all(r.passed for r in reports)
    assert t.elapsed < 60


@pytest.mark.xfail(strict=True, reason="inverses satisfy RTT with P R P, not with R; see decisions ledger")
def test_ac12_inverse_relations_literal():
    with Timer() as t:
        residuals = {}
        for n in (2, 3):
            tr = closed_form(n)
            R = standard_r(n, tr.sig.ring)
            for label, T, shape in (("+", tr.T_plus, "upper"), ("-", tr.T_minus, "lower")):
                residuals[(n, label)] = rtt_residual(R, triangular_inverse(T, shape)).first_nonzero()
    ok = all(pos is None for pos in residuals.values()) and t.elapsed < 60
    first = {f"n={n} T{s}": list(p) for (n, s), p in residuals.items() if p is not None}
    record(12, ok, "inverses of T^(+-) satisfy RTT with the same R, n = 2, 3", t.elapsed,
           f"nonzero residuals at {first}; they satisfy it with P R P" if not ok else "")
    assert ok
