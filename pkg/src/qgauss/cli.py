"""
Command line: ``qgauss build|verify|rep|limit``.

Every command prints one JSON document (sorted keys, UTF-8).  Exit codes:
0 success / all checks pass, 1 a relation is violated, 2 usage or input
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from typing import Sequence

from .cartan import htilde_coeffs
from .jimbo import assemble_T, closed_form, sl_signature
from .matrixrep import (
    DEFAULT_LIMIT_BINDINGS,
    ORDERS,
    classical_limit,
    dense_strings,
    evaluate_in_rep,
    reproduce_reference_table,
)
from .opmatrix import OpMatrix
from .ring import NotDivisible
from .verify import CHECKS, build_construction, run_checks

GROUPS = ("sl_q", "gl_pq_2", "dual_sl2")
CONFIG_KEYS = {
    "group", "n", "f", "g", "lambda", "c_plus", "c_minus", "bind",
    "checks", "perturb", "threads", "order", "element", "calibrate", "output",
}


class UsageError(Exception):
    pass


# -- job description -----------------------------------------------------------


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _merge(args: argparse.Namespace) -> dict:
    """Config file values overridden by explicit flags."""
    job = _load_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is None or val == [] or val is False:
            continue
        job[key] = val
    job.setdefault("group", "sl_q")
    job.setdefault("n", 2)
    if job["group"] not in GROUPS:
        raise UsageError(f"unknown group {job['group']!r}; choose from {', '.join(GROUPS)}")
    if not isinstance(job["n"], int) or isinstance(job["n"], bool):
        raise UsageError("n must be an integer")
    return job


def _bindings(job: dict) -> dict[str, str]:
    """Parameter bindings; the value ``formal`` leaves a parameter symbolic."""
    out: dict[str, str] = {}
    n = job["n"]
    if job["group"] == "sl_q":
        for key in ("f", "g"):
            if key in job:
                for i in range(1, n):
                    out[f"{key}{i}"] = str(job[key])
    else:
        for key in ("f", "g"):
            if key in job:
                raise UsageError(f"--{key} applies to sl_q only")
        for key in ("c_plus", "c_minus"):
            if key in job:
                out[key] = str(job[key])
    if "lambda" in job:
        out["lambda"] = str(job["lambda"])
    bind = job.get("bind") or []
    if isinstance(bind, dict):
        bind = [f"{k}={v}" for k, v in bind.items()]
    for item in bind:
        name, sep, val = str(item).partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--bind expects NAME=VALUE, got {item!r}")
        out[name.strip()] = val.strip()
    return {k: v for k, v in out.items() if v != "formal"}


def _construction(job: dict):
    try:
        return build_construction(job["group"], job["n"], _bindings(job))
    except (ValueError, KeyError, NotDivisible) as exc:
        raise UsageError(str(exc)) from exc


# -- rendering -------------------------------------------------------------------


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def torus_legend(n: int) -> dict[str, str]:
    """K_i as exponentials of the Cartan elements, e.g. K1 = q^{H/2} for n = 2."""
    out = {}
    for i, row in enumerate(htilde_coeffs(n)[: n - 1], start=1):
        if n == 2:
            out[f"K{i}"] = "q^{H/2}"
            continue
        terms = [f"{_frac(c)} H{k}" for k, c in enumerate(row, start=1) if c]
        out[f"K{i}"] = "q^{" + " + ".join(terms) + "}"
    return out


def _entries(T: OpMatrix) -> dict[str, str]:
    return {f"t{i + 1}{j + 1}": str(x) for i, r in enumerate(T.rows) for j, x in enumerate(r)}


def _signature_doc(sig) -> dict:
    return {
        "ring": list(sig.ring.names),
        "torus": list(sig.torus),
        "slots": [{"name": s.name, "gens": list(s.gens)} for s in sig.slots],
    }


def cmd_build(job: dict) -> tuple[dict, int]:
    c = _construction(job)
    doc = {
        "command": "build",
        "group": c.group,
        "n": c.n,
        "bindings": dict(sorted(c.bindings.items())),
        "signature": _signature_doc(c.T.sig),
        "T": c.T.to_json(),
        "entries": _entries(c.T),
    }
    if c.group == "sl_q":
        doc["torus_legend"] = torus_legend(c.n)
    if c.triple is not None:
        doc["T_plus"] = c.triple.T_plus.to_json()
        doc["T_minus"] = c.triple.T_minus.to_json()
    if c.factors is not None:
        for name, M in zip(("T_L", "T_D", "T_U"), c.factors):
            doc[name] = M.to_json()
    return doc, 0


def cmd_verify(job: dict) -> tuple[dict, int]:
    checks = job.get("checks") or ["all"]
    if isinstance(checks, str):
        checks = [checks]
    names = [x.strip() for item in checks for x in str(item).split(",") if x.strip()]
    for name in names:
        if name not in CHECKS + ("all",):
            raise UsageError(f"unknown check {name!r}; choose from {', '.join(CHECKS + ('all',))}")
    c = _construction(job)
    try:
        reports = run_checks(names, c, perturb=job.get("perturb"), threads=job.get("threads"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    passed = all(r.passed for r in reports)
    doc = {
        "command": "verify",
        "group": c.group,
        "n": c.n,
        "passed": passed,
        "reports": [_stable_report(r) for r in reports],
    }
    return doc, 0 if passed else 1


def _stable_report(r) -> dict:
    """Report without wall time, so identical jobs give identical bytes."""
    d = r.to_json()
    d.pop("wall_time", None)
    return d


def _sl_only(job: dict, what: str):
    if job["group"] != "sl_q":
        raise UsageError(f"{what} is available for sl_q only")
    if job["n"] < 2:
        raise UsageError(f"sl_q needs n >= 2, got {job['n']}")


def cmd_rep(job: dict) -> tuple[dict, int]:
    _sl_only(job, "rep")
    n = job["n"]
    if job.get("calibrate"):
        if n != 2:
            raise UsageError("table calibration is defined for n = 2")
        repro = reproduce_reference_table()
        doc = {"command": "rep", "group": "sl_q", "n": 2, **repro.to_json()}
        return doc, 0 if repro.ok else 1
    order = job.get("order") or "reversed"
    if order not in ORDERS:
        raise UsageError(f"order must be one of {', '.join(ORDERS)}")
    element = job.get("element") or "all"
    c = _construction(job)
    T = c.T
    if element == "identity":
        targets = {"identity": T.sig.one()}
    elif element == "all":
        targets = {f"t{i + 1}{j + 1}": x for i, r in enumerate(T.rows) for j, x in enumerate(r)}
    else:
        from .verify import parse_perturb

        try:
            i, j = parse_perturb(element, n)
        except ValueError as exc:
            raise UsageError(f"--element expects identity, all or tIJ: {exc}") from exc
        targets = {element: T[i, j]}
    mats = {name: dense_strings(evaluate_in_rep(x, order=order)) for name, x in targets.items()}
    doc = {
        "command": "rep",
        "group": "sl_q",
        "n": n,
        "bindings": dict(sorted(c.bindings.items())),
        "convention": {"kronecker_order": order, "q": f"v^{n}"},
        "matrices": mats,
    }
    return doc, 0


def cmd_limit(job: dict) -> tuple[dict, int]:
    _sl_only(job, "limit")
    n = job["n"]
    bindings = _bindings(job)
    if n == 2:
        for k, v in DEFAULT_LIMIT_BINDINGS.items():
            bindings.setdefault(k, v)
    else:
        bindings.setdefault("lambda", "q - q^-1")
    try:
        T = assemble_T(closed_form(n))
        M = classical_limit(T, bindings)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc
    doc = {
        "command": "limit",
        "group": "sl_q",
        "n": n,
        "bindings": dict(sorted(bindings.items())),
        "convention": {"q": "e^h", "M": "dT/dh at h = 0", "slots": [s.name for s in sl_signature(n).slots]},
        "M": {f"m{i + 1}{j + 1}": e.to_json() for i, r in enumerate(M) for j, e in enumerate(r)},
        "M_text": {f"m{i + 1}{j + 1}": str(e) for i, r in enumerate(M) for j, e in enumerate(r)},
    }
    return doc, 0


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "rep": cmd_rep, "limit": cmd_limit}


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", choices=GROUPS, default=None)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--f", default=None, help="value for every f_i (monomial string or 'formal')")
    common.add_argument("--g", default=None, help="value for every g_i")
    common.add_argument("--lambda", dest="lambda", default=None, help="binding for lambda, e.g. 'q - q^-1'")
    common.add_argument("--c-plus", dest="c_plus", default=None)
    common.add_argument("--c-minus", dest="c_minus", default=None)
    common.add_argument("--bind", action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--config", default=None, help="JSON file with job keys")
    common.add_argument("--output", default=None, help="write JSON here (atomically) instead of stdout")

    parser = argparse.ArgumentParser(prog="qgauss", description="Exact Gauss-generator constructions and relation checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="construct T and its Gauss factors")
    p = sub.add_parser("verify", parents=[common], help="run relation checks")
    p.add_argument("--checks", action="append", default=[], help="comma list from " + ",".join(CHECKS + ("all",)))
    p.add_argument("--perturb", default=None, metavar="tIJ", help="multiply entry (I,J) of T by q first")
    p.add_argument("--threads", type=int, default=None)
    p = sub.add_parser("rep", parents=[common], help="matrices in the fundamental representation")
    p.add_argument("--calibrate-table", "--calibrate-section5", dest="calibrate", action="store_true",
                   help="reproduce the reference 4x4 table for n = 2 with calibration metadata")
    p.add_argument("--element", default=None, help="identity, all (default) or tIJ")
    p.add_argument("--order", choices=ORDERS, default=None)
    sub.add_parser("limit", parents=[common], help="classical limit M = dT/dh at h = 0")
    return parser


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qgauss-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


VALUE_FLAGS = ("--f", "--g", "--lambda", "--c-plus", "--c-minus", "--bind")


def _glue_values(argv: list[str]) -> list[str]:
    """Allow ``--g -q*lambda``: argparse would read the value as an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        job = _merge(args)
        doc, code = COMMANDS[args.command](job)
    except UsageError as exc:
        print(f"qgauss: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    try:
        _write(text, job.get("output"))
    except OSError as exc:
        print(f"qgauss: error: cannot write output: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
