"""Batch command-line front end.

Subcommands construct ideals, compare Groebner heights with the closed-form
formulas, run arithmetic-rank certificates, verify the ideal identities and
localization lemmas, count strata over finite fields, exercise the chart
round-trip suites, and run the named acceptance grids.  Output is JSON (CSV
for grid tables), byte-stable for fixed flags; all randomness flows from
--seed.  Exit codes: 0 all pass, 2 a verification failed, 3 budget exceeded,
64 usage error.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import certificates as cert
from . import nullcones as nc
from . import pointcount as pc
from .fields import GF, QQ, field_from_descriptor
from .fiberlab import CHART_DEFAULTS, run_chart_suite
from .groebner import Budget, ResourceLimitError
from .ideals import Ideal, height, intersect_many, radical_equal
from .pointcount import BudgetExceededError, StratumSpec

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_USAGE = 0, 2, 3, 64

GRID_NAMES = ("heights", "certificates", "char2", "identities", "localization",
              "fiberlab", "counts", "all")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _thread_count() -> int:
    env = os.environ.get("NULLCONE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _params_from_args(args) -> nc.FamilyParams:
    m = args.m if args.family == "generic" else None
    return nc.FamilyParams(args.family, args.t, args.n, m=m)


def _budget(args) -> Budget:
    return Budget(max_terms=args.budget_terms, max_seconds=args.budget_seconds)


def _base_record(args, command: str) -> dict:
    echo = {k: v for k, v in sorted(vars(args).items())
            if k not in ("func",) and v is not None}
    echo["subcommand"] = command
    return {"schema_version": SCHEMA_VERSION, "command": echo}


def _emit(record, args) -> None:
    if getattr(args, "format", "json") == "csv" and "cells" in record:
        lines = []
        cols = sorted({k for cell in record["cells"] for k in cell})
        lines.append(",".join(cols))
        for cell in record["cells"]:
            lines.append(",".join(_csv_atom(cell.get(c)) for c in cols))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(record, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_atom(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    text = str(value)
    if "," in text or '"' in text:
        text = '"' + text.replace('"', '""') + '"'
    return text


def _timing_block(args, t0) -> dict:
    if getattr(args, "timings", False):
        return {"elapsed_ms": int(1000 * (time.monotonic() - t0))}
    return {"elapsed_ms": 0}


# -- subcommands -----------------------------------------------------------------


def cmd_construct(args) -> int:
    field = field_from_descriptor(args.field)
    params = _params_from_args(args)
    if args.vc:
        i, j = (int(x) for x in args.vc.split(","))
        ideal = nc.variety_of_complexes(params, i, j, field)
        label = f"p_{i},{j}"
    else:
        ideal = nc.nullcone_ideal(params, field)
        label = "nullcone"
    record = _base_record(args, "construct")
    record["formulas"] = nc.formulas_block(params)
    record["ideal"] = dict(ideal.to_json(), label=label)
    _emit(record, args)
    return EXIT_OK


def cmd_height(args) -> int:
    t0 = time.monotonic()
    field = field_from_descriptor(args.field)
    params = _params_from_args(args)
    record = _base_record(args, "height")
    record["formulas"] = nc.formulas_block(params)
    if args.vc:
        i, j = (int(x) for x in args.vc.split(","))
        ideal = nc.variety_of_complexes(params, i, j, field)
        expected = nc.height_pij(params.m, params.t, params.n, i, j)
    else:
        ideal = nc.nullcone_ideal(params, field)
        expected = nc.height_formula(params)
    computed = height(ideal, _budget(args))
    passed = computed == expected
    record["computed"] = {"height": computed, "formula_height": expected,
                          "pass": passed}
    record["checks"] = [{"name": "height-vs-formula", "pass": passed,
                         "witness": None, "elapsed_ms": 0}]
    record["timing"] = _timing_block(args, t0)
    _emit(record, args)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_ara_certify(args) -> int:
    t0 = time.monotonic()
    field = field_from_descriptor(args.field)
    params = _params_from_args(args)
    record = _base_record(args, "ara-certify")
    record["formulas"] = nc.formulas_block(params)
    budget = _budget(args)
    if args.count is not None:
        sample = cert.sample_hsop(params, field, args.seed, count=args.count)
        certificate = cert.verify_certificate(sample, budget=budget)
    else:
        try:
            certificate = cert.certify(params, field, args.seed, args.retries, budget)
        except cert.RetryExhaustedError as e:
            record["error"] = {"kind": "retry-exhausted", "message": str(e)}
            _emit(record, args)
            return EXIT_FAIL
    record["certificate"] = certificate.to_json(include_timing=args.timings)
    record["checks"] = [r.to_json(args.timings) for r in certificate.transcript]
    record["timing"] = _timing_block(args, t0)
    _emit(record, args)
    return EXIT_OK if certificate.verified else EXIT_FAIL


def _identity_check(args, budget) -> cert.CheckReport:
    which = args.which
    if which == "char2":
        return cert.check_char2_example(args.n, prime=args.prime or 2, budget=budget)
    if which == "localization-pfaffian":
        return cert.check_localization_pfaffian(args.t, args.n, seed=args.seed,
                                                budget=budget)
    if which == "localization-generic":
        return cert.check_localization_generic(args.m, args.t, args.n,
                                               seed=args.seed, budget=budget)
    if which == "localization-symmetric":
        return cert.check_symmetric_localization(args.t, args.n, seed=args.seed,
                                                 retries=args.retries, budget=budget)
    if which == "remark-det":
        return cert.check_remark_det_identity(args.n)
    field = field_from_descriptor(args.field)
    params = nc.FamilyParams("generic", args.t, args.n, m=args.m)
    if which == "intersection":
        return check_intersection_identity(params, field, budget)
    if which == "intersect-pij":
        return check_intersect_pij(params, args.ell, field, budget)
    raise ValueError(which)


def check_intersection_identity(params, field, budget) -> cert.CheckReport:
    """The generic nullcone radical-equals the intersection of the rank
    varieties p_{i,j} with i + j = t."""
    t0 = time.monotonic()
    m, t, n = params.m, params.t, params.n
    A = nc.generic_nullcone(params, field)
    pieces = [nc.variety_of_complexes(params, i, t - i, field)
              for i in range(max(0, t - min(n, t)), min(m, t) + 1)
              if t - i <= min(n, t)]
    inter = intersect_many(pieces, budget)
    ok, wit = radical_equal(A, inter, budget)
    return cert.CheckReport(
        f"intersection(m={m},t={t},n={n})", ok,
        witness=None if ok else f"{wit['direction']}: {wit['generator']}",
        elapsed_ms=int(1000 * (time.monotonic() - t0)),
        detail={"components": len(pieces)})


def check_intersect_pij(params, ell, field, budget) -> cert.CheckReport:
    """p_{l, t-l-1} radical-equals (p_{0,t} cap ... cap p_{l,t-l}) + p_{l+1, t-l-1}."""
    t0 = time.monotonic()
    m, t, n = params.m, params.t, params.n
    if not 0 <= ell <= t - 1:
        raise ValueError("need 0 <= ell <= t-1")
    lhs = nc.variety_of_complexes(params, ell, t - ell - 1, field)
    a_ell = intersect_many([nc.variety_of_complexes(params, i, t - i, field)
                            for i in range(ell + 1)], budget)
    rhs_part = nc.variety_of_complexes(params, ell + 1, t - ell - 1, field)
    rhs = Ideal(lhs.ring, list(a_ell.generators) + list(rhs_part.generators))
    ok, wit = radical_equal(lhs, rhs, budget)
    return cert.CheckReport(
        f"intersect-pij(m={m},t={t},n={n},ell={ell})", ok,
        witness=None if ok else f"{wit['direction']}: {wit['generator']}",
        elapsed_ms=int(1000 * (time.monotonic() - t0)))


def cmd_check_identities(args) -> int:
    t0 = time.monotonic()
    record = _base_record(args, "check-identities")
    report = _identity_check(args, _budget(args))
    record["checks"] = [report.to_json(args.timings)]
    record["timing"] = _timing_block(args, t0)
    _emit(record, args)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_count(args) -> int:
    t0 = time.monotonic()
    record = _base_record(args, "count")
    checks = []
    if args.op == "enumerate":
        spec = StratumSpec(args.space, tuple(args.params), args.q)
        rep = pc.enumerate_stratum(spec, args.budget_points)
        record["computed"] = rep.to_json(args.timings)
        passed = True
    elif args.op == "closed":
        value = pc.closed_count(args.space, tuple(args.params), args.q)
        record["computed"] = {"space": args.space, "params": args.params,
                              "q": args.q, "closed_count": value}
        passed = True
    elif args.op == "both":
        spec = StratumSpec(args.space, tuple(args.params), args.q)
        rep = pc.enumerate_stratum(spec, args.budget_points)
        closed = pc.closed_count(args.space, tuple(args.params), args.q)
        passed = rep.count == closed
        record["computed"] = {"enumerated": rep.count, "closed_count": closed,
                              "match": passed}
        checks.append({"name": "closed-vs-enumerate", "pass": passed,
                       "witness": None if passed else f"{rep.count} != {closed}",
                       "elapsed_ms": 0})
    elif args.op == "chain":
        rep = pc.check_chain(args.family_chain, tuple(args.params), args.q,
                             args.budget_points)
        record["computed"] = rep.to_json()
        passed = rep.partition_ok and rep.all_multiplicative is not False
        checks.append({"name": "chain-multiplicativity", "pass": passed,
                       "witness": None, "elapsed_ms": 0})
    else:  # fit
        fit = pc.poly_fit(args.space, tuple(args.params), args.primes,
                          args.budget_points)
        record["computed"] = fit.to_json()
        passed = True
    record["checks"] = checks
    record["timing"] = _timing_block(args, t0)
    _emit(record, args)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_fiber_check(args) -> int:
    t0 = time.monotonic()
    field = field_from_descriptor(args.field)
    record = _base_record(args, "fiber-check")
    which_list = list(CHART_DEFAULTS) if args.which == "all" else [args.which]
    cells = []
    for which in which_list:
        suite = run_chart_suite(which, field, n_samples=args.samples, seed=args.seed)
        cells.append(suite)
    record["cells"] = cells
    passed = all(c["all_exact"] for c in cells)
    record["checks"] = [{"name": f"chart-suite-{c['which']}", "pass": c["all_exact"],
                         "witness": None, "elapsed_ms": 0} for c in cells]
    record["timing"] = _timing_block(args, t0)
    _emit(record, args)
    return EXIT_OK if passed else EXIT_FAIL


# -- acceptance grids ---------------------------------------------------------------

HEIGHT_GRID = (
    [("pfaffian", dict(t=t, n=n)) for t, n in ((1, 2), (1, 3), (1, 4), (2, 3))]
    + [("generic", dict(m=m, t=t, n=n)) for m, t, n in ((1, 1, 1), (2, 1, 2), (2, 2, 2))]
    + [("symmetric", dict(t=t, n=n)) for t, n in ((1, 2), (1, 3), (2, 2), (2, 3))]
)

CERTIFICATE_GRID = [
    ("pfaffian", dict(t=1, n=3)),
    ("generic", dict(m=2, t=1, n=2)),
    ("symmetric", dict(t=2, n=2)),
]


def _grid_heights(args, budget):
    field = GF(32003)

    def cell(item):
        family, kw = item
        params = nc.FamilyParams(family, kw["t"], kw["n"], m=kw.get("m"))
        ideal = nc.nullcone_ideal(params, field)
        expected = nc.height_formula(params)
        computed = height(ideal, budget)
        return {"grid": "heights", "cell": params.label(),
                "formula": expected, "computed": computed,
                "pass": computed == expected}
    return _run_cells(cell, HEIGHT_GRID)


def _grid_certificates(args, budget):
    cells_spec = []
    for family, kw in CERTIFICATE_GRID:
        for fdesc in ("rational", "p=32003"):
            cells_spec.append((family, kw, fdesc, "verify"))
            cells_spec.append((family, kw, fdesc, "lower-evidence"))

    def cell(item):
        family, kw, fdesc, mode = item
        params = nc.FamilyParams(family, kw["t"], kw["n"], m=kw.get("m"))
        field = field_from_descriptor(fdesc)
        label = f"{params.label()}/{fdesc}"
        if mode == "verify":
            certificate = cert.certify(params, field, seed=args.seed,
                                       retries=args.retries, budget=budget)
            return {"grid": "certificates", "cell": label, "mode": mode,
                    "candidates": certificate.candidate_count,
                    "ara_formula": nc.ara_formula(params),
                    "pass": certificate.verified and
                    certificate.candidate_count == nc.ara_formula(params)}
        target = nc.ara_formula(params) - 1
        nullcone = nc.nullcone_ideal(params, field)
        successes = 0
        for seed in range(20):
            sample = cert.sample_hsop(params, field, cert.derived_seed(seed, 0),
                                      count=target)
            attempt = cert.verify_certificate(sample, nullcone, budget)
            if attempt.verified:
                successes += 1
        return {"grid": "certificates", "cell": label, "mode": mode,
                "candidates": target, "seeds": 20, "successes": successes,
                "pass": successes == 0}
    return _run_cells(cell, cells_spec)


def _grid_char2(args, budget):
    spec = [(2, 2, True), (3, 2, True), (2, 3, False), (3, 3, False)]

    def cell(item):
        n, prime, expect_pass = item
        rep = cert.check_char2_example(n, prime=prime, budget=budget)
        return {"grid": "char2", "cell": f"n={n},p={prime}",
                "expected": "pass" if expect_pass else "fail-with-witness",
                "witness": rep.witness,
                "pass": rep.passed == expect_pass and
                (expect_pass or rep.witness is not None)}
    return _run_cells(cell, spec)


def _grid_identities(args, budget):
    def cell(item):
        kind, params_kw, ell = item
        params = nc.FamilyParams("generic", params_kw["t"], params_kw["n"],
                                 m=params_kw["m"])
        field = GF(32003)
        if kind == "intersection":
            rep = check_intersection_identity(params, field, budget)
        else:
            rep = check_intersect_pij(params, ell, field, budget)
        return {"grid": "identities", "cell": rep.name, "pass": rep.passed,
                "witness": rep.witness}
    spec = [
        ("intersection", dict(m=2, t=2, n=2), None),
        ("intersect-pij", dict(m=2, t=2, n=2), 0),
        ("intersect-pij", dict(m=2, t=2, n=2), 1),
        ("intersection", dict(m=2, t=1, n=2), None),
    ]
    return _run_cells(cell, spec)


def _grid_localization(args, budget):
    def cell(item):
        kind = item[0]
        if kind == "pfaffian":
            rep = cert.check_localization_pfaffian(item[1], item[2], seed=args.seed,
                                                   budget=budget)
        elif kind == "generic":
            rep = cert.check_localization_generic(item[1], item[2], item[3],
                                                  seed=args.seed, budget=budget)
        elif kind == "symmetric":
            rep = cert.check_symmetric_localization(item[1], item[2], seed=args.seed,
                                                    retries=args.retries,
                                                    budget=budget)
        else:
            rep = cert.check_remark_det_identity(item[1])
        return {"grid": "localization", "cell": rep.name, "pass": rep.passed,
                "witness": rep.witness}
    spec = [("pfaffian", 2, 2), ("generic", 2, 2, 2), ("symmetric", 2, 2),
            ("remark", 1), ("remark", 2), ("remark", 3)]
    return _run_cells(cell, spec)


def _grid_fiberlab(args, budget):
    field = GF(101)

    def cell(item):
        if item[0] == "chart":
            suite = run_chart_suite(item[1], field, n_samples=args.samples,
                                    seed=args.seed)
            return {"grid": "fiberlab", "cell": f"chart:{item[1]}",
                    "samples": suite["samples"], "passed": suite["passed"],
                    "off_chart": suite["off_chart_resamples"],
                    "cover": suite["cover"], "pass": suite["all_exact"]}
        if item[0] == "symplectic":
            ok = _symplectic_complete_suite(item[1], item[2], field,
                                            args.samples, args.seed)
            return {"grid": "fiberlab", "cell": f"symplectic_complete(t={item[1]},k={item[2]})",
                    "samples": args.samples, "pass": ok}
        if item[0] == "alt_sqrt":
            ok = _alt_sqrt_suite(item[1], field, args.samples, args.seed)
            return {"grid": "fiberlab", "cell": f"alt_sqrt_section(k={item[1]})",
                    "samples": args.samples, "pass": ok}
        ok = _unitary_suite(item[1], 50, args.seed)
        return {"grid": "fiberlab", "cell": f"unitary_sym_sqrt(k={item[1]})",
                "samples": 50, "pass": ok}
    spec = [("chart", w) for w in CHART_DEFAULTS]
    spec += [("symplectic", 2, 1), ("symplectic", 3, 2)]
    spec += [("alt_sqrt", 1), ("alt_sqrt", 2)]
    spec += [("unitary", k) for k in range(1, 6)]
    return _run_cells(cell, spec)


def _symplectic_complete_suite(t, k, field, samples, seed) -> bool:
    import random as _random
    from .fiberlab import random_symplectic_frame, symplectic_complete
    from .linalg import ExactMatrix
    rng = _random.Random(seed)
    omega = ExactMatrix.omega(field, t)
    for _ in range(samples):
        P = random_symplectic_frame(field, t, k, rng)
        M = symplectic_complete(P)
        if M.transpose() * omega * M != omega:
            return False
        if M.submatrix(range(2 * t), range(2 * k)) != P:
            return False
    return True


def _alt_sqrt_suite(k, field, samples, seed) -> bool:
    import random as _random
    from .fiberlab import alt_sqrt_section, random_alt_invertible
    from .linalg import ExactMatrix
    rng = _random.Random(seed)
    omega = ExactMatrix.omega(field, k)
    for _ in range(samples):
        A = random_alt_invertible(field, 2 * k, rng)
        M = alt_sqrt_section(A)
        if M.transpose() * omega * M != A:
            return False
    return True


def _unitary_suite(k, samples, seed) -> bool:
    import cmath as _cmath
    import math as _math
    import random as _random
    from .fiberlab import (_cmat_mul, _cmat_sub, _ceye, _cconj, _ctranspose,
                           frobenius_norm, unitary_sym_sqrt)
    rng = _random.Random(seed)
    for _ in range(samples):
        A = _ceye(k)
        for _h in range(4):
            v = [rng.gauss(0, 1) for _ in range(k)]
            nv = _math.sqrt(sum(x * x for x in v)) or 1.0
            v = [x / nv for x in v]
            H = [[(1.0 if i == j else 0.0) - 2 * v[i] * v[j] + 0j
                  for j in range(k)] for i in range(k)]
            A = _cmat_mul(H, A)
        D = [_cmath.exp(2j * _cmath.pi * rng.random()) for _ in range(k)]
        U = [[sum(A[l][i] * D[l] * A[l][j] for l in range(k)) for j in range(k)]
             for i in range(k)]
        try:
            V = unitary_sym_sqrt(U, tol=1e-9)
        except Exception:
            return False
        if frobenius_norm(_cmat_sub(_cmat_mul(V, V), U)) >= 1e-9:
            return False
        if frobenius_norm(_cmat_sub(V, _ctranspose(V))) >= 1e-9:
            return False
        if frobenius_norm(_cmat_sub(_cmat_mul(_ctranspose(_cconj(V)), V),
                                    _ceye(k))) >= 1e-9:
            return False
    return True


def _grid_counts(args, budget_points):
    def cell(item):
        kind = item[0]
        if kind == "both":
            _, space, params, q = item
            rep = pc.enumerate_stratum(StratumSpec(space, params, q), budget_points)
            closed = pc.closed_count(space, params, q)
            return {"grid": "counts", "cell": f"{space}{params} q={q}",
                    "enumerated": rep.count, "closed": closed,
                    "pass": rep.count == closed}
        if kind == "chain":
            _, family, params, q = item
            rep = pc.check_chain(family, params, q, budget_points)
            return {"grid": "counts", "cell": f"chain-{family}{params} q={q}",
                    "partition": rep.partition_ok,
                    "multiplicative": rep.all_multiplicative,
                    "pass": rep.partition_ok and rep.all_multiplicative}
        _, family, params, q = item
        rep = pc.check_chain(family, params, q, budget_points)
        return {"grid": "counts", "cell": f"partition-{family}{params} q={q}",
                "partition": rep.partition_ok, "pass": rep.partition_ok}
    spec = [
        ("both", "Sp", (1, 1), 3), ("both", "Sp", (2, 1), 3),
        ("both", "Alt", (1,), 3), ("both", "Alt", (2,), 3),
        ("both", "GL", (3, 2), 2), ("both", "GL", (3, 2), 3),
        ("both", "P", (2, 1), 3),
        ("chain", "alternating", (1, 3), 3),
        ("chain", "generic", (2, 1, 2), 3),
        ("partition", "alternating", (1, 3), 3), ("partition", "alternating", (1, 3), 5),
        ("partition", "generic", (2, 1, 2), 3), ("partition", "generic", (2, 1, 2), 5),
        ("partition", "symmetric", (2, 2), 3), ("partition", "symmetric", (2, 2), 5),
    ]
    return _run_cells(cell, spec)


def _run_cells(fn, items):
    workers = _thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def cmd_grid(args) -> int:
    t0 = time.monotonic()
    budget = _budget(args)
    record = _base_record(args, "grid")
    runners = {
        "heights": lambda: _grid_heights(args, budget),
        "certificates": lambda: _grid_certificates(args, budget),
        "char2": lambda: _grid_char2(args, budget),
        "identities": lambda: _grid_identities(args, budget),
        "localization": lambda: _grid_localization(args, budget),
        "fiberlab": lambda: _grid_fiberlab(args, budget),
        "counts": lambda: _grid_counts(args, args.budget_points),
    }
    names = [n for n in runners] if args.name == "all" else [args.name]
    cells = []
    for name in names:
        cells.extend(runners[name]())
    record["cells"] = cells
    passed = all(c["pass"] for c in cells)
    record["summary"] = {"cells": len(cells),
                         "passed": sum(1 for c in cells if c["pass"]),
                         "pass": passed}
    record["timing"] = _timing_block(args, t0)
    _emit(record, args)
    return EXIT_OK if passed else EXIT_FAIL


# -- parser ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="nullcone",
                     description="Exact verification of determinantal nullcone "
                                 "ideals: heights, arithmetic-rank certificates, "
                                 "ideal identities, chart round trips, and "
                                 "finite-field point counts.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, field_default="p=32003"):
        p.add_argument("--field", default=field_default,
                       help='coefficient field: "rational" or "p=<prime>"')
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--retries", type=int, default=20)
        p.add_argument("--budget-terms", type=int, default=1_000_000)
        p.add_argument("--budget-seconds", type=float, default=300.0)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings (breaks byte-stability)")

    def family_args(p):
        p.add_argument("--family", choices=nc.FAMILIES, required=True)
        p.add_argument("-t", type=int, required=True)
        p.add_argument("-n", type=int, required=True)
        p.add_argument("-m", type=int, default=None)

    p = sub.add_parser("construct", help="emit ideal generators")
    family_args(p)
    p.add_argument("--vc", default=None, metavar="I,J",
                   help="variety-of-complexes ideal p_{I,J} (generic family)")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("height", help="Groebner height vs closed formula")
    family_args(p)
    p.add_argument("--vc", default=None, metavar="I,J")
    common(p)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("ara-certify", help="arithmetic-rank certificate pipeline")
    family_args(p)
    p.add_argument("--count", type=int, default=None,
                   help="override the candidate count (default: ara formula)")
    common(p)
    p.set_defaults(func=cmd_ara_certify)

    p = sub.add_parser("check-identities", help="ideal identities and lemmas")
    p.add_argument("--which", required=True,
                   choices=("intersection", "intersect-pij", "char2",
                            "localization-pfaffian", "localization-generic",
                            "localization-symmetric", "remark-det"))
    p.add_argument("-t", type=int, default=2)
    p.add_argument("-n", type=int, default=2)
    p.add_argument("-m", type=int, default=2)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--prime", type=int, default=None,
                   help="control prime for the char2 example")
    common(p)
    p.set_defaults(func=cmd_check_identities)

    p = sub.add_parser("count", help="finite-field point counts")
    p.add_argument("--op", choices=("enumerate", "closed", "both", "chain", "fit"),
                   default="both")
    p.add_argument("--space", default="Sp", choices=pc.SPACES)
    p.add_argument("--params", type=int, nargs="*", default=[1, 1],
                   help="space parameters, e.g. --params 1 1 for Sp(2,2)")
    p.add_argument("--family-chain", choices=("alternating", "generic", "symmetric"),
                   default="alternating")
    p.add_argument("-q", type=int, default=3)
    p.add_argument("--primes", type=int, nargs="*", default=[3, 5, 7, 11, 13])
    p.add_argument("--budget-points", type=int, default=pc.ENUMERATION_BUDGET)
    common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("fiber-check", help="chart round-trip suites")
    p.add_argument("--which", default="all",
                   choices=("all",) + tuple(CHART_DEFAULTS))
    p.add_argument("--samples", type=int, default=200)
    common(p, field_default="p=101")
    p.set_defaults(func=cmd_fiber_check)

    p = sub.add_parser("grid", help="run a named acceptance grid")
    p.add_argument("--name", choices=GRID_NAMES, required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--budget-points", type=int, default=pc.ENUMERATION_BUDGET)
    common(p)
    p.set_defaults(func=cmd_grid)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ResourceLimitError, BudgetExceededError) as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET
    except (cert.RetryExhaustedError, cert.ConstructionDegenerateError) as e:
        sys.stderr.write(f"verification could not complete: {e}\n")
        return EXIT_FAIL


def run(argv=None) -> int:
    """Alias used by tests; identical to main."""
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
