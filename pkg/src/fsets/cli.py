"""Batch command-line front end.

Exit codes: 0 PASS / success, 2 FAIL, 3 PASS-BOUNDED, 1 selftest or
recurrence failure, 64 parse error (bad JSON, bad expression, bad flags),
65 validation error, 69 resource limit.
"""

import argparse
import json
import sys

from .errors import FSetsError, ParseError, ResourceLimit
from .frobenius import IntPoly, char_poly_frobenius, minimal_poly_curve
from .groupmodel import CurveParams
from .intersector import (
    DEFAULT_BOUND,
    DEFAULT_CAP,
    brute_intersect,
    check_certificate,
    example1_setup,
    example2_setup,
    example3_data,
    example3_intersection,
    recurrence_coeffs,
    recurrence_report,
)
from .selftest import DEFAULT_SAMPLES, DEFAULT_SEED, run_all
from .scenario import read_scenario

EXIT_OK, EXIT_FAIL, EXIT_BOUNDED = 0, 2, 3
EXIT_PARSE, EXIT_VALIDATION, EXIT_RESOURCE = 64, 65, 69


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=None, help="coefficient bound B (default from scenario or 130)")
    common.add_argument("--cap", type=int, default=None, help="exponent cap N (default from scenario or 3)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("json", "text"), default="text")
    return common


def build_parser():
    common = _common()
    ap = _Parser(prog="fsets", description="F-sets for Mordell-Lang in positive characteristic.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("charpoly", parents=[common], help="characteristic polynomial of Frobenius")
    c.add_argument("scenario", nargs="?")
    c.add_argument("--p", type=int, default=5)
    c.add_argument("--q", type=int, default=None)
    c.add_argument("--a4", type=int, default=None)
    c.add_argument("--a6", type=int, default=None)

    for name, text in (("intersect", "brute-force X ∩ Gamma"), ("certify", "check the scenario's certificate")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("scenario")

    r = sub.add_parser("recurrence", parents=[common], help="F^n = a_n(F) modulo h, with verification")
    r.add_argument("scenario", nargs="?")
    r.add_argument("--h", default=None, help="coefficients of h, constant term first, e.g. 5,-2,1")
    r.add_argument("--n", type=int, default=25)

    sub.add_parser("example1", parents=[common], help="supersingular line example")
    sub.add_parser("example2", parents=[common], help="ordinary line example")
    e3 = sub.add_parser("example3", parents=[common], help="recurrence on the ordinary curve")
    e3.add_argument("--n", type=int, default=25)
    st = sub.add_parser("selftest", parents=[common], help="seeded invariant suites")
    st.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    return ap


# ------------------------------------------------------------------ output


def _emit(report, fmt, out):
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    for line in _text_lines(report):
        out.write(line + "\n")


def _text_lines(report):
    kind = report["command"]
    if kind == "charpoly":
        rows = report["curves"]
        if len(rows) == 1 and rows[0]["name"] is None:
            return [str(rows[0]["charpoly"])]
        return [f"{r['name']}: {r['charpoly']}" for r in rows]
    lines = [f"command: {kind}"]
    if "scenario" in report:
        lines.append(f"scenario: {report['scenario']}")
    inter = report.get("intersection")
    if inter is not None:
        lines.append(f"bound: {inter['bound']}")
        lines.append(f"witnesses ({len(inter['witnesses'])}):")
        lines += [f"  {w['coefficients']}  {w['point']}" for w in inter["witnesses"]]
        lines.append(f"negative witnesses: {inter['negative_witnesses']}")
    cert = report.get("certificate")
    if cert is not None:
        lines.append(f"certificate: {cert['verdict']} (B={cert['bound']}, N={cert['cap']})")
        for key in ("soundness_failures", "completeness_failures", "undecided"):
            for item in cert[key]:
                lines.append(f"  {key[:-1].replace('_', ' ')}: {json.dumps(item, sort_keys=True)}")
    ident = report.get("pointwise_identity")
    if ident is not None:
        for row in ident:
            lines.append(f"identity n={row['n']}: {'holds' if row['holds'] else 'FAILS'}")
    rec = report.get("recurrence")
    if rec is not None:
        lines.append(f"h: {rec['h']}")
        for n, a in enumerate(rec["coefficients"]):
            lines.append(f"  a_{n} = {a}")
        if "verified" in rec:
            lines.append(
                f"verify_recurrence(n <= {rec['n']}): {'ok' if rec['verified'] else 'FAILED'}"
                f" (relation {'holds' if rec['relation_holds'] else 'fails'},"
                f" direct checks {_span(rec['direct_checked'])}"
                + (f", first failure at n={rec['failed_at']})" if rec["failed_at"] is not None else ")")
            )
    for suite in report.get("suites", []):
        lines.append(f"{suite['name']}: {suite['checks']} checks, {len(suite['failures'])} failures")
        lines += [f"  {f}" for f in suite["failures"]]
    if "verdict" in report:
        lines.append(f"verdict: {report['verdict']}")
    return lines


def _span(ns):
    if not ns:
        return "none"
    return f"n = {ns[0]}" if len(ns) == 1 else f"n = {ns[0]}..{ns[-1]}"


# ---------------------------------------------------------------- commands


def _intersection_report(res):
    return {
        "bound": res.bound,
        "witnesses": [{"coefficients": list(c), "point": str(P)} for c, P in res.witnesses],
        "negative_witnesses": res.negative_witnesses,
    }


def _bounds(args, st):
    B = st.bound if args.bound is None else args.bound
    N = st.cap if args.cap is None else args.cap
    if B < 0 or N < 0:
        raise ParseError("bounds must be nonnegative")
    return B, N


def _run_setup(st, args, with_certificate=True):
    B, N = _bounds(args, st)
    res = brute_intersect(st.variety, st.gamma, B, threads=args.threads)
    report = {"command": args.command, "scenario": st.name, "intersection": _intersection_report(res)}
    code = EXIT_OK
    if with_certificate:
        if st.certificate is None:
            raise FSetsError("scenario has no certificate")
        cert = st.certificate
        cert.bound, cert.cap = B, N
        cr = check_certificate(st.variety, st.gamma, cert, threads=args.threads, intersection=res)
        report["certificate"] = cr.to_dict()
        report["verdict"] = cr.verdict
        code = cr.exit_code
    return report, code


def cmd_charpoly(args):
    rows = []
    if args.scenario:
        st = read_scenario(args.scenario)
        q = st.group.q if args.q is None else args.q
        for name, E in st.curves.items():
            rows.append((name, E, q))
    else:
        if args.a4 is None or args.a6 is None:
            raise ParseError("charpoly needs a scenario file or both --a4 and --a6")
        E = CurveParams(args.p, args.a4, args.a6)
        rows.append((None, E, args.q or args.p))
    curves = []
    for name, E, q in rows:
        h = char_poly_frobenius(E, q)
        curves.append({"name": name, "q": q, "charpoly": h.tolist(), "minimal": minimal_poly_curve(E, q).tolist()})
    return {"command": "charpoly", "curves": curves}, EXIT_OK


def cmd_intersect(args):
    st = read_scenario(args.scenario)
    return _run_setup(st, args, with_certificate=False)


def cmd_certify(args):
    st = read_scenario(args.scenario)
    return _run_setup(st, args)


def _parse_h(text):
    try:
        coeffs = [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"--h expects comma-separated integers, got {text!r}") from None
    return IntPoly(coeffs)


def _recurrence(args, curve, P, h, q):
    n = args.n
    if n < 0:
        raise ParseError("--n must be nonnegative")
    coeffs = [list(map(int, recurrence_coeffs(h, k))) for k in range(n + 1)]
    rep = {"h": h.tolist(), "n": n, "coefficients": coeffs}
    if curve is not None:
        rr = recurrence_report(curve, P, h, n, q)
        rep.update(verified=rr.ok, relation_holds=rr.relation_holds, direct_checked=rr.direct_checked, failed_at=rr.failed_at)
    return rep


def cmd_recurrence(args):
    if args.scenario:
        st = read_scenario(args.scenario)
        if not st.curve_points:
            raise FSetsError("recurrence needs a named curve point in the scenario")
        name = next(iter(st.curve_points))
        P = st.curve_points[name]
        curve, q = P.curve, st.group.q
        h = _parse_h(args.h) if args.h else char_poly_frobenius(curve, q)
    else:
        curve, P, h = example3_data()
        q = 5
        if args.h:
            h = _parse_h(args.h)
    rep = _recurrence(args, curve, P, h, q)
    report = {"command": "recurrence", "recurrence": rep}
    ok = rep.get("verified", True)
    report["verdict"] = "PASS" if ok else "FAIL"
    return report, EXIT_OK if ok else 1


def _identity_rows(st, upto=3):
    """F^{2n}(Q1) + F^{4n}(Q2) = 25^n Q, checked on the formal coordinates."""
    S1 = st.certificate.claimed.groupless[0]
    Q = st.points["Q"]
    return [{"n": n, "holds": S1.point((n,)) == Q * 25**n} for n in range(upto + 1)]


def cmd_example1(args):
    st = example1_setup()
    report, code = _run_setup(st, args)
    report["pointwise_identity"] = _identity_rows(st)
    if not all(r["holds"] for r in report["pointwise_identity"]):
        report["verdict"], code = "FAIL", EXIT_FAIL
    return report, code


def cmd_example2(args):
    return _run_setup(example2_setup(), args)


def cmd_example3(args):
    curve, P, h = example3_data()
    rep = _recurrence(args, curve, P, h, 5)
    rep["intersection_vectors"] = [list(map(int, v)) for v in example3_intersection(h, min(args.n, 8))]
    ok = rep["verified"]
    return {"command": "example3", "recurrence": rep, "verdict": "PASS" if ok else "FAIL"}, EXIT_OK if ok else 1


def cmd_selftest(args):
    suites = run_all(args.seed, args.samples)
    ok = all(s.ok for s in suites)
    report = {
        "command": "selftest",
        "seed": args.seed,
        "suites": [{"name": s.name, "checks": s.checks, "failures": s.failures} for s in suites],
        "verdict": "PASS" if ok else "FAIL",
    }
    return report, EXIT_OK if ok else 1


COMMANDS = {
    "charpoly": cmd_charpoly,
    "intersect": cmd_intersect,
    "certify": cmd_certify,
    "recurrence": cmd_recurrence,
    "example1": cmd_example1,
    "example2": cmd_example2,
    "example3": cmd_example3,
    "selftest": cmd_selftest,
}


def run(argv=None, out=None, err=None):
    """Run one command; returns the exit code.  Output is written only at the end."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_PARSE
    if args.threads < 1:
        err.write("fsets: error: --threads must be at least 1\n")
        return EXIT_PARSE
    try:
        report, code = COMMANDS[args.command](args)
    except ParseError as e:
        err.write(f"fsets: parse error: {e}\n")
        return EXIT_PARSE
    except ResourceLimit as e:
        err.write(f"fsets: resource limit: {e}\n")
        return EXIT_RESOURCE
    except FSetsError as e:
        err.write(f"fsets: invalid input: {e}\n")
        return EXIT_VALIDATION
    _emit(report, args.format, out)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
