"""Command-line interface: shapes, Jacobians, Sylvester forms, differentials, checks."""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys

from .cohomology import classify, p_bounds, regularity, tate_term, terms_table
from .differentials import (
    FormError,
    FormTuple,
    assemble_differential,
    sylvester_delta,
    sylvester_delta_prime,
    toric_jacobian,
    tree_jacobian,
)
from .poly import DivisionNotExact
from .verify import (
    check_duality,
    check_identities,
    check_regularity,
    check_strand,
    check_tree_lemma,
    run_all,
    strand_grid,
)

SCHEMA = 1


class UsageError(Exception):
    pass


def int_range(text: str) -> tuple[int, int]:
    """'lo:hi' inclusive, or a single integer."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected lo:hi, got %r" % text)
    if lo > hi:
        raise argparse.ArgumentTypeError("empty range %r" % text)
    return lo, hi


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def _ambient(p):
    p.add_argument("-a", type=int, default=1)
    p.add_argument("-b", type=int, default=1)


def _optional_ambient(p):
    # only checked against the ambient recorded in the form file
    p.add_argument("-a", type=int, default=None)
    p.add_argument("-b", type=int, default=None)


def _twist(p):
    p.add_argument("-k", type=int, default=0)
    p.add_argument("-l", type=int, default=0)


def _format(p):
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="segre-tate", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=Parser)
    sub.required = True

    p = sub.add_parser("shape", help="type, p-bounds, regularity and terms T^p(F)")
    _ambient(p), _twist(p), _format(p)
    p.add_argument("--p-range", type=int_range, default=None)

    p = sub.add_parser("jacobian", help="toric Jacobian of a+b+1 forms")
    _optional_ambient(p), _format(p)
    p.add_argument("--forms", required=True)

    p = sub.add_parser("sylvester", help="Sylvester form δ (a+1 forms) or δ' (b+1 forms)")
    _optional_ambient(p), _format(p)
    p.add_argument("--forms", required=True)
    p.add_argument("--prime", action="store_true", help="compute δ' instead of δ")

    p = sub.add_parser("differential", help="matrix of d^p on one strand")
    _ambient(p), _twist(p), _format(p)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("verify", help="run checks")
    p.add_argument("check", choices=("strand", "identities", "tree", "regularity", "duality", "all"))
    _ambient(p), _format(p)
    p.add_argument("-k", type=int_range, default=None)
    p.add_argument("-l", type=int_range, default=None)
    p.add_argument("--degree", type=int_range, default=None)
    p.add_argument("--p-range", type=int_range, default=None)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    return parser


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _check_ambient(a, b):
    if a < 1 or b < 1:
        raise UsageError("need a, b >= 1")


def _read_forms(args) -> FormTuple:
    try:
        with open(args.forms, encoding="utf-8") as fh:
            t = FormTuple.from_json(fh.read())
    except OSError as e:
        raise UsageError("cannot read %s: %s" % (args.forms, e))
    except FormError as e:
        raise UsageError(str(e))
    for given, actual, name in ((args.a, t.ambient[0], "a"), (args.b, t.ambient[1], "b")):
        if given is not None and given != actual:
            raise UsageError("-%s %d does not match the form file (%s=%d)" % (name, given, name, actual))
    return t


def cmd_shape(args, out) -> int:
    a, b, k, l = args.a, args.b, args.k, args.l
    _check_ambient(a, b)
    pm, pp = p_bounds(a, b, k, l)
    lo, hi = args.p_range or (pm - 1, pp + 1)
    terms = [tate_term(a, b, k, l, p) for p in range(lo, hi + 1)]
    typ = str(classify(a, b, k, l))
    reg = regularity(a, b, k, l)
    if args.format == "json":
        out.write(dumps({"schema": SCHEMA, "a": a, "b": b, "k": k, "l": l, "type": typ,
                         "p_minus": pm, "p_plus": pp, "regularity": reg,
                         "terms": [t.to_json() for t in terms]}) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["p", "level", "twist", "dim", "kind"])
        for t in terms:
            for s in t.summands:
                w.writerow([t.p, s.level, s.twist, s.dim, s.space.kind])
    else:
        out.write("%s  p-=%d  p+=%d  reg=%d\n" % (typ, pm, pp, reg))
        out.write(terms_table(terms) + "\n")
    return 0


def _poly_out(poly, args, out, extra=None):
    if args.format == "json":
        obj = {"schema": SCHEMA, "polynomial": poly.to_json(), "text": str(poly)}
        obj.update(extra or {})
        out.write(dumps(obj) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["xexp", "yexp", "coef"])
        for rec in poly.to_json():
            w.writerow([" ".join(map(str, rec["xexp"])), " ".join(map(str, rec["yexp"])), rec["coef"]])
    else:
        out.write(str(poly) + "\n")
        for key, val in (extra or {}).items():
            out.write("%s: %s\n" % (key, val))


def cmd_jacobian(args, out) -> int:
    t = _read_forms(args)
    a, b = t.ambient
    if len(t) != a + b + 1:
        raise UsageError("toric Jacobian needs %d forms, got %d" % (a + b + 1, len(t)))
    try:
        jac = toric_jacobian(t)
    except DivisionNotExact as e:
        raise UsageError(str(e))
    extra = {}
    pairs = t.monomial_pairs()
    if pairs is not None and len(set(pairs)) == len(pairs):
        det_m, _ = tree_jacobian(pairs, a, b)
        tree = "yes, detM=±1" if det_m else "no, detM=0"
        extra = {"tree": tree} if args.format != "json" else {"tree": bool(det_m), "detM": det_m}
    _poly_out(jac, args, out, extra)
    return 0


def cmd_sylvester(args, out) -> int:
    t = _read_forms(args)
    try:
        poly = sylvester_delta_prime(t) if args.prime else sylvester_delta(t)
    except FormError as e:
        raise UsageError(str(e))
    _poly_out(poly, args, out)
    return 0


def cmd_differential(args, out) -> int:
    _check_ambient(args.a, args.b)
    mat = assemble_differential(args.a, args.b, args.k, args.l, args.p, args.degree)
    if args.format == "json":
        obj = {"schema": SCHEMA, "a": args.a, "b": args.b, "k": args.k, "l": args.l,
               "p": args.p, "degree": args.degree, "matrix": mat.to_json()}
        out.write(dumps(obj) + "\n")
    elif args.format == "csv":
        out.write(mat.to_csv())
    else:
        out.write("%dx%d\n" % mat.shape)
        if mat.rows and mat.cols:
            out.write(mat.to_table() + "\n")
    return 0


def _reports_for(args) -> list[dict]:
    a, b = args.a, args.b
    kr = args.k or (0, 0)
    lr = args.l or (0, 0)
    if args.check == "strand":
        dr = args.degree or (0, 0)
        return [check_strand(a, b, k, l, kd).to_json() for k, l, kd in strand_grid(a, b, kr, lr, dr)]
    if args.check == "identities":
        if args.trials < 1:
            raise UsageError("--trials must be >= 1")
        return [r.to_json() for r in check_identities(a, b, args.trials, args.seed)]
    if args.check == "tree":
        return [check_tree_lemma(a, b).to_json()]
    pairs = [(k, l) for k in range(kr[0], kr[1] + 1) for l in range(lr[0], lr[1] + 1)]
    if args.check == "regularity":
        out = []
        for k, l in pairs:
            if args.window < p_bounds(a, b, k, l)[1] + 2:
                raise UsageError("--window must be at least p+ + 2")
            out.append(check_regularity(a, b, k, l, args.window).to_json())
        return out
    if args.check == "duality":
        out = []
        for k, l in pairs:
            pm, pp = p_bounds(a, b, k, l)
            out.append(check_duality(a, b, k, l, args.p_range or (pm - 2, pp + 2)).to_json())
        return out
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    return run_all(a, b, args.trials, args.seed, args.k or (-2, 2), args.l or (-2, 2))


def cmd_verify(args, out) -> int:
    _check_ambient(args.a, args.b)
    reports = _reports_for(args)
    ok = all(r["pass"] for r in reports)
    if args.format == "json":
        obj = reports[0] if args.check == "strand" and len(reports) == 1 else {"reports": reports}
        obj = dict(obj, schema=SCHEMA)
        if "reports" in obj:
            obj["pass"] = ok
        out.write(dumps(obj) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["check", "params", "pass"])
        for r in reports:
            w.writerow([r["check"], dumps(r["params"]), "true" if r["pass"] else "false"])
    else:
        for r in reports:
            params = " ".join("%s=%s" % kv for kv in r["params"].items())
            out.write("%-4s %-20s %s\n" % ("ok" if r["pass"] else "FAIL", r["check"], params))
        out.write("%d checks, %d failed\n" % (len(reports), sum(not r["pass"] for r in reports)))
    return 0 if ok else 1


COMMANDS = {
    "shape": cmd_shape,
    "jacobian": cmd_jacobian,
    "sylvester": cmd_sylvester,
    "differential": cmd_differential,
    "verify": cmd_verify,
}


NEGATIVE_VALUE = re.compile(r"^-\d+(:-?\d+)?$")


def attach_negative_values(argv: list[str]) -> list[str]:
    """Turn '--opt -2:2' into '--opt=-2:2' so negative values are not read as flags."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("-") and "=" not in out[-1] and not NEGATIVE_VALUE.match(out[-1]) \
                and NEGATIVE_VALUE.match(tok):
            out[-1] = out[-1] + "=" + tok
        else:
            out.append(tok)
    return out


def dispatch(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(attach_negative_values(argv))
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        err.write("error: %s\n" % e)
        return 2


def main(argv=None) -> int:
    try:
        return dispatch(argv)
    except SystemExit as e:  # --help
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
