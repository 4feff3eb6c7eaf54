"""Command-line entry point.

Exit status: 0 when the run's claim holds, 1 for data, validation or
certification failures, 2 for usage errors.
"""
import argparse
import datetime
import math
import sys
import time

from . import __version__
from .errors import CertificationError, NotOrthonormalError, TwoFrameError
from .frames import RowPair, validate_frame
from .generators import GENERATOR_NAME, GENERATOR_VERSION, random_frame, tightness_frame, tightness_params, tightness_roles
from .io import (
    SCHEMA_VERSION,
    certificate_from_document,
    certificate_to_list,
    read_frame,
    read_report,
    write_frame,
    write_report,
)
from .oracle import DEFAULT_CAP, best_pair_bruteforce
from .proofaudit import audit_invariants, case_b_premise, min_offdiag_margin, CASE_B_MARGIN_TOL
from .selection import Selection, certificate_problems, select_pair, verify_selection

ORACLE_SLACK = 1e-12
TIGHTNESS_TOL = 1e-12
MAX_LISTED_MAXIMIZERS = 100


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- inputs

def _source_spec(args):
    given = [name for name in ("input", "gen_random", "n") if getattr(args, name, None) is not None]
    if len(given) != 1:
        raise UsageError("exactly one of --input, --gen-random, --n is required")
    if args.input is not None:
        return {"kind": "file", "path": str(args.input)}
    if args.gen_random is not None:
        return {"kind": "random", "n": args.gen_random, "seed": args.seed,
                "generator": GENERATOR_NAME, "generator_version": GENERATOR_VERSION}
    return {"kind": "tightness", "n": args.n, "generator_version": GENERATOR_VERSION}


def _load(source, tol_ortho=None):
    kind = source["kind"]
    if kind == "file":
        return validate_frame(read_frame(source["path"]), tol_ortho=tol_ortho)
    if kind == "random":
        return random_frame(source["n"], source["seed"])
    if kind == "tightness":
        return tightness_frame(source["n"])
    raise UsageError("unknown source kind %r" % (kind,))


def _header(mode, frame, source):
    doc = {"schema_version": SCHEMA_VERSION, "mode": mode, "n": frame.n, "source": source}
    doc["seed"] = source.get("seed")
    return doc


def _tolerances(args):
    tol = getattr(args, "tol_ortho", None)
    out = {"tol_ortho": tol, "bound_slack": 1e-10, "case_b_margin": CASE_B_MARGIN_TOL}
    out["overrides"] = {} if tol is None else {"tol_ortho": tol}
    return out


def _finish(doc, args):
    if getattr(args, "timestamps", False):
        doc["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = write_report(doc)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

def cmd_select(args):
    source = _source_spec(args)
    frame = _load(source, args.tol_ortho)
    doc = _header("select", frame, source)
    try:
        sel = select_pair(frame, tol_ortho=args.tol_ortho)
    except CertificationError as exc:
        print("certification failed: %s" % exc, file=sys.stderr)
        if exc.audit is not None:
            for line in exc.audit.lines():
                print("  " + line, file=sys.stderr)
        return 1
    ok = verify_selection(frame, sel)
    cert = sel.certificate
    doc.update({
        "pair": sel.pair.as_list(),
        "sigma2": sel.sigma2,
        "bound": cert.bound,
        "margin": cert.margin,
        "terminal": cert.terminal,
        "verified": ok,
        "n_steps": len(cert.steps),
        "certificate": certificate_to_list(cert) if args.cert else None,
        "audit": audit_invariants(frame).to_dict(),
        "tolerances": _tolerances(args),
    })
    _finish(doc, args)
    return 0 if ok else 1


def _oracle_fields(table):
    maxis = table.maximizers(ORACLE_SLACK)
    return {
        "max_sigma2": table.max_sigma2,
        "argmax": table.argmax.as_list(),
        "pairs": table.size,
        "n_maximizers": len(maxis),
        "maximizers": [p.as_list() for p in maxis[:MAX_LISTED_MAXIMIZERS]],
        "quantiles": table.quantiles(),
    }


def cmd_oracle(args):
    source = _source_spec(args)
    frame = _load(source, args.tol_ortho)
    table = best_pair_bruteforce(frame, cap=args.oracle_cap)
    bound = 1.0 / math.sqrt(frame.n)
    ok = table.max_sigma2 >= bound - ORACLE_SLACK
    doc = _header("oracle", frame, source)
    doc["bound"] = bound
    doc.update(_oracle_fields(table))
    doc["attained"] = ok
    doc["tolerances"] = _tolerances(args)
    _finish(doc, args)
    return 0 if ok else 1


def cmd_audit(args):
    source = _source_spec(args)
    frame = _load(source, args.tol_ortho)
    rep = audit_invariants(frame)
    doc = _header("audit", frame, source)
    ok = rep.passed
    premise = case_b_premise(frame)
    case_b = {"premise": premise}
    if premise:
        margin, i, j = min_offdiag_margin(frame)
        exists = margin <= CASE_B_MARGIN_TOL
        case_b.update({"min_margin": margin, "pair": [i, j], "exists": exists})
        ok = ok and exists
    doc["audit"] = rep.to_dict()
    doc["case_b"] = case_b
    doc["passed"] = ok
    doc["tolerances"] = _tolerances(args)
    _finish(doc, args)
    return 0 if ok else 1


def cmd_tightness(args):
    p = tightness_params(args.n)
    frame = tightness_frame(p.n)
    table = best_pair_bruteforce(frame, cap=args.oracle_cap)
    bound = 1.0 / math.sqrt(p.n)
    xs, y, z = tightness_roles(p.n)
    err = abs(table.max_sigma2 - bound)
    expected = [(xs[0], y), (xs[0], z), (y, z)]
    thr = table.max_sigma2 - TIGHTNESS_TOL
    present = all(table.value(i, j) >= thr for i, j in expected)
    ok = err <= TIGHTNESS_TOL and present
    source = {"kind": "tightness", "n": p.n, "generator_version": GENERATOR_VERSION}
    doc = _header("tightness", frame, source)
    doc.update({
        "params": {"a": p.a, "b": p.b, "c": p.c},
        "bound": bound,
        "abs_error": err,
        "expected_pairs_attain": present,
    })
    doc.update(_oracle_fields(table))
    doc["attained"] = ok
    _finish(doc, args)
    return 0 if ok else 1


def cmd_gen(args):
    source = _source_spec(args)
    if source["kind"] == "file":
        raise UsageError("gen takes --gen-random N or --n N, not --input")
    frame = _load(source)
    if source["kind"] == "random":
        header = "twoframe random n=%d seed=%d generator=%s version=%s" % (
            frame.n, source["seed"], GENERATOR_NAME, GENERATOR_VERSION)
    else:
        header = "twoframe tightness n=%d version=%s" % (frame.n, GENERATOR_VERSION)
    text = write_frame(frame, header=header)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args):
    prior = read_report(args.report)
    if args.input is not None:
        source = {"kind": "file", "path": str(args.input)}
    else:
        source = prior.get("source")
        if not source:
            raise UsageError("report has no source; pass --input")
    frame = _load(source, args.tol_ortho)
    mode = prior.get("mode")
    problems = []
    if prior.get("n") != frame.n:
        problems.append("report n=%r, frame n=%d" % (prior.get("n"), frame.n))
    elif mode == "select":
        sel = Selection(RowPair(*prior["pair"]), float(prior["sigma2"]), None)
        if not verify_selection(frame, sel):
            problems.append("claimed pair does not meet the bound or sigma2 mismatch")
        if prior.get("certificate") is not None:
            problems += certificate_problems(frame, certificate_from_document(prior), args.tol_ortho)
    elif mode in ("oracle", "tightness"):
        table = best_pair_bruteforce(frame, cap=args.oracle_cap)
        if table.max_sigma2 != prior["max_sigma2"]:
            problems.append("max_sigma2 %r, recomputed %r" % (prior["max_sigma2"], table.max_sigma2))
        if table.argmax.as_list() != prior["argmax"]:
            problems.append("argmax %r, recomputed %r" % (prior["argmax"], table.argmax.as_list()))
    else:
        raise UsageError("cannot verify a report of mode %r" % (mode,))
    doc = {"schema_version": SCHEMA_VERSION, "mode": "verify", "checked_mode": mode,
           "n": frame.n, "source": source, "consistent": not problems, "problems": problems}
    _finish(doc, args)
    return 0 if not problems else 1


def cmd_bench(args):
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rows = []
    for n in sizes:
        frame = random_frame(n, args.seed)
        t0 = time.perf_counter()
        sel = select_pair(frame)
        t_select = time.perf_counter() - t0
        row = {"n": n, "seed": args.seed, "select_s": t_select, "sigma2": sel.sigma2,
               "terminal": sel.terminal, "n_steps": len(sel.certificate.steps)}
        if n <= args.oracle_cap:
            t0 = time.perf_counter()
            table = best_pair_bruteforce(frame, cap=args.oracle_cap)
            row["oracle_s"] = time.perf_counter() - t0
            row["max_sigma2"] = table.max_sigma2
            row["dominated"] = sel.sigma2 <= table.max_sigma2 + ORACLE_SLACK
        else:
            row.update({"oracle_s": None, "max_sigma2": None, "dominated": None})
        rows.append(row)
        print("n=%-7d select %.4fs  oracle %s" % (
            n, t_select, "-" if row["oracle_s"] is None else "%.4fs" % row["oracle_s"]),
            file=sys.stderr)
    doc = {"schema_version": SCHEMA_VERSION, "mode": "bench",
           "generator": GENERATOR_NAME, "generator_version": GENERATOR_VERSION, "rows": rows}
    _finish(doc, args)
    ok = all(r["dominated"] is not False for r in rows)
    return 0 if ok else 1


# ---------------------------------------------------------------- parser

def _add_input(p, seed=True):
    p.add_argument("--input", metavar="PATH", help="frame file to read")
    p.add_argument("--gen-random", dest="gen_random", type=int, metavar="N",
                   help="generate a random N x 2 frame")
    p.add_argument("--n", type=int, metavar="N", help="use the extremal frame with N rows")
    if seed:
        p.add_argument("--seed", type=int, default=0, metavar="S", help="seed for --gen-random")


def _add_common(p):
    p.add_argument("--tol-ortho", dest="tol_ortho", type=float, metavar="X",
                   help="orthonormality tolerance (default 1e-10*sqrt(n))")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--timestamps", action="store_true", help="add a generated_at field")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="twoframe",
        description="Certified 2x2 row selection for n x 2 orthonormal frames.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("select", help="select a certified row pair")
    _add_input(p)
    _add_common(p)
    p.add_argument("--cert", action="store_true", help="include the full reduction trace")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("oracle", help="exhaustive pair evaluation")
    _add_input(p)
    _add_common(p)
    p.add_argument("--oracle-cap", dest="oracle_cap", type=int, default=DEFAULT_CAP, metavar="N")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("audit", help="check the proof identities on a frame")
    _add_input(p)
    _add_common(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("tightness", help="confirm the bound is attained on the extremal frame")
    p.add_argument("--n", type=int, required=True, metavar="N")
    p.add_argument("--oracle-cap", dest="oracle_cap", type=int, default=DEFAULT_CAP, metavar="N")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--timestamps", action="store_true")
    p.set_defaults(func=cmd_tightness)

    p = sub.add_parser("gen", help="write a frame file")
    p.add_argument("--gen-random", dest="gen_random", type=int, metavar="N")
    p.add_argument("--n", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_gen, input=None)

    p = sub.add_parser("verify", help="recheck a prior report against its frame")
    p.add_argument("--report", required=True, metavar="PATH")
    p.add_argument("--input", metavar="PATH", help="frame file (default: the report's source)")
    _add_common(p)
    p.add_argument("--oracle-cap", dest="oracle_cap", type=int, default=DEFAULT_CAP, metavar="N")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time select against the oracle")
    p.add_argument("--sizes", default="100,200,400,800,1600", metavar="N,N,...")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--oracle-cap", dest="oracle_cap", type=int, default=DEFAULT_CAP, metavar="N")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--timestamps", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except NotOrthonormalError as exc:
        print("validation failed: %s" % exc, file=sys.stderr)
        return 1
    except (TwoFrameError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
