"""Command-line front end.

Subcommands:

  expand      print a truncated sum-side series or a reciprocal product
  enumerate   exhaustive cylindric-partition table with product cross-check
  verify      run a sum-product identity suite
  prove       run a proof campaign, or prove one profile
  check-cert  re-verify a stored certificate file
  report      summarize a campaign report JSON

Everything is configured through flags; outputs are deterministic for
identical inputs except for the wall-time fields in campaign output.
Exit status is 0 exactly when every requested check passed.
"""

import argparse
import json
import os
import re
import sys
import time

from .cylindric import (all_profiles, borodin_product, cyclic_normalize,
                        enumerate_oracle, oracle_series, oracle_to_json)
from .exactalg import Poly, TruncSeries
from .pipeline import (campaign_ok, certificate_filename, claim_table,
                       prove_modulus, prove_profile, suite, SUITE_NAMES,
                       translate, verify_sum_product, write_report)
from .prover import parse_certificate, verify_certificate
from .qseries import inv_euler, theta
from .ssums import eval_s, sindex

# exhaustive enumeration is exponential in the total; beyond this the
# dedicated series evaluators are the right tool
MAX_ORACLE_TOTAL = 25


class UsageError(Exception):
    pass


def _vector(text, what="vector"):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"malformed {what} {text!r}; expected "
                         "comma-separated integers") from None


def _render_series(s: TruncSeries) -> list[str]:
    lines = [f"order: {s.order}" + ("" if s.zcap is None
                                    else f"  zmax: {s.zcap}")]
    qmin = min([a for (a, _) in s.terms] + [0])
    shown = 0
    for qe in range(qmin, s.order + 1):
        sl = s.q_slice(qe)
        if not sl:
            continue
        zpoly = Poly({(0, ze): c for ze, c in sl.items()})
        lines.append(f"q^{qe}: {zpoly.render()}")
        shown += 1
    if not shown:
        lines.append("0")
    return lines


def _series_json(s: TruncSeries) -> dict:
    return {"order": s.order, "low": s.low, "zmax": s.zcap,
            "terms": [[a, b, c] for (a, b), c in sorted(s.terms.items())]}


_SUM_RE = re.compile(r"^S(\d+)$")
_THETA_RE = re.compile(r"^theta:([-\d,]+)@(\d+)$")


def _parse_product_spec(spec):
    """Product specs multiply reciprocal factors: 'theta:a,b,...@m' for a
    reciprocal theta product, 'euler' for the reciprocal Euler product,
    factors separated by ';'."""
    factors = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        if part == "euler":
            factors.append(("euler", None, None))
            continue
        m = _THETA_RE.match(part)
        if not m:
            raise UsageError(f"bad product factor {part!r}; expected "
                             "'theta:<residues>@<base>' or 'euler'")
        residues = _vector(m.group(1), "theta residues")
        factors.append(("theta", residues, int(m.group(2))))
    if not factors:
        raise UsageError("empty product spec")
    return factors


def cmd_expand(args):
    if (args.sum is None) == (args.product is None):
        raise UsageError("expand needs exactly one of --sum or --product")
    if args.order < 0:
        raise UsageError("--order must be nonnegative")
    if args.sum is not None:
        m = _SUM_RE.match(args.sum)
        if not m:
            raise UsageError(f"bad sum name {args.sum!r}; expected S<modulus>")
        modulus = int(m.group(1))
        if args.rho is None or args.sigma is None:
            raise UsageError("--sum needs --rho and --sigma")
        try:
            idx = sindex(modulus, _vector(args.rho, "--rho"),
                         _vector(args.sigma, "--sigma"))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        series = eval_s(idx, args.order, zcap=args.zmax)
    else:
        series = TruncSeries.from_poly(Poly.one(), args.order)
        for kind, residues, base in _parse_product_spec(args.product):
            if kind == "euler":
                series = series * inv_euler(args.order)
            else:
                series = series * theta(residues, base, args.order).invert()
    if args.json:
        print(json.dumps(_series_json(series)))
    else:
        for line in _render_series(series):
            print(line)
    return 0


def cmd_enumerate(args):
    profile = _vector(args.profile, "--profile")
    if args.max_total < 0:
        raise UsageError("--max-total must be nonnegative")
    if args.max_total > MAX_ORACLE_TOTAL:
        raise UsageError(
            f"--max-total {args.max_total} exceeds the exhaustive bound "
            f"{MAX_ORACLE_TOTAL}; use the series evaluators beyond that")
    table = enumerate_oracle(profile, args.max_total)
    out = oracle_to_json(profile, args.max_total, table)
    got = oracle_series(table, args.max_total).collapse_z()
    want = borodin_product(profile, args.max_total).collapse_z()
    out["borodin_check"] = ("ok" if got.agree(want, through=args.max_total)
                            else "MISMATCH")
    print(json.dumps(out, indent=1))
    return 0 if out["borodin_check"] == "ok" else 1


def cmd_verify(args):
    targets = suite(args.suite)
    failures = 0
    for t in targets:
        order = args.order if args.order is not None else t.order
        ok = verify_sum_product(t, order=order)
        note = ""
        if not ok and t.conjectural:
            note = "  (conjectural, not counted as fatal)"
        elif t.conjectural:
            note = "  (conjectural)"
        print(f"{'pass' if ok else 'FAIL'}  {t.ident}  order={order}{note}")
        if not ok and not t.conjectural:
            failures += 1
    print(f"{len(targets) - failures} of {len(targets)} passed")
    return 0 if failures == 0 else 1


def _progress(row):
    c = tuple(row["profile"])
    extra = ""
    if row["status"] == "proved":
        extra = f"  max_index={row['max_index_magnitude']}"
    print(f"{c}  {row['status']:<8}{extra}  [{row['wall_time']:.1f}s]",
          flush=True)


def cmd_prove(args):
    if args.profile is not None:
        c = cyclic_normalize(_vector(args.profile, "--profile"))
        res = prove_profile(args.modulus, args.cap, c)
        print(f"{c}  {res['status']}  "
              f"max_index={res['max_index_magnitude']}")
        if res["status"] == "proved":
            if args.output_dir:
                os.makedirs(args.output_dir, exist_ok=True)
                path = os.path.join(
                    args.output_dir,
                    certificate_filename(args.modulus, c))
                with open(path, "w") as fh:
                    fh.write(res["cert_text"])
                print(f"certificate written to {path}")
            else:
                print(res["cert_text"], end="")
        return 0 if res["status"] in ("trivial", "proved") else 1
    report = prove_modulus(args.modulus, args.cap,
                           output_dir=args.output_dir,
                           threads=args.threads, progress=_progress)
    if args.output_dir:
        path = write_report(report, args.output_dir)
        print(f"report written to {path}")
    counts = {}
    for row in report["profiles"]:
        counts[row["status"]] = counts.get(row["status"], 0) + 1
    print("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    if not campaign_ok(report):
        bad = [tuple(r["profile"]) for r in report["profiles"]
               if r["status"] == "failed"]
        print(f"campaign FAILED on profiles: {bad}")
        return 1
    return 0


def cmd_check_cert(args):
    profile = cyclic_normalize(_vector(args.profile, "--profile"))
    try:
        with open(args.file) as fh:
            cert = parse_certificate(fh.read())
    except OSError as exc:
        print(f"fail: cannot read {args.file}: {exc}")
        return 1
    except ValueError as exc:
        print(f"fail: {args.file}: {exc}")
        return 1
    if cert.modulus != args.modulus:
        print(f"fail: certificate is for modulus {cert.modulus}, "
              f"not {args.modulus}")
        return 1
    h = translate(profile, claim_table(args.modulus))
    if h.is_zero():
        print(f"fail: profile {profile} trivializes; nothing to certify")
        return 1
    t0 = time.perf_counter()
    try:
        ok = verify_certificate(cert, h)
    except ValueError as exc:
        print(f"fail: {exc}")
        return 1
    dt = time.perf_counter() - t0
    if ok:
        print(f"pass: {args.file} proves profile {profile} mod "
              f"{args.modulus} ({len(cert.entries)} entries, {dt:.1f}s)")
        return 0
    print(f"fail: {args.file} does not reduce the recurrence of {profile}")
    return 1


def cmd_report(args):
    if args.file:
        path = args.file
    elif args.output_dir and args.modulus:
        path = os.path.join(args.output_dir, f"m{args.modulus}_report.json")
    else:
        raise UsageError("report needs --file, or --output-dir with "
                         "--modulus")
    with open(path) as fh:
        rep = json.load(fh)
    print(f"modulus {rep['modulus']}: {len(rep['profiles'])} profiles")
    counts = {}
    for row in rep["profiles"]:
        counts[row["status"]] = counts.get(row["status"], 0) + 1
        cert = row["certificate_file"] or "-"
        print(f"  {tuple(row['profile'])}  {row['status']:<8}"
              f" max_index={row['max_index_magnitude']}  {cert}")
    print("counts: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return 0 if campaign_ok(rep) else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cylq",
        description="exact q-series identities: expansion, enumeration, "
                    "verification, and certified proofs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="print a truncated series")
    p.add_argument("--sum", help="sum-side family, e.g. S11")
    p.add_argument("--rho", help="comma-separated index vector")
    p.add_argument("--sigma", help="comma-separated index vector")
    p.add_argument("--product",
                   help="reciprocal product spec, e.g. "
                        "'theta:2,3,3,4,4,5,5@11;euler'")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--zmax", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("enumerate", help="exhaustive partition table")
    p.add_argument("--profile", required=True)
    p.add_argument("--max-total", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p.add_argument("--order", type=int, default=None,
                   help="override every target's stored order")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("prove", help="run a proof campaign")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--cap", type=int, required=True,
                   help="index magnitude bound for relation instances")
    p.add_argument("--profile", help="prove a single profile")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check-cert", help="re-verify a certificate file")
    p.add_argument("--file", required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--profile", required=True)
    p.set_defaults(func=cmd_check_cert)

    p = sub.add_parser("report", help="summarize a campaign report")
    p.add_argument("--file")
    p.add_argument("--output-dir")
    p.add_argument("--modulus", type=int)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        ap.exit(2, f"error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
