"""Batch front door: seed, verify, deform, scan, and the character-side
utilities, with reproducible file outputs.

Exit codes separate the failure classes a caller scripts against:

  0  all requested verdicts pass
  1  a verdict failed, or a domain/validation error
  2  congruence bound refused (including hypothesis (*) refusals)
  3  working precision insufficient
  4  seed solve hit a singular system
  5  file I/O or malformed input data

Every numeric flag accepts an exact rational (``--m 1/2``); nothing on this
surface is floating point.  The deformation commands check the valuation
bound on exact rational lifts BEFORE any seeding work, so a hopeless request
is refused in microseconds with exit 2.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .deform import (
    alpha,
    converse_bound,
    default_chi,
    deform_trace,
    precision_default,
    precision_floor,
)
from .errors import (
    BoundViolated,
    MalformedFile,
    PreconditionFails,
    PrecisionExhausted,
    SeedSingular,
    VersionMismatch,
    WachdeformError,
)
from .padics import PadicElt, PadicParams, ScaledElt
from .trianguline import hypothesis_star, psi_eval, weight_step
from .wach import check_axioms, default_nx, load_wach, save_wach, seed_companion

__all__ = ["build_parser", "main"]


# --------------------------------------------------------------------------- #
# flag plumbing
# --------------------------------------------------------------------------- #

def _rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}")


def _vp_rational(q: Fraction, p: int) -> Fraction | None:
    """Exact p-valuation of a rational; None for zero."""
    if q == 0:
        return None
    v, n, d = 0, q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return Fraction(v)


def _elt_from_rational(params: PadicParams, q: Fraction) -> PadicElt:
    return ScaledElt.from_rational(params, q).to_padic()


def _resolve_precisions(args, k: int, m: Fraction, alpha_k1: int) -> tuple[int, int]:
    """prec_pi and nx: budget-formula defaults, overrides refused below floor."""
    p, e = args.p, args.e
    nx = args.prec_x if args.prec_x else max(2 * k, 32, (p - 1) * (k - 1) + 2)
    floor = precision_floor(e, k, m, alpha_k1)
    if args.prec_pi:
        if args.prec_pi < floor:
            raise PrecisionExhausted(
                f"--prec-pi {args.prec_pi} is below the certified floor {floor}"
            )
        return args.prec_pi, nx
    return precision_default(p, e, k, m, alpha_k1, nx), nx


def _write_json(path: str, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


# --------------------------------------------------------------------------- #
# subcommands
# --------------------------------------------------------------------------- #

def cmd_seed(args) -> int:
    chi = args.chi_gamma or default_chi(args.p)
    table = alpha(args.p, max(args.k - 1, 1), chi)
    prec_pi, nx = _resolve_precisions(args, args.k, Fraction(1), table.value(args.k - 1))
    params = PadicParams(args.p, args.e, prec_pi)
    w = seed_companion(params, args.k, _elt_from_rational(params, args.ap), chi, nx)
    report = check_axioms(w)
    print(
        f"seeded p={args.p} k={args.k} a_p={args.ap} chi={chi} "
        f"prec pi^{prec_pi} x^{nx}; defect valuation >= {report.commutation_defect_val}"
    )
    if args.out:
        save_wach(w, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    w = load_wach(args.infile)
    report = check_axioms(w)
    for name in ("commutation_ok", "det_unit_ok", "gamma_trivial_ok", "charpoly_ok"):
        print(f"{name}: {'pass' if getattr(report, name) else 'FAIL'}")
    print(f"defect valuation {report.commutation_defect_val} at cap "
          f"{report.commutation_defect_cap}")
    return 0 if report.ok else 1


def cmd_deform(args) -> int:
    p, e, k = args.p, args.e, args.k
    chi = args.chi_gamma or default_chi(p)
    m = args.m
    table = alpha(p, k - 1, chi)
    ak1 = table.value(k - 1)

    # bound check on exact rationals BEFORE any seeding work
    v_ap = _vp_rational(args.ap, p)
    eps = args.ap_new - args.ap
    v_eps = _vp_rational(eps, p)
    if v_ap is None:
        if v_eps is not None:
            raise BoundViolated("a_p = 0 admits only the identity deformation")
    else:
        bound = 2 * v_ap + ak1 + m
        if v_eps is not None and v_eps < bound:
            raise BoundViolated(
                f"v(a_p - a'_p) = {v_eps} < 2 v(a_p) + alpha(k-1) + m = {bound}"
            )

    prec_pi, nx = _resolve_precisions(args, k, m, ak1)
    params = PadicParams(p, e, prec_pi)
    w = seed_companion(params, k, _elt_from_rational(params, args.ap), chi, nx)
    wp, cert = deform_trace(w, _elt_from_rational(params, args.ap_new), m)
    print(f"bound: v(eps) = {cert.bound_observed} >= {cert.bound_required}")
    print(f"verdicts: P'={'pass' if cert.p_congruent else 'FAIL'} "
          f"G'={'pass' if cert.g_congruent else 'FAIL'} "
          f"charpoly={'pass' if cert.charpoly_ok else 'FAIL'} "
          f"axioms={'pass' if cert.axioms_ok else 'FAIL'}")
    if args.out:
        _write_json(args.out, {"kind": "deform-report", "certificate": cert.as_obj()})
        print(f"wrote {args.out}")
    return 0 if cert.ok else 1


def cmd_alpha(args) -> int:
    chi = args.chi_gamma or default_chi(args.p)
    print(alpha(args.p, args.r, chi).value(args.r))
    return 0


def cmd_psi(args) -> int:
    params = PadicParams(args.p, args.e, args.prec_pi or 24)
    value = psi_eval(_elt_from_rational(params, args.alpha), args.s)
    print(f"{value.lift_int()} (mod {args.p}^{value.cap // args.e})")
    return 0


def cmd_star(args) -> int:
    print(hypothesis_star(args.p, args.vap, args.m))
    return 0


def cmd_weightstep(args) -> int:
    w = load_wach(args.infile)
    wp, cert = weight_step(w, args.m)
    print(f"weight step: a_p {cert.a_p_lift} -> {cert.ap_new_lift}, "
          f"bound {cert.bound_observed} >= {cert.bound_required}")
    if args.out:
        _write_json(args.out, {"kind": "weightstep-report", "certificate": cert.as_obj()})
        print(f"wrote {args.out}")
    return 0 if cert.ok else 1


# --- scan -------------------------------------------------------------------

def _scan_point(payload: tuple) -> tuple[int, list[str]]:
    """One grid point, built from primitives so worker processes can unpickle."""
    (index, p, e, k, ap_str, m_str, chi, prec_pi, nx, seed) = payload
    ap = Fraction(ap_str)
    m = Fraction(m_str)
    table = alpha(p, max(k - 1, 1), chi)
    ak1 = table.value(k - 1)

    v_ap = _vp_rational(ap, p)
    if v_ap is None:
        ap_new = ap                          # only the identity deformation exists
        bound_ok = True
    else:
        bound = 2 * v_ap + ak1 + m
        t = math.ceil(bound)
        u = random.Random(f"{seed}:{k}:{ap}").randrange(1, p)
        ap_new = ap + u * Fraction(p) ** t
        bound_ok = _vp_rational(ap_new - ap, p) >= bound

    try:
        threshold = str(converse_bound(k, m, table))
    except PreconditionFails:
        threshold = ""

    cert_pass = False
    min_defect = ""
    try:
        params = PadicParams(p, e, prec_pi)
        w = seed_companion(params, k, _elt_from_rational(params, ap), chi, nx)
        _, cert = deform_trace(w, _elt_from_rational(params, ap_new), m)
        cert_pass = cert.ok
        if cert.iteration_log:
            min_defect = str(min(v for _, v in cert.iteration_log))
    except WachdeformError:
        pass
    row = [
        str(k), str(ap), str(ap_new), str(m),
        "true" if bound_ok else "false",
        "true" if cert_pass else "false",
        min_defect, threshold,
    ]
    return index, row


def cmd_scan(args) -> int:
    p, e, m = args.p, args.e, args.m
    chi = args.chi_gamma or default_chi(p)
    lo, sep, hi = args.k_range.partition(":")
    k_lo, k_hi = int(lo), int(hi if sep else lo)
    ap_list = [Fraction(s) for s in args.ap_list.split(",") if s.strip()]
    if not ap_list or k_lo < 2 or k_hi < k_lo:
        raise MalformedFile("scan needs --k-range A:B with A >= 2 and a nonempty --ap-list")

    grid = [(k, ap) for k in range(k_lo, k_hi + 1) for ap in ap_list]
    payloads = []
    for index, (k, ap) in enumerate(grid):
        table = alpha(p, max(k - 1, 1), chi)
        ak1 = table.value(k - 1)
        nx = args.prec_x if args.prec_x else max(2 * k, 32, (p - 1) * (k - 1) + 2)
        prec_pi = args.prec_pi if args.prec_pi else precision_default(p, e, k, m, ak1, nx)
        floor = precision_floor(e, k, m, ak1)
        if prec_pi < floor:
            raise PrecisionExhausted(
                f"--prec-pi {prec_pi} below floor {floor} for k={k}"
            )
        payloads.append((index, p, e, k, str(ap), str(m), chi, prec_pi, nx, args.seed))

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    plan = {
        "p": p, "e": e, "k_range": [k_lo, k_hi],
        "ap_list": [str(a) for a in ap_list], "m": str(m),
        "chi_gamma": chi, "prec_pi": args.prec_pi, "prec_x": args.prec_x,
        "seed": args.seed, "jobs": args.jobs,
    }
    _write_json(outdir / "plan.json", plan)

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_scan_point, payloads))
    else:
        results = [_scan_point(pl) for pl in payloads]
    results.sort(key=lambda t: t[0])

    csv_path = outdir / "results.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "a_p", "ap_new", "m", "bound_ok", "cert_pass",
                         "min_defect_val", "converse_threshold"])
        for _, row in results:
            writer.writerow(row)
    all_pass = all(row[5] == "true" for _, row in results)
    print(f"scan: {len(results)} grid points -> {csv_path} "
          f"({'all pass' if all_pass else 'failures present'})")
    return 0 if all_pass else 1


# --------------------------------------------------------------------------- #
# parser and entry point
# --------------------------------------------------------------------------- #

def _add_ring_flags(sp, with_k: bool = True) -> None:
    sp.add_argument("--p", type=int, required=True, help="residue characteristic")
    sp.add_argument("--e", type=int, default=1, help="ramification index (default 1)")
    if with_k:
        sp.add_argument("--k", type=int, required=True, help="weight, k >= 2")
    sp.add_argument("--chi-gamma", type=int, default=0,
                    help="generator chi(gamma); default: smallest primitive root mod p^2")
    sp.add_argument("--prec-pi", type=int, default=0,
                    help="pi-adic cap; default from the budget formula")
    sp.add_argument("--prec-x", type=int, default=0,
                    help="x-adic truncation; default max(2k, 32, (p-1)(k-1)+2)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wachdeform",
        description="Wach-module seeding, verification, and congruence certificates",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("seed", help="construct companion-form module data")
    _add_ring_flags(sp)
    sp.add_argument("--ap", type=_rat, required=True, help="trace a_p (exact rational)")
    sp.add_argument("--out", default="", help="write module JSON here")
    sp.set_defaults(fn=cmd_seed)

    sp = sub.add_parser("verify", help="re-check the axioms of a stored module")
    sp.add_argument("--in", dest="infile", required=True)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("deform", help="deform the trace and certify congruence")
    _add_ring_flags(sp)
    sp.add_argument("--ap", type=_rat, required=True)
    sp.add_argument("--ap-new", type=_rat, required=True)
    sp.add_argument("--m", type=_rat, required=True, help="congruence level in (1/e)Z")
    sp.add_argument("--out", default="", help="write certificate JSON here")
    sp.set_defaults(fn=cmd_deform)

    sp = sub.add_parser("alpha", help="print alpha(r)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--chi-gamma", type=int, default=0)
    sp.set_defaults(fn=cmd_alpha)

    sp = sub.add_parser("psi", help="evaluate alpha^s by both series routes")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--prec-pi", type=int, default=0)
    sp.add_argument("--alpha", type=_rat, required=True)
    sp.add_argument("--s", type=_rat, required=True)
    sp.set_defaults(fn=cmd_psi)

    sp = sub.add_parser("star", help="minimal weight satisfying hypothesis (*)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--vap", type=_rat, required=True, help="v(a_p)")
    sp.add_argument("--m", type=_rat, required=True)
    sp.set_defaults(fn=cmd_star)

    sp = sub.add_parser("weightstep", help="deform a_p by p^(k-1)/a_p under (*)")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--m", type=_rat, required=True)
    sp.add_argument("--out", default="")
    sp.set_defaults(fn=cmd_weightstep)

    sp = sub.add_parser("scan", help="grid of deformation runs, CSV summary")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--k-range", required=True, help="A:B inclusive")
    sp.add_argument("--ap-list", required=True, help="comma-separated rationals")
    sp.add_argument("--m", type=_rat, required=True)
    sp.add_argument("--chi-gamma", type=int, default=0)
    sp.add_argument("--prec-pi", type=int, default=0)
    sp.add_argument("--prec-x", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(fn=cmd_scan)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (BoundViolated, PreconditionFails) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except PrecisionExhausted as exc:
        print(f"precision: {exc}", file=sys.stderr)
        return 3
    except SeedSingular as exc:
        print(f"seed: {exc}", file=sys.stderr)
        return 4
    except (MalformedFile, VersionMismatch) as exc:
        print(f"input: {exc}", file=sys.stderr)
        return 5
    except OSError as exc:
        print(f"io: {exc}", file=sys.stderr)
        return 5
    except WachdeformError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
