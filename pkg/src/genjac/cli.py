"""Command-line front end: ``genjac <command> ...``.

Curve specs are plain ``key = value`` lines::

    q = 3
    curve = genus0
    modulus = x^3
    basepoint = inf

Every command prints one JSON document.  Exit codes: 0 ok, 1 a check or
verdict failed, 2 bad usage or input, 3 budget exceeded.
"""

import argparse
import json
import sys

from . import genus0, lfunctions
from .algebra import format_coeff, format_poly
from .errors import (
    BudgetExceeded, GenJacError, HypothesisViolated, InvalidInput, NoTwistFound, ParseError,
)
from .genus0 import format_class, genus0_spec, split_prime_power

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
KEYS = ("q", "curve", "modulus", "basepoint", "a", "b", "modulus_points")


# ---------------------------------------------------------------------------
# spec files

def parse_spec(text):
    """Parse ``key = value`` lines into a validated :class:`CurveSpec`."""
    values, where = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno)
        values[key], where[key] = value, lineno
    if "q" not in values:
        raise ParseError("missing key 'q'")
    try:
        q = int(values["q"])
        split_prime_power(q)
    except (ValueError, InvalidInput):
        raise ParseError(f"q must be a prime power, got {values['q']!r}", where["q"]) from None
    curve = values.get("curve", "genus0")
    if curve == "genus0":
        if values.get("basepoint", "inf") != "inf":
            raise ParseError("only basepoint = inf is supported", where["basepoint"])
        if "modulus" not in values:
            raise ParseError("missing key 'modulus'")
        try:
            return genus0_spec(q, values["modulus"])
        except HypothesisViolated:
            raise
        except (InvalidInput, ValueError) as exc:
            raise ParseError(f"bad modulus: {exc}", where["modulus"]) from None
    if curve == "elliptic":
        for key in ("a", "b", "modulus_points"):
            if key not in values:
                raise ParseError(f"missing key {key!r}")
        try:
            pts = tuple(tuple(int(c) for c in chunk.strip().strip("()").split(","))
                        for chunk in values["modulus_points"].split(";"))
            a, b = int(values["a"]), int(values["b"])
        except ValueError:
            raise ParseError("bad elliptic coefficients or points", where["modulus_points"]) from None
        from .elliptic import elliptic_spec
        return elliptic_spec(q, a, b, pts)
    raise ParseError(f"unknown curve {curve!r}", where.get("curve"))


def emit_spec(spec):
    lines = [f"q = {spec.q}", f"curve = {spec.kind}"]
    if spec.kind == "genus0":
        lines += [f"modulus = {format_poly(spec.field, spec.modulus)}", "basepoint = inf"]
    else:
        pts = ";".join(f"({x},{y})" for x, y in spec.modulus_points)
        lines += [f"a = {spec.a}", f"b = {spec.b}", f"modulus_points = {pts}"]
    return "\n".join(lines) + "\n"


def read_spec(path):
    with open(path) as fh:
        return parse_spec(fh.read())


# ---------------------------------------------------------------------------
# commands

def _point_text(F, a):
    return "inf" if a == genus0.INF else format_coeff(F, a)


def cmd_group(args, spec):
    rows = []
    for r in range(1, args.levels + 1):
        if spec.kind == "genus0":
            L = genus0.level(spec, r)
            st = L.structure
            rows.append({
                "r": r, "order": st.order, "order_formula": genus0.order_formula(spec, r),
                "factors": list(st.factors),
                "generators": [format_class(g.rep, r, L.F) for g in st.generators],
            })
        else:
            from .elliptic import ray_level
            st = ray_level(spec, r).structure
            rows.append({"r": r, "order": st.order, "factors": list(st.factors)})
    ok = all(row.get("order_formula", row["order"]) == row["order"] for row in rows)
    return {"spec": spec.tag(), "levels": rows}, ok


def cmd_points(args, spec):
    rows = []
    for r in range(1, args.levels + 1):
        if spec.kind == "genus0":
            L = genus0.level(spec, r)
            pts = [{"point": _point_text(L.F, a), "class": format_class(L.rep(code), r, L.F)}
                   for a, code in L.points]
            distinct = len({code for _, code in L.points}) == len(L.points)
        else:
            from .elliptic import ray_points
            pts, distinct = ray_points(spec, r)
        rows.append({"r": r, "points": pts, "injective": distinct})
    return {"spec": spec.tag(), "levels": rows}, all(row["injective"] for row in rows)


def cmd_lfun(args, spec):
    B = args.series_bound or lfunctions.default_bound(spec)
    rows, ok = [], True
    for r in range(1, args.levels + 1):
        euler = lfunctions.lfun_euler_all(spec, r, B)
        divsum = lfunctions.lfun_divisor_sum_all(spec, r, B)
        agree = all(a == b for a, b in zip(euler, divsum))
        ok &= agree
        series = []
        for e, d in zip(euler, divsum):
            entry = e.to_json()
            if spec.kind == "genus0" and not e.chi.is_trivial and B >= spec.degree:
                poly = lfunctions.polynomial_part(d, spec)
                mags = lfunctions.weil_magnitudes(poly)
                entry["weil_magnitudes"] = [round(m, 9) for m in mags]
                entry["weil_ok"] = lfunctions.weil_ok(mags, poly.q_level)
                ok &= entry["weil_ok"]
            series.append(entry)
        rows.append({"r": r, "B": B, "euler==divisor_sum": agree, "series": series})
    return {"spec": spec.tag(), "levels": rows}, ok


def _load_bundle(path):
    from .reconstruction import bundle_from_json
    with open(path) as fh:
        try:
            return bundle_from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bundle is not valid JSON: {exc}") from None


def cmd_detect(args):
    from .reconstruction import detect_points, invert_counts
    bundle = _load_bundle(args.bundle)
    spec = bundle.spec
    rows, ok = [], True
    for r in sorted(bundle.levels):
        if r > args.levels and args.levels_given:
            break
        found = sorted(detect_points(invert_counts(bundle, r, 1)))
        L = genus0.level(spec, r)
        st = L.structure
        classes = [format_class(L.rep(st.elements[e]), r, L.F) for e in found]
        truth = sorted(st.coords[code] for _, code in L.points)
        ok &= truth == found
        rows.append({"r": r, "detected": [list(e) for e in found], "classes": classes,
                     "matches_points_of_U": truth == found})
    return {"spec": bundle.tag, "levels": rows}, ok


def cmd_reconstruct(args, specA):
    from .reconstruction import search_twist
    bundle = _load_bundle(args.bundle)
    R = args.levels if args.levels_given else bundle.R
    try:
        w = search_twist(specA, bundle, R)
    except NoTwistFound as exc:
        return {"result": "NoTwistFound", "reason": exc.reason,
                "rejected": [{"l": l, "reason": why} for l, why in exc.rejected]}, False
    out = {"result": "witness"}
    out.update(w.to_json())
    return out, True


def cmd_bundle(args, spec):
    from .reconstruction import build_bundle, bundle_to_json, plant_twist
    B = args.series_bound or lfunctions.default_bound(spec)
    bundle = build_bundle(spec, args.levels, B)
    if args.plant_from:
        source = read_spec(args.plant_from)
        u, v = (int(x) for x in args.alpha.split(","))
        plant_twist(bundle, source, ((u, v), (0, 1)), args.frob)
    return bundle_to_json(bundle), True


def cmd_verify(args, spec):
    from . import model_checks
    suite = args.suite
    R = args.levels
    if suite == "af12":
        from .reconstruction import verify_af13
        if args.other:
            other = read_spec(args.other)
        else:
            # same support, one more power of the first prime of m
            g = spec.factorization[0][0].coeffs
            other = genus0.CurveSpec(spec.p, spec.k, "genus0",
                                     genus0.pmul(spec.field, spec.modulus, g))
        report = verify_af13(spec, other, max(R, 2))
        same = spec.modulus == other.modulus
        ok = report["isomorphism"] == same
        return report, ok
    if suite == "stab":
        rows = []
        for r in range(1, R + 1):
            rep = model_checks.stab_counts(spec, r)
            rows.append({"r": r, "max": rep.maximum, "bound": rep.bound, "identity_count": rep.identity_count,
                         "within_bound": rep.within_bound})
        return {"suite": suite, "levels": rows}, all(row["within_bound"] for row in rows)
    if suite == "gen":
        rows = [{"r": r, "t": model_checks.generation_cover(spec, r), "bound": 2 * spec.pi}
                for r in range(1, R + 1)]
        fr = [model_checks.unique_sum_fraction(spec, r) for r in range(1, R + 1)]
        for row, f in zip(rows, fr):
            row["unique_sum_fraction"] = f"{f.numerator}/{f.denominator}"
        ok = all(row["t"] <= row["bound"] for row in rows) and all(a <= b for a, b in zip(fr, fr[1:]))
        return {"suite": suite, "levels": rows}, ok
    if suite == "mm44":
        rows = []
        for r in range(1, R + 1):
            rep = model_checks.fixed_point_counts(spec, r)
            rows.append({"r": r, "identity_count": rep.identity_count,
                         "counts": [{"alpha": [list(a[0]), list(a[1])], "fixed": n}
                                    for a, n in sorted(rep.counts.items())]})
        ok = all(c["fixed"] <= 2 for row in rows for c in row["counts"])
        return {"suite": suite, "levels": rows}, ok
    if suite == "rh":
        return cmd_lfun(args, spec)
    raise InvalidInput(f"unknown suite {suite!r}")


# ---------------------------------------------------------------------------
# entry point

def build_parser():
    parser = argparse.ArgumentParser(prog="genjac", description="Generalized Jacobians of curves over finite fields.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-r", "--levels", type=int, default=None, help="levels r = 1..R (default 1)")
    common.add_argument("-B", "--series-bound", type=int, default=None, help="L-series truncation")
    common.add_argument("--budget", type=int, default=None, help="max residues enumerated per level")
    common.add_argument("--out", default=None, help="write the JSON report here")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("group", "points", "lfun"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("spec")
    p = sub.add_parser("detect", parents=[common])
    p.add_argument("bundle")
    p = sub.add_parser("reconstruct", parents=[common])
    p.add_argument("spec")
    p.add_argument("bundle")
    p.add_argument("-R", dest="levels", type=int, default=None, help="verify up to this level")
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("spec")
    p.add_argument("--suite", required=True, choices=["af12", "stab", "gen", "mm44", "rh"])
    p.add_argument("--other", default=None, help="second spec for the af12 suite")
    p = sub.add_parser("bundle", parents=[common])
    p.add_argument("spec")
    p.add_argument("--plant-from", default=None, help="source spec for a planted correspondence")
    p.add_argument("--alpha", default="1,0", help="u,v of x -> u x + v over F_q")
    p.add_argument("--frob", type=int, default=0, help="Frobenius exponent l")
    return parser


def run(argv=None):
    """Run one command; returns (exit code, JSON-able report, output path or None)."""
    args = build_parser().parse_args(argv)
    saved = genus0.RESIDUE_BUDGET, lfunctions.BUDGET
    try:
        code, report = _dispatch(args)
    finally:
        genus0.RESIDUE_BUDGET, lfunctions.BUDGET = saved
    return code, report, args.out


def _dispatch(args):
    args.levels_given = args.levels is not None
    if args.levels is None:
        args.levels = 1
    if args.levels < 1:
        return EXIT_USAGE, {"error": "InvalidInput", "message": "levels must be >= 1"}
    if args.budget is not None:
        if args.budget < 1:
            return EXIT_USAGE, {"error": "InvalidInput", "message": "budget must be positive"}
        genus0.RESIDUE_BUDGET = lfunctions.BUDGET = args.budget
    try:
        if args.command == "detect":
            report, ok = cmd_detect(args)
        else:
            spec = read_spec(args.spec)
            if args.series_bound is not None and spec.kind == "genus0" and args.series_bound < spec.degree:
                raise InvalidInput(f"series bound must be >= deg m = {spec.degree}")
            if spec.kind == "elliptic" and (args.command in ("reconstruct", "bundle")
                                            or getattr(args, "suite", "rh") != "rh"):
                what = args.command + (f" --suite {args.suite}" if args.command == "verify" else "")
                raise InvalidInput(f"{what} is only available for genus-0 specs")
            if spec.kind == "genus0" and args.budget is not None:
                # cached levels would otherwise bypass the limit
                total = (spec.q ** args.levels) ** spec.degree
                if total > args.budget:
                    raise BudgetExceeded(f"{total} residues mod m exceed budget {args.budget}")
            handler = {
                "group": cmd_group, "points": cmd_points, "lfun": cmd_lfun,
                "reconstruct": cmd_reconstruct, "verify": cmd_verify, "bundle": cmd_bundle,
            }[args.command]
            report, ok = handler(args, spec)
    except BudgetExceeded as exc:
        return EXIT_BUDGET, {"error": "BudgetExceeded", "message": str(exc)}
    except (GenJacError, OSError) as exc:
        return EXIT_USAGE, {"error": type(exc).__name__, "message": str(exc)}
    return (EXIT_OK if ok else EXIT_FAIL), report


def main(argv=None):
    code, report, out = run(argv)
    text = json.dumps(report, indent=2) + "\n"
    if out and code in (EXIT_OK, EXIT_FAIL):
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
