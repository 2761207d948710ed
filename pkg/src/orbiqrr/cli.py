"""The orbiqrr command line.

Subcommands: target, bernoulli, delta, ifunction, mirror-map, invariants,
quantize, check.  All output is deterministic JSON (sorted keys) unless
--format pretty/csv is chosen; rationals print as "p/q" strings, rational
functions as {num, den} coefficient arrays, series as sparse rows.

Exit codes: 0 success, 1 domain error (structured payload on stdout),
2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .bernoulli import bernoulli_value
from .cache import ArtifactCache
from .errors import OrbiqrrError, UsageError
from .exactalg import Scalar, sc
from .fockquant import (
    build_point_potential,
    commutator_cocycle,
    mat_eye_like,
    quantize_monomial,
    string_residual,
)
from .genus0 import (
    build_point_table,
    check_universal_equation,
    hypergeometric_modification,
    j_closed_form_Pn,
    load_j_function,
    mirror_map,
    nonequivariant_limit,
    quintic_pipeline,
    small_expansion,
)
from .genus0.correlators import CorrelatorTable
from .loopops import (
    check_delta_symplectomorphism,
    class_Am,
    delta_operator,
    euler_s_values,
    genus1_prefactor_symbol,
    log_delta,
)
from .orbtarget import (
    bmu,
    bmu_character,
    dump_target,
    line_bundle_On,
    load_target,
    point,
    projective_space,
    trivial_bundle,
    weighted_projective,
    wps_pullback_line,
)
from .serre import check_serre_cone

Frac = Fraction


# -- target / bundle resolution ---------------------------------------------------


def resolve_target(spec: str):
    """point | Pn | Bmun | WPS:w0,w1,... | path-to-config.json -> (target, bundles)."""
    if os.path.exists(spec):
        with open(spec) as fh:
            return load_target(fh.read())
    low = spec.lower()
    if low == "point":
        return point(), {}
    if low.startswith("p") and low[1:].isdigit():
        return projective_space(int(low[1:])), {}
    if low.startswith("bmu") and low[3:].isdigit():
        return bmu(int(low[3:])), {}
    if low.startswith("wps:"):
        weights = [int(w) for w in low[4:].split(",")]
        return weighted_projective(weights), {}
    raise UsageError(f"unknown target {spec!r}")


def resolve_bundle(t, bundles, spec: str):
    if spec in bundles:
        return bundles[spec]
    low = spec.lower()
    if low.startswith("trivial"):
        rank = int(low.split(":", 1)[1]) if ":" in low else 1
        return trivial_bundle(t, rank)
    if low.startswith("char:"):
        return bmu_character(t, int(low.split(":", 1)[1]))
    if low.startswith("o"):
        m = int(low[1:])
        if t.name.startswith("P"):
            return line_bundle_On(t, m)
        return wps_pullback_line(t, m)
    raise UsageError(f"unknown bundle {spec!r} for target {t.name}")


def parse_s_list(text: str):
    """Comma list of s-values starting at s_0; 'L' denotes ln(lambda)."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok in ("L", "l", "ln", "lnlambda"):
            out.append(Scalar.log_lambda())
        elif tok.endswith("L") or tok.endswith("l"):
            out.append(Scalar.log_lambda() * sc(Frac(tok[:-1])))
        else:
            out.append(sc(Frac(tok)))
    return out


# -- serialization -----------------------------------------------------------------


def series_rows(e) -> list:
    rows = []
    t = e.target
    for (n, d), cls in sorted(e.data.items()):
        for (cid, idx), c in sorted(cls.terms.items()):
            rows.append({
                "d": list(d), "zpow": n, "component": cid,
                "basis": t.by_id[cid].basis[idx].name, "coeff": c.to_obj(),
            })
    return rows


def operator_obj(op) -> dict:
    t = op.target
    blocks = {}
    if op.is_multiplication:
        for n, cls in sorted(op.mult_classes.items()):
            blocks[str(n)] = {
                f"{cid}/{t.by_id[cid].basis[idx].name}": c.to_obj()
                for (cid, idx), c in sorted(cls.terms.items())
            }
        return {"kind": "multiplication", "zmin": op.zmin, "zmax": op.zmax,
                "blocks": blocks}
    for n, mat in sorted(op.blocks.items()):
        blocks[str(n)] = [[x.to_obj() for x in row] for row in mat]
    return {"kind": "matrix", "zmin": op.zmin, "zmax": op.zmax, "blocks": blocks}


def emit(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, sort_keys=True)
    if fmt == "pretty":
        return json.dumps(obj, sort_keys=True, indent=2)
    if fmt == "csv":
        rows = obj.get("rows") if isinstance(obj, dict) else None
        if rows is None:
            raise UsageError("--format csv only applies to row-shaped output")
        buf = io.StringIO()
        if rows:
            cols = sorted({k for r in rows for k in r})
            buf.write(",".join(cols) + "\n")
            for r in rows:
                buf.write(",".join(json.dumps(r.get(c, ""), sort_keys=True)
                                   if not isinstance(r.get(c, ""), str)
                                   else str(r.get(c, "")) for c in cols) + "\n")
        return buf.getvalue().rstrip("\n")
    raise UsageError(f"unknown format {fmt!r}")


# -- subcommands -------------------------------------------------------------------


def cmd_target(args, cache) -> dict:
    if args.spec is None:
        raise UsageError("target: missing target spec or config file")
    if args.action == "show":
        t, bundles = resolve_target(args.spec)
        extra = []
        if args.bundle:
            extra = [resolve_bundle(t, bundles, args.bundle)]
        return json.loads(dump_target(t, extra))
    if args.action == "validate":
        with open(args.spec) as fh:
            t, bundles = load_target(fh.read())
        return {"valid": True, "target": t.name, "bundles": sorted(bundles)}
    raise UsageError(f"unknown target action {args.action!r}")


def cmd_bernoulli(args, cache) -> dict:
    val = bernoulli_value(args.m, Frac(args.x))
    return {"m": args.m, "x": str(Frac(args.x)), "value": str(val)}


def _s_values_for(args, t, zmax: int):
    if args.euler:
        return euler_s_values(zmax + 2 * t.dim + 2, include_log=not args.no_log)
    if args.s is None:
        raise UsageError("provide --euler or --s s0,s1,...")
    return parse_s_list(args.s)


def cmd_delta(args, cache) -> dict:
    t, bundles = resolve_target(args.target)
    F = resolve_bundle(t, bundles, args.bundle)
    s = _s_values_for(args, t, args.zmax)
    request = {
        "op": "delta", "target": args.target, "bundle": args.bundle,
        "euler": bool(args.euler), "no_log": bool(args.no_log),
        "s": None if args.euler else [x.to_obj() for x in s],
        "zmax": args.zmax, "log": bool(args.log),
    }

    def compute():
        if args.log:
            op = log_delta(t, F, s, args.zmax)
        else:
            op = delta_operator(t, F, s, args.zmax)
        out = {"target": t.name, "bundle": F.name, "zmax": args.zmax,
               "operator": operator_obj(op),
               "genus1_prefactor": genus1_prefactor_symbol(t, F)}
        return out

    payload, status = cache.get_or_compute(request, compute)
    payload = dict(payload)
    payload["cache"] = status
    if args.check_symplectic:
        if args.euler:
            raise UsageError("--check-symplectic needs a finite --s list")
        payload["symplectic_check"] = check_delta_symplectomorphism(t, F, s, args.zmax)
    return payload


def cmd_ifunction(args, cache) -> dict:
    t, bundles = resolve_target(args.target)
    F = resolve_bundle(t, bundles, args.bundle)
    request = {"op": "ifunction", "target": args.target, "bundle": args.bundle,
               "max_degree": args.max_degree, "nonequivariant": args.nonequivariant}

    def compute():
        j = _builtin_j(t, args)
        i = hypergeometric_modification(t, F, j)
        if args.nonequivariant:
            i = nonequivariant_limit(i)
        return {"target": t.name, "bundle": F.name, "max_degree": args.max_degree,
                "rows": series_rows(i.series)}

    payload, status = cache.get_or_compute(request, compute)
    payload = dict(payload)
    payload["cache"] = status
    return payload


def _builtin_j(t, args):
    if t.name.startswith("P") and t.name[1:].isdigit():
        return j_closed_form_Pn(int(t.name[1:]), args.max_degree)
    if t.jfunction_file:
        with open(t.jfunction_file) as fh:
            return load_j_function(t, fh.read())
    raise UsageError(f"no J-function source for target {t.name}; "
                     "use a P^n target or a config with jfunction_file")


def cmd_mirror_map(args, cache) -> dict:
    t, bundles = resolve_target(args.target)
    F = resolve_bundle(t, bundles, args.bundle)
    j = _builtin_j(t, args)
    i = nonequivariant_limit(hypergeometric_modification(t, F, j))
    f, g = small_expansion(i)
    tau, j_tw = mirror_map(i)
    rows = []
    for (d, _z), c in sorted(f.items()):
        rows.append({"series": "F", "d": list(d), "coeff": c.to_obj()})
    for slot, (form, ser) in sorted(tau.items()):
        for (d, _z), c in sorted(ser.items()):
            rows.append({"series": f"tau[{slot[0]}/{slot[1]}]", "d": list(d),
                         "coeff": c.to_obj()})
    return {"target": t.name, "bundle": F.name, "rows": rows}


def cmd_invariants(args, cache) -> dict:
    t, bundles = resolve_target(args.target)
    F = resolve_bundle(t, bundles, args.bundle)
    if t.name != "P4" or F.c1_pairing != (Frac(5),):
        # the pipeline validates this too; fail early with the module error
        pass
    request = {"op": "invariants", "target": args.target, "bundle": args.bundle,
               "max_degree": args.max_degree}

    def compute():
        result = quintic_pipeline(args.max_degree)
        table = result["invariants"]
        rows = [{"d": d, "N": str(table["N"][d]), "n": str(table["n"][d])}
                for d in sorted(table["N"])]
        return {"target": t.name, "bundle": F.name, "max_degree": args.max_degree,
                "rows": rows}

    payload, status = cache.get_or_compute(request, compute)
    payload = dict(payload)
    payload["cache"] = status
    return payload


def cmd_quantize(args, cache) -> dict:
    t, bundles = resolve_target(args.target)
    if args.B.lower() == "identity":
        B = mat_eye_like(t)
        bname = "identity"
    elif args.B.lower().startswith("am:"):
        if not args.bundle:
            raise UsageError("--B am:M needs --bundle")
        F = resolve_bundle(t, bundles, args.bundle)
        B = class_Am(t, F, int(args.B.split(":", 1)[1]))
        bname = args.B
    else:
        raise UsageError(f"unknown operator spec {args.B!r} (use identity or am:M)")
    op = quantize_monomial(t, B, args.m, args.K)
    return {"target": t.name, "B": bname, "m": args.m, "K": args.K,
            "operator": op.to_obj()}


def cmd_check(args, cache) -> dict:
    if args.what == "universal":
        t = resolve_target(args.target)[0] if args.target else point()
        if args.table:
            with open(args.table) as fh:
                doc = json.load(fh)
            table = _table_from_obj(t, doc)
        else:
            table = build_point_table(point(), args.nmax)
        report = check_universal_equation(args.kind, table)
        return report
    if args.what == "cocycle":
        t = point()
        val = commutator_cocycle(t, (mat_eye_like(t), 1), (mat_eye_like(t), -1), args.K)
        return {"pair": "[z^, (1/z)^]", "target": "point", "K": args.K,
                "scalar": val.to_obj(), "expected": "-1/2",
                "ok": val == sc(Frac(-1, 2))}
    if args.what == "string":
        t = point()
        pot = build_point_potential(t, args.nmax)
        resid = string_residual(t, pot)
        return {"target": "point", "nmax": args.nmax, "residual_zero": resid.is_zero}
    if args.what == "serre":
        t, bundles = resolve_target(args.target)
        F = resolve_bundle(t, bundles, args.bundle)
        s = parse_s_list(args.s) if args.s else \
            [sc(0)] + [sc(Frac(1, k + 2)) for k in range(args.smax)]
        return check_serre_cone(t, F, s, args.zmax)
    raise UsageError(f"unknown check {args.what!r}")


def _table_from_obj(t, doc) -> CorrelatorTable:
    table = CorrelatorTable(t)
    for row in doc["rows"]:
        d = tuple(row.get("d", [0]))
        insertions = [((str(c), int(i)), int(k)) for (c, i, k) in row["insertions"]]
        table.set(d, insertions, sc(Frac(row["value"])))
    return table


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbiqrr", description=__doc__)
    p.add_argument("--format", choices=("json", "pretty", "csv"), default="json")
    p.add_argument("--cache-dir", default=None,
                   help="artifact cache directory (default: $ORBIQRR_CACHE)")
    p.add_argument("--version", action="version", version=f"orbiqrr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("target", help="build, show, validate target configs")
    t.add_argument("action", choices=("show", "validate"))
    t.add_argument("spec", nargs="?", help="target spec (show) or config file (validate)")
    t.add_argument("--bundle", default=None)
    t.set_defaults(func=cmd_target)

    b = sub.add_parser("bernoulli", help="exact Bernoulli polynomial values")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--x", required=True, help="rational point p/q")
    b.set_defaults(func=cmd_bernoulli)

    d = sub.add_parser("delta", help="the quantum Riemann-Roch loop operator")
    d.add_argument("--target", required=True)
    d.add_argument("--bundle", required=True)
    d.add_argument("--euler", action="store_true")
    d.add_argument("--no-log", action="store_true",
                   help="with --euler, drop the s_0 = ln(lambda) slot")
    d.add_argument("--s", default=None, help="comma list s0,s1,... ('L' = ln lambda)")
    d.add_argument("--zmax", type=int, required=True)
    d.add_argument("--log", action="store_true", help="emit log Delta instead of Delta")
    d.add_argument("--check-symplectic", action="store_true")
    d.set_defaults(func=cmd_delta)

    i = sub.add_parser("ifunction", help="hypergeometric modification of the J-function")
    i.add_argument("--target", required=True)
    i.add_argument("--bundle", required=True)
    i.add_argument("--max-degree", type=int, required=True)
    i.add_argument("--nonequivariant", action="store_true")
    i.set_defaults(func=cmd_ifunction)

    mm = sub.add_parser("mirror-map", help="small-space expansion and mirror map")
    mm.add_argument("--target", required=True)
    mm.add_argument("--bundle", required=True)
    mm.add_argument("--max-degree", type=int, required=True)
    mm.set_defaults(func=cmd_mirror_map)

    inv = sub.add_parser("invariants", help="hypersurface genus-0 invariants")
    inv.add_argument("--target", required=True)
    inv.add_argument("--bundle", required=True)
    inv.add_argument("--max-degree", type=int, required=True)
    inv.set_defaults(func=cmd_invariants)

    q = sub.add_parser("quantize", help="quantize an infinitesimally symplectic B z^m")
    q.add_argument("--target", required=True)
    q.add_argument("--bundle", default=None)
    q.add_argument("--B", required=True, help="identity or am:M")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--K", type=int, required=True)
    q.set_defaults(func=cmd_quantize)

    c = sub.add_parser("check", help="identity suites")
    c.add_argument("what", choices=("universal", "cocycle", "string", "serre"))
    c.add_argument("--kind", default="string",
                   choices=("string", "divisor", "dilaton", "trr"))
    c.add_argument("--table", default=None)
    c.add_argument("--nmax", type=int, default=6)
    c.add_argument("--K", type=int, default=6)
    c.add_argument("--target", default=None)
    c.add_argument("--bundle", default=None)
    c.add_argument("--smax", type=int, default=2)
    c.add_argument("--zmax", type=int, default=3)
    c.add_argument("--s", default=None)
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    cache = ArtifactCache(args.cache_dir or os.environ.get("ORBIQRR_CACHE"))
    try:
        result = args.func(args, cache)
        print(emit(result, args.format))
        return 0
    except UsageError as e:
        print(json.dumps({"error": {"code": e.code, "message": str(e)}},
                         sort_keys=True), file=sys.stderr)
        return 2
    except OrbiqrrError as e:
        print(json.dumps({"error": {"code": e.code, "message": str(e)}},
                         sort_keys=True))
        return 1


if __name__ == "__main__":
    sys.exit(main())
