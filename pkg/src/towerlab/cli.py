"""Command-line entry point.

Every subcommand produces a deterministic report (JSON by default; text
and CSV projections available).  Exit codes: 0 success, 2 precondition
violation or usage error, 3 budget rejection, 4 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import __version__
from . import blockcyclic as bc
from . import lseries as ls
from . import verify as vf
from .curves import HyperellipticModel, twist_rank, zeta_numerator
from .errors import BudgetError, InvariantError, PreconditionError
from .fields import ExtensionField, UniPoly, poly_from_str, poly_to_str
from .orbits import (
    av2_conductor_exponent,
    av2_find_g,
    orbit_decomposition,
    towers_rank_bound,
)

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


# ---------------------------------------------------------------------------
# Input parsing helpers
# ---------------------------------------------------------------------------

def _parse_kv_spec(text: str) -> dict:
    """'a2=1,2;a4=0,1' -> {'a2': '1,2', 'a4': '0,1'}."""
    out = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise PreconditionError(f"malformed spec fragment {chunk!r}")
        key, val = chunk.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _parse_monomials(text: str) -> list:
    """'y^2+x^4+x^3+u' -> exponent triples (a_u, a_x, a_y)."""
    triples = []
    for mono in text.replace("-", "+").split("+"):
        mono = mono.strip()
        if not mono:
            continue
        exps = {"u": 0, "x": 0, "y": 0}
        for factor in mono.split("*"):
            factor = factor.strip()
            if "^" in factor:
                var, exp = factor.split("^", 1)
                exps[var.strip()] = int(exp)
            elif factor in exps:
                exps[factor] += 1
            elif factor.isdigit():
                continue  # numeric coefficient: exponents are what matter
            else:
                raise PreconditionError(f"cannot parse monomial factor {factor!r}")
        triples.append((exps["u"], exps["x"], exps["y"]))
    return triples


def _weierstrass_from_spec(q: int, spec: str) -> ls.WeierstrassModel:
    field = ExtensionField.prime(q)
    parts = _parse_kv_spec(spec)
    if "quartic" in parts:
        coeffs = [poly_from_str(c, field) for c in parts["quartic"].split("|")]
        return ls.quartic_to_weierstrass(field, coeffs)
    zero = UniPoly.zero()
    a2 = poly_from_str(parts["a2"], field) if "a2" in parts else zero
    a4 = poly_from_str(parts["a4"], field) if "a4" in parts else zero
    a6 = poly_from_str(parts["a6"], field) if "a6" in parts else zero
    return ls.WeierstrassModel(field, a2, a4, a6)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, value))


def emit(report: dict, args) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        rows = []
        _flatten("", report, rows)
        writer.writerow(["key", "value"])
        writer.writerows(rows)
        text = buf.getvalue()
    elif fmt == "text":
        rows = []
        _flatten("", report, rows)
        text = "".join(f"{k}: {v}\n" for k, v in rows)
    else:
        raise PreconditionError(f"unknown format {fmt!r}")
    out_path = getattr(args, "output", None)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_report(args, **params) -> dict:
    report = {"tool": "towerlab", "version": __version__, "parameters": params}
    if getattr(args, "timings", False):
        report["timings"] = {}
    return report


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def cmd_la(args) -> int:
    if args.action != "selftest":
        raise PreconditionError(f"unknown la action {args.action!r}")
    records = []
    combos = [(a, N, eps) for a in (2, 4, 6) for N in (1, 3, 5) for eps in (1, -1)]
    produced = 0
    seed = args.seed
    while produced < args.trials:
        for a, N, eps in combos:
            if produced == args.trials:
                break
            op = bc.build_instance(a, N, eps, seed)
            report = bc.verify_prop_la(op)
            cyclic = bc.verify_cyclic_identity(op)
            palindromic, det_ok = bc.verify_eigen_and_det_lemmas(op)
            records.append(
                {
                    "a": a,
                    "block_dim": N,
                    "epsilon": eps,
                    "seed": seed,
                    "divides": report.divides,
                    "cyclic_identity": cyclic,
                    "eigen_lemma": palindromic,
                    "det_lemma": det_ok,
                }
            )
            produced += 1
        seed += 1
    out = _base_report(args, trials=args.trials, seed=args.seed)
    out["records"] = records
    out["all_pass"] = all(
        r["divides"] and r["cyclic_identity"] and r["eigen_lemma"] and r["det_lemma"]
        for r in records
    )
    emit(out, args)
    return EXIT_OK if out["all_pass"] else EXIT_INVARIANT


def cmd_orbits(args) -> int:
    dec = orbit_decomposition(args.d, args.q)
    out = _base_report(args, d=args.d, q=args.q)
    out["order_of_q"] = dec.b
    out["orbits"] = [
        {
            "elements": list(o.elements),
            "size": o.size,
            "self_dual": o.self_dual,
            "order_class": o.order_class,
        }
        for o in dec.orbits
    ]
    out["higher_selfdual_count"] = len(dec.higher_selfdual())
    emit(out, args)
    return EXIT_OK


def cmd_towers_predict(args) -> int:
    pred = towers_rank_bound(args.q, args.n, args.w, args.sign_rho, args.excluded)
    out = _base_report(
        args, q=args.q, n=args.n, w=args.w, sign_rho=args.sign_rho, excluded=args.excluded
    )
    out.update(
        {
            "d": pred.d,
            "epsilon": pred.epsilon,
            "good_orbit_sizes": [o.size for o in pred.good_orbits],
            "lower_bound_center": pred.lower_bound_center,
            "lower_bound_extended": pred.lower_bound_extended,
            "asymptotic_form": pred.asymptotic_form,
        }
    )
    emit(out, args)
    return EXIT_OK


def cmd_av2(args) -> int:
    out = _base_report(args, k=args.k, g=args.g)
    if args.g is not None:
        out["conductor_exponent"] = av2_conductor_exponent(args.g, args.k)
        out["parity"] = out["conductor_exponent"] % 2
    else:
        out["smallest_g"] = av2_find_g(args.k)
    emit(out, args)
    return EXIT_OK


def cmd_zeta(args) -> int:
    field = ExtensionField.prime(args.p)
    f = poly_from_str(args.f, field)
    h = poly_from_str(args.h, field) if args.h else UniPoly.zero()
    model = HyperellipticModel(field, f, h=h)
    z = zeta_numerator(model)
    out = _base_report(args, p=args.p, f=args.f, h=args.h)
    out.update({"numerator": poly_to_str(z.poly), "genus": z.genus, "counts": z.counts})
    emit(out, args)
    return EXIT_OK


def cmd_twist_rank(args) -> int:
    base = poly_from_str(_parse_kv_spec(args.base).get("f", args.base))
    rank = twist_rank(args.ap, args.p, base, args.n)
    out = _base_report(args, p=args.p, ap=args.ap, base=args.base, n=args.n)
    out.update({"d": args.p ** args.n + 1, "rank": rank, "multiplicity": rank // 2})
    emit(out, args)
    return EXIT_OK


def cmd_lfun(args) -> int:
    t0 = time.time()
    model = _weierstrass_from_spec(args.q, args.model)
    L = ls.l_function(model)
    rank = ls.analytic_rank(L)
    out = _base_report(args, q=args.q, model=args.model)
    out.update(
        {
            "coeffs": poly_to_str(L.poly),
            "D": L.D,
            "conductor": [[p.label(), e] for p, e in L.conductor_divisor],
            "conductor_degree": L.conductor_degree,
            "sign": L.sign,
            "rank": rank,
        }
    )
    if "timings" in out:
        out["timings"]["total_seconds"] = round(time.time() - t0, 3)
    emit(out, args)
    return EXIT_OK


def cmd_verify_towers(args) -> int:
    fam = ls.family_model(args.case, args.g, args.p, args.p ** args.n + 1)
    if args.g != 1 or args.case != 1:
        raise PreconditionError(
            "L-function verification is implemented for the genus-1 member "
            "of the first family (elliptic fibers, p >= 5)"
        )
    field = ExtensionField.prime(args.p)
    coeffs = [c.map_coeffs(field.element) for c in fam.x_coeffs]
    model = ls.quartic_to_weierstrass(field, coeffs)
    L = ls.l_function(model)
    tv = vf.towers_verification(L, args.p, args.n, w=fam.weight, sign_rho=fam.sign_rho)
    out = _base_report(args, case=args.case, g=args.g, p=args.p, n=args.n)
    out.update(
        {
            "L": poly_to_str(L.poly),
            "D": L.D,
            "sign": L.sign,
            "rank": ls.analytic_rank(L),
            "towers": tv,
        }
    )
    emit(out, args)
    return EXIT_OK


def cmd_shioda(args) -> int:
    datum = ls.shioda_check(args.p, _parse_monomials(args.poly))
    out = _base_report(args, p=args.p, poly=args.poly)
    out.update(
        {
            "exponents": [list(r) for r in datum.exponents],
            "det": datum.detA,
            "delta": datum.delta,
            "passes": datum.passes,
        }
    )
    emit(out, args)
    return EXIT_OK


def cmd_bounds(args) -> int:
    geom, main = ls.rank_bounds(args.D, args.q)
    out = _base_report(args, D=args.D, q=args.q)
    out.update(
        {
            "geometric": geom,
            "brumer_main_term": main,
            "note": "main term only" if main is not None else "main term undefined at D <= 1",
        }
    )
    emit(out, args)
    return EXIT_OK


def cmd_verify_all(args) -> int:
    if not args.profile:
        raise PreconditionError("profile must be 'quick' or 'full'")
    results = vf.run_all(args.profile)
    out = _base_report(args, profile=args.profile)
    out["results"] = results
    out["all_pass"] = all(r["passed"] for r in results)
    emit(out, args)
    for r in results:
        status = "PASS" if r["passed"] else "FAIL"
        print(
            f"criterion {r['criterion']:>2}: {status} ({r['seconds']}s) {r['detail']}",
            file=sys.stderr,
        )
    return EXIT_OK if out["all_pass"] else EXIT_INVARIANT


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--output", default=None, help="write the report to a file")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.add_argument("--threads", type=int, default=1, help="worker count (advisory)")
    p.add_argument("--config", default=None, help="key=value file with flag defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="towerlab")
    parser.add_argument("--version", action="version", version=f"towerlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("la", help="block-cyclic operator self-tests")
    p.add_argument("action", choices=("selftest",))
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(handler=cmd_la)

    p = sub.add_parser("orbits", help="orbits of multiplication by q on Z/dZ")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_orbits)

    p = sub.add_parser("towers-predict", help="predicted rank lower bounds")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--sign-rho", type=int, default=-1, dest="sign_rho")
    p.add_argument("--excluded", type=int, default=0)
    _add_common(p)
    p.set_defaults(handler=cmd_towers_predict)

    p = sub.add_parser("av2", help="conductor-exponent parity computations")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--g", type=int, default=None)
    _add_common(p)
    p.set_defaults(handler=cmd_av2)

    p = sub.add_parser("zeta", help="zeta numerator of a hyperelliptic model")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--f", required=True, help="comma-separated coefficients of f(x)")
    p.add_argument("--h", default=None, help="h(x) for p = 2 models")
    _add_common(p)
    p.set_defaults(handler=cmd_zeta)

    p = sub.add_parser("twist-rank", help="quadratic-twist rank pipeline")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ap", type=int, required=True)
    p.add_argument("--base", required=True, help='base polynomial, e.g. "f=-1,1"')
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_twist_rank)

    p = sub.add_parser("lfun", help="L-function of an elliptic model over F_q(t)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--model", required=True,
                   help='"a2=..;a4=..;a6=.." or "quartic=c0|c1|c2|c3|c4"')
    p.add_argument("--json", action="store_true", help="accepted for compatibility")
    _add_common(p)
    p.set_defaults(handler=cmd_lfun)

    p = sub.add_parser("verify-towers", help="family L-function vs orbit prediction")
    p.add_argument("--case", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_verify_towers)

    p = sub.add_parser("shioda", help="four-monomial surface conditions")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--poly", required=True, help='e.g. "y^2+x^4+x^3+u"')
    _add_common(p)
    p.set_defaults(handler=cmd_shioda)

    p = sub.add_parser("bounds", help="rank bounds from the L-degree")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("verify-all", help="run the full verification suite")
    p.add_argument("--profile", default="full")
    _add_common(p)
    p.set_defaults(handler=cmd_verify_all)

    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser, argv):
    """Config-file values fill in flags not given on the command line."""
    path = getattr(args, "config", None)
    if not path:
        return args
    defaults = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise PreconditionError(f"malformed config line {line!r}")
            key, val = line.split("=", 1)
            defaults[key.strip().replace("-", "_")] = val.strip()
    given = {a.lstrip("-").replace("-", "_").split("=")[0] for a in argv if a.startswith("--")}
    for key, val in defaults.items():
        if key in given or not hasattr(args, key):
            continue
        current = getattr(args, key)
        setattr(args, key, type(current)(val) if current is not None else val)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, parser, argv)
        return args.handler(args)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except FileNotFoundError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
