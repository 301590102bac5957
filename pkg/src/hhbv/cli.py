"""Command-line front end: ``hhbv <command> ...``.

Exit codes: 0 pass, 1 a mathematical check failed, 2 input error, 3 an
internal invariant was violated.  JSON reports are deterministic for a fixed
configuration and seed.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .algebra import InvariantError, UnknownName, builtin_algebra, load_algebra, load_bimodule
from .duality.comparison import LiftFailed
from .duality.pipeline import NotCY, check_calabi_yau, check_vdb, fundamental_class
from .duality.resolution import (
    NotExact,
    ResolutionComplex,
    builtin_resolution,
    periodic_dual_numbers_resolution,
    verify_resolution,
)
from .groups import certify_cy_group, nonorientable_twist_demo
from .hochschild.oracle import oracle_compare
from .hochschild.table import compute_table, export_calculus
from .linalg import format_rational
from .tt_calculus import (
    mutate,
    mutation_sites,
    verify_axioms,
    verify_bv,
    verify_four_term_identity,
    verify_ginzburg_formula,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3


class InputError(Exception):
    pass


def jsonable(x):
    """Recursively convert results to plain JSON types (Fractions become strings)."""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items() if not str(k).startswith("_")}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if hasattr(x, "to_json_obj"):
        return jsonable(x.to_json_obj())
    raise TypeError(f"cannot serialize {type(x).__name__}")


# ------------------------------------------------------------------ inputs


def _algebra(args):
    if args.algebra is None:
        raise InputError("an algebra (builtin name or JSON file) is required")
    if args.builtin:
        try:
            return builtin_algebra(args.algebra)
        except UnknownName as e:
            raise InputError(str(e.args[0])) from None
    try:
        A = load_algebra(args.algebra)
    except FileNotFoundError:
        raise InputError(f"no such file: {args.algebra}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        if isinstance(e, InvariantError):
            raise
        raise InputError(f"cannot parse {args.algebra}: {e}") from None
    if A.name is None:
        A.name = args.algebra
    if not A.unit_is_first:
        A, _ = A.with_unit_first()
    return A


def _resolution(args, A):
    """``--res builtin`` (default) or a JSON file holding a resolution of ``A``."""
    src = getattr(args, "res", None) or "builtin"
    if src == "builtin":
        if A.name == "dual_numbers":
            return periodic_dual_numbers_resolution(max(args.P, 2))
        try:
            return builtin_resolution(A)
        except KeyError as e:
            raise InputError(str(e.args[0])) from None
    try:
        with open(src) as fh:
            obj = json.load(fh)
        res = ResolutionComplex.from_json_obj(A, obj)
    except FileNotFoundError:
        raise InputError(f"no such file: {src}") from None
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise InputError(f"cannot parse {src}: {e}") from None
    check = verify_resolution(res)
    if not check["passed"]:
        raise NotExact("resolution", "the given resolution fails its checks")
    return res


# ------------------------------------------------------------------ commands


def cmd_hh(args):
    A = _algebra(args)
    M = None
    if args.module:
        try:
            M = load_bimodule(A, args.module)
        except FileNotFoundError:
            raise InputError(f"no such file: {args.module}") from None
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvariantError):
                raise
            raise InputError(f"cannot parse {args.module}: {e}") from None
    t = compute_table(A, M, P=args.P)
    out = {
        "algebra": A.name,
        "module": M.name if M is not None else "A",
        "cohomology_dims": list(t.coh_dims),
        "homology_dims": list(t.hom_dims),
        "table": t.to_json_obj(),
    }
    if M is None:
        out["calculus"] = export_calculus(t).to_json_obj()
    return out, True


def cmd_verify(args):
    A = _algebra(args)
    calc = export_calculus(compute_table(A, P=args.P))
    flips = []
    if args.fuzz_flip:
        rng = random.Random(args.seed)
        sites = mutation_sites(calc)
        if not sites:
            raise InputError("the calculus has no table entries to mutate")
        for _ in range(args.fuzz_flip):
            site = sites[rng.randrange(len(sites))]
            calc = mutate(calc, site)
            flips.append({"table": site[0], "key": site[1], "target": site[2]})
    rep = verify_axioms(calc)
    return {"algebra": A.name, "mutations": flips, "axioms": rep.to_json_obj()}, rep.passed


def cmd_fundamental_class(args):
    A = _algebra(args)
    res = _resolution(args, A)
    if res.truncated:
        raise InputError(f"{A.name}: no finite resolution, so no fundamental class")
    fc = fundamental_class(res)
    return {"algebra": A.name, "resolution": res.name, "fundamental_class": fc.to_json_obj()}, fc.cap_is_identity


def cmd_vdb(args):
    if args.group is not None:
        signs = tuple(args.twist) if args.twist else (1,) * args.group
        if len(signs) != args.group:
            raise InputError("--twist needs one sign per generator")
        rep = nonorientable_twist_demo(signs, N=args.N)
        return {"group_rank": args.group, "twist_demo": rep}, rep["vdb"] == "VdB"
    A = _algebra(args)
    res = _resolution(args, A)
    if res.truncated:
        raise InputError(f"{A.name}: no finite resolution; VdB duality needs one")
    rep = check_vdb(res)
    return {"algebra": A.name, "resolution": res.name, "vdb": rep}, rep["verdict"] == "VdB"


def _group_report(args):
    rep, _, _ = certify_cy_group(args.group, args.N)
    return rep


def cmd_cy(args):
    if args.group is not None:
        rep = _group_report(args)
        return {"group_rank": args.group, "certificate": rep}, rep["passed"]
    A = _algebra(args)
    res = _resolution(args, A)
    if res.truncated:
        raise InputError(f"{A.name}: no finite resolution; Calabi-Yau needs one")
    try:
        rep = check_calabi_yau(res)
    except NotCY as e:
        return {"algebra": A.name, "resolution": res.name, "cy": False, "reason": str(e),
                "vdb": check_vdb(res)}, False
    ok = rep["cy"] and rep.get("bv_passed", False)
    return {"algebra": A.name, "resolution": res.name, "calabi_yau": rep}, ok


def cmd_bv(args):
    if args.group is not None:
        rep = _group_report(args)
        keep = ("d", "N", "verdict", "fundamental_class", "identities_printed", "identities_observed",
                "printed_identities_hold", "observed_identities_hold", "delta_on_derivations")
        return {"group_rank": args.group, "bv": {k: rep[k] for k in keep if k in rep}}, rep["passed"]
    A = _algebra(args)
    res = _resolution(args, A)
    if res.truncated:
        raise InputError(f"{A.name}: no finite resolution; BV needs a fundamental class")
    try:
        cy = check_calabi_yau(res)
    except NotCY as e:
        return {"algebra": A.name, "cy": False, "reason": str(e)}, False
    ds = cy.get("_ds")
    if ds is None:
        return {"algebra": A.name, "cy": False, "reason": "cap with c is not invertible"}, False
    bv, g, ft = verify_bv(ds), verify_ginzburg_formula(ds), verify_four_term_identity(ds)
    ok = bv.passed and g.passed and ft.passed
    return {"algebra": A.name, "delta": cy.get("delta"), "bv": bv.to_json_obj(),
            "ginzburg": g.to_json_obj(), "four_term": ft.to_json_obj()}, ok


def cmd_oracle_compare(args):
    A = _algebra(args)
    res = None
    if A.name == "dual_numbers":
        res = periodic_dual_numbers_resolution(args.P)
    else:
        try:
            res = builtin_resolution(A)
        except (KeyError, ValueError):
            res = None
    rep = oracle_compare(A, args.P, res)
    return rep, rep["agree"]


COMMANDS = {
    "hh": cmd_hh,
    "verify": cmd_verify,
    "fundamental-class": cmd_fundamental_class,
    "vdb": cmd_vdb,
    "cy": cmd_cy,
    "bv": cmd_bv,
    "oracle-compare": cmd_oracle_compare,
}


def build_parser():
    p = argparse.ArgumentParser(prog="hhbv", description="Exact Hochschild calculus, duality and BV checks.")
    p.add_argument("--version", action="version", version=f"hhbv {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("algebra", nargs="?", help="builtin name (with --builtin) or algebra JSON file")
        s.add_argument("--builtin", action="store_true", help="treat ALGEBRA as a builtin name")
        s.add_argument("-P", type=int, default=6, help="truncation degree for bar complexes")
        s.add_argument("-N", type=int, default=4, help="weight window radius for group algebras")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("--out", help="write the report here instead of stdout")
        if name in ("fundamental-class", "vdb", "cy", "bv"):
            s.add_argument("--res", help="'builtin' or a resolution JSON file")
        if name in ("vdb", "cy", "bv"):
            s.add_argument("--group", type=int, choices=(0, 1, 2), help="use Q[Z^d] instead of ALGEBRA")
        if name == "vdb":
            s.add_argument("--twist", type=int, nargs="+", choices=(-1, 1),
                           help="signs of the twist on the generators (synthetic demo)")
        if name == "hh":
            s.add_argument("--module", help="bimodule JSON file (default: A itself)")
        if name == "verify":
            s.add_argument("--fuzz-flip", type=int, default=0, metavar="K",
                           help="apply K seeded single-entry mutations before verifying")
    return p


def _config(args):
    keys = ("command", "algebra", "builtin", "P", "N", "seed", "format", "res", "group", "twist", "fuzz_flip", "module")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _text(obj, indent=0):
    lines = []
    pad = "  " * indent
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict) and "check" in v:
                lines.append(f"{pad}- {v['check']}: {v.get('status')} (checked {v.get('checked')})")
            else:
                lines.append(f"{pad}- {json.dumps(v, sort_keys=True)}")
    return lines


def _flat(v):
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) for x in items)


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    return "\n".join(_text(report)) + "\n"


def run(argv=None):
    """Parse, execute and return ``(exit code, rendered report)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.P < 2 or args.N < 2:
        return EXIT_INPUT, "error: -P and -N must be at least 2\n"
    report = {"tool": "hhbv", "version": __version__, "config": _config(args), "seed": args.seed}
    try:
        result, ok = COMMANDS[args.command](args)
        report["result"] = jsonable(result)
        report["status"] = "pass" if ok else "fail"
        code = EXIT_PASS if ok else EXIT_FAIL
    except InputError as e:
        report.update(status="input_error", error=str(e))
        code = EXIT_INPUT
    except (InvariantError, NotExact, LiftFailed, AssertionError) as e:
        report.update(status="invariant_violation", error=f"{type(e).__name__}: {e}")
        code = EXIT_INVARIANT
    return code, render(report, args.format)


def main(argv=None):
    code, text = run(argv)
    args = [a for a in (argv if argv is not None else sys.argv[1:])]
    out = None
    if "--out" in args:
        i = args.index("--out")
        out = args[i + 1] if i + 1 < len(args) else None
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
