"""Command-line front end.

Exit codes: 0 pass, 1 a check failed, 2 bad input. JSON goes to stdout, a short
summary to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cyclo import ScalarSyntaxError, format_scalar, make_context
from .fixtures import fixture_files, fixture_names, fixture_params, load_fixture
from .quiver import QuiverError, export_dot, format_element, parse_element, parse_quiver, validate_quiver
from .symmetry import ActionError, decompose_components, parse_action, validate_action

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class Session:
    """Parsed inputs plus run options; every parameter key must resolve."""

    def __init__(self, quiver, act, params=None, ext_params=None, act_G=None, options=None):
        self.quiver = quiver
        self.act = act
        self.ctx = act.ctx
        self.params = params
        self.ext_params = ext_params
        self.act_G = act_G
        self.options = options or {}


def _read_json(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _load(args, need_params=False):
    from .taft import check_param_keys, parse_params
    fixture = getattr(args, "fixture", None)
    fparams = None
    if fixture:
        try:
            q, act, _ = load_fixture(fixture)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from exc
        if getattr(args, "params", None) is None:
            fparams = fixture_params(fixture)[2]
    else:
        if not args.quiver or not args.action:
            raise InputError("give --quiver and --action, or --fixture NAME")
        try:
            q = parse_quiver(_read_json(args.quiver, "quiver"))
        except QuiverError as exc:
            raise InputError(f"{args.quiver}: {exc}") from exc
        try:
            act = parse_action(_read_json(args.action, "action"))
        except ActionError as exc:
            raise InputError(f"{args.action}: {exc}") from exc
    params = fparams
    if getattr(args, "params", None) and not getattr(args, "extension_params", False):
        try:
            params = parse_params(_read_json(args.params, "params"), act.ctx)
            check_param_keys(q, act, params)
        except ValueError as exc:
            raise InputError(f"{args.params}: {exc}") from exc
    return Session(q, act, params, options=vars(args))


def _emit(obj, summary):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")
    if summary:
        sys.stderr.write(summary.rstrip("\n") + "\n")


def _require_valid(s: Session):
    qrep = validate_quiver(s.quiver)
    if not qrep["valid"]:
        raise InputError(f"invalid quiver: {qrep['violations'][0]}")
    arep = validate_action(s.quiver, s.act)
    if not arep["valid"]:
        raise InputError(f"invalid group action: {arep['violations'][0]}")


# ---------------------------------------------------------------- commands

def cmd_validate(args):
    s = _load(args)
    qrep = validate_quiver(s.quiver)
    arep = validate_action(s.quiver, s.act) if qrep["valid"] else {"valid": False, "violations": [
        {"kind": "skipped", "detail": "quiver is invalid"}]}
    ok = qrep["valid"] and arep["valid"]
    _emit({"valid": ok, "quiver": qrep, "action": arep},
          "valid" if ok else "invalid: " + json.dumps((qrep["violations"] + arep["violations"])[0]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_decompose(args):
    s = _load(args)
    _require_valid(s)
    comps = decompose_components(s.quiver, s.act)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(export_dot(s.quiver, s.act))
    kinds = [c.to_json()["kind"] for c in comps]
    _emit({"count": len(comps), "components": [c.to_json() for c in comps]},
          f"{len(comps)} components: " + ", ".join(kinds))
    return EXIT_OK


def cmd_parametrize(args):
    from .taft import parametrize
    s = _load(args)
    _require_valid(s)
    rep = parametrize(s.quiver, s.act)
    lines = [f"free: {', '.join(rep.free) or '(none)'}"]
    for r in rep.residual:
        lines.append(f"residual: {r['lhs']} = {r['rhs']}")
    for sym, why in rep.forced_zero:
        lines.append(f"forced zero: {sym} ({why})")
    _emit(rep.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_sample(args):
    from .taft import SamplingError, parametrize, sample_params
    s = _load(args)
    _require_valid(s)
    rep = parametrize(s.quiver, s.act)
    try:
        params = sample_params(rep, seed=args.seed, normalize_mu=args.normalize_mu,
                               require_faithful=True if args.require_faithful else None)
    except SamplingError as exc:
        _emit({"error": str(exc)}, str(exc))
        return EXIT_FAIL
    _emit(params.to_json(), f"sampled with seed {args.seed}")
    return EXIT_OK


def _build_taft(s: Session, strict=False):
    from .taft import TaftParams, build_action
    return build_action(s.quiver, s.act, s.params or TaftParams(), strict=strict)


def _build_extension(s: Session, which, strict=False):
    from . import extensions as ext
    if which == "uq":
        return ext.build_uq_action(s.quiver, s.act, s.ext_params, strict=strict)
    return ext.build_double_action(s.quiver, s.act, s.act_G, s.ext_params, strict=strict)


def _load_extension(args, which):
    from . import extensions as ext
    from .taft import TaftParams
    args.extension_params = not args.from_taft
    s = _load(args)
    _require_valid(s)
    if args.action_G:
        if which != "double":
            raise InputError("--action-G only applies to the double")
        try:
            s.act_G = parse_action(_read_json(args.action_G, "G action"), s.ctx)
        except ActionError as exc:
            raise InputError(f"{args.action_G}: {exc}") from exc
    if args.from_taft:
        base = s.params or TaftParams()
        conv = ext.uq_params_from_taft if which == "uq" else ext.double_params_from_taft
        s.ext_params = conv(s.quiver, s.act, base)
    elif args.params:
        parse = ext.parse_uq_params if which == "uq" else ext.parse_double_params
        try:
            s.ext_params = parse(_read_json(args.params, "params"), s.ctx)
        except ValueError as exc:
            raise InputError(f"{args.params}: {exc}") from exc
    else:
        s.ext_params = ext.UqParams() if which == "uq" else ext.DoubleParams()
    return s


def cmd_act(args):
    s = _load_extension(args, args.extension) if args.extension else _load(args)
    if not args.extension:
        _require_valid(s)
    try:
        elem = parse_element(s.quiver, s.ctx, args.element)
    except (QuiverError, ScalarSyntaxError, ValueError) as exc:
        raise InputError(f"element: {exc}") from exc
    if args.extension:
        from .extensions import ExtensionError
        try:
            spec = _build_extension(s, args.extension)
        except ExtensionError as exc:
            raise InputError(str(exc)) from exc
        try:
            out = spec.apply(args.generator, elem)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        from .verifier import apply_generator
        if args.generator not in ("g", "x"):
            raise InputError(f"generator {args.generator!r} needs --extension uq or double")
        spec = _build_taft(s)
        out = apply_generator(spec, args.generator, elem)
    text = format_element(out)
    _emit({"generator": args.generator, "input": format_element(elem), "result": text},
          f"{args.generator} . ({format_element(elem)}) = {text}")
    return EXIT_OK


def cmd_verify(args):
    from .taft import check_constraints
    from .verifier import verify_all
    s = _load(args)
    _require_valid(s)
    spec = _build_taft(s)
    report = verify_all(spec, args.depth, args.require_inner_faithful)
    cons = []
    if s.params is not None:
        for c in decompose_components(s.quiver, s.act):
            cons += check_constraints(c, s.quiver, s.act, s.params)
    out = report.to_json()
    out["constraints"] = cons
    ok = report.ok and all(r["status"] == "pass" for r in cons)
    out["all_pass"] = ok
    fails = [e["name"] for _, e in report.failures()] + [r["name"] for r in cons if r["status"] != "pass"]
    _emit(out, "all relations hold" if ok else "FAILED: " + "; ".join(dict.fromkeys(fails)))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_extend(args):
    from . import extensions as ext
    which = args.which
    s = _load_extension(args, which)
    try:
        spec = _build_extension(s, which)
    except ext.ExtensionError as exc:
        raise InputError(str(exc)) from exc
    if which == "uq":
        cons = ext.uq_constraint_report(s.quiver, s.act, s.ext_params)
        report = ext.verify_uq(spec, args.depth)
    else:
        cons = ext.double_constraint_report(s.quiver, s.act, spec.groups["G"], s.ext_params)
        report = ext.verify_double(spec, args.depth)
    out = report.to_json()
    out["constraints"] = cons
    out["params"] = s.ext_params.to_json()
    ok = report.ok and all(r["status"] == "pass" for r in cons)
    out["all_pass"] = ok
    fails = [e["name"] for _, e in report.failures()] + [r["name"] for r in cons if r["status"] != "pass"]
    _emit(out, f"{which}: " + ("all relations hold" if ok else "FAILED: " + "; ".join(dict.fromkeys(fails))))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args):
    from .crosscheck import cross_check
    from .oracle import vanishing_grid
    n = args.n
    if n < 2:
        raise InputError("--n must be at least 2")
    ctx = make_context(n)
    limit = args.limit if args.limit is not None else 3 * n
    grid = vanishing_grid(ctx, limit, literal=args.literal)
    out = {"n": n, "grid": {"limit": limit, "literal": args.literal, "nonvanishing": grid}}
    ok = not grid
    if args.draws:
        out["psi"] = {}
        for kind in "AB":
            bad = cross_check(kind, n, draws=args.draws, seed=args.seed)
            out["psi"][kind] = {"draws": args.draws, "mismatches": [
                {k: (format_scalar(v) if hasattr(v, "ctx") else v) for k, v in b.items() if k != "mismatch"}
                for b in bad]}
            ok = ok and not bad
    _emit(out, f"oracle n={n}: " + ("ok" if ok else "mismatch"))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fixtures(args):
    if args.list or not args.name:
        _emit({"fixtures": fixture_names()}, "\n".join(fixture_names()))
        return EXIT_OK
    try:
        files = fixture_files(args.name)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    out_dir = args.out or args.name
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for fname, doc in files.items():
        path = os.path.join(out_dir, fname)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
        written.append(path)
    _emit({"fixture": args.name, "files": written}, f"wrote {len(written)} files to {out_dir}")
    return EXIT_OK


def cmd_export_dot(args):
    s = _load(args)
    sys.stdout.write(export_dot(s.quiver, None if args.no_color else s.act))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _inputs(p, params=True):
    p.add_argument("--quiver", help="quiver JSON file")
    p.add_argument("--action", help="Z_n-action JSON file")
    p.add_argument("--fixture", help="use a bundled fixture instead of files")
    if params:
        p.add_argument("--params", help="parameter JSON file")


def build_parser():
    ap = argparse.ArgumentParser(prog="hopfquiver",
                                 description="Taft algebra actions on path algebras of quivers with symmetry.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the quiver and the group action")
    _inputs(p, params=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="list the components with canonical labels")
    _inputs(p, params=False)
    p.add_argument("--dot", help="also write a DOT file with orbit coloring")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("parametrize", help="free, derived and forced parameters")
    _inputs(p, params=False)
    p.set_defaults(func=cmd_parametrize)

    p = sub.add_parser("sample", help="sample a parameter point satisfying every constraint")
    _inputs(p, params=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize-mu", action="store_true", help="sample as if every scale were 1")
    p.add_argument("--require-faithful", action="store_true", help="insist on a nonzero x-action")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("act", help="apply a generator to a path expression")
    _inputs(p)
    p.add_argument("generator", choices=["g", "x", "K", "K^-1", "E", "F", "G", "X"])
    p.add_argument("element", help='e.g. "f1*f2 + 1/2*e[v1]"')
    p.add_argument("--extension", choices=["uq", "double"])
    p.add_argument("--action-G", dest="action_G", help="action of G for the double")
    p.add_argument("--from-taft", action="store_true", help="extend the Taft parameters in --params")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("verify", help="check every relation on the filtered basis")
    _inputs(p)
    p.add_argument("--depth", type=int, default=None, help="maximal path length L")
    p.add_argument("--require-inner-faithful", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extend", help="build and verify a u_q(sl2) or D(T(n)) action")
    p.add_argument("which", choices=["uq", "double"])
    _inputs(p)
    p.add_argument("--action-G", dest="action_G", help="action of G for the double (default: same as g)")
    p.add_argument("--from-taft", action="store_true",
                   help="treat --params as Taft parameters and derive the partner generator")
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("oracle", help="vanishing grid and closed-form cross-checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int, default=None, help="grid bound (default 3n)")
    p.add_argument("--literal", action="store_true", help="include exponents divisible by n")
    p.add_argument("--draws", type=int, default=0, help="random draws for the closed-form check")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fixtures", help="write a bundled fixture's JSON files")
    p.add_argument("name", nargs="?")
    p.add_argument("--out", help="output directory (default: the fixture name)")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("export-dot", help="Graphviz text with orbit coloring")
    _inputs(p, params=False)
    p.add_argument("--no-color", action="store_true")
    p.set_defaults(func=cmd_export_dot)
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (QuiverError, ActionError, ScalarSyntaxError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
