"""Command-line interface: spec files in, JSON (or text/TSV) reports out.

Exit codes: 0 ok, 2 spec or usage error, 3 numerical failure,
4 hypothesis not verified.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import catalog
from .classifier import Assertions, h_verdict, h_verdict_sum
from .conditions import (
    ANCHORS,
    CheckConfig,
    GrowthFunctionFamily,
    Status,
    Verdict,
    bg_indices,
    check_cba,
    check_hw,
    check_kf,
    check_loglog_local,
    check_nd,
    check_rao,
    check_repsi_growth,
    check_s,
    check_sym,
    check_thm25,
    check_thm26,
    check_type_alpha_beta,
    nu_alpha_verdict,
    pro123_limit,
)
from .errors import (
    HypothesisNotVerified,
    LevyError,
    NumericalError,
    SpecError,
    UnknownName,
    Unsupported,
)
from .exponent import ExponentHandle
from .model import (
    INF,
    Atoms,
    FiniteMeasure,
    LevyMeasure,
    LogSingularDensity,
    PowerSumDensity,
    Reflected,
    ScaledRestriction,
    StablePowerDensity,
    TypeAlphaBetaDensity,
    decompose_pro35,
    decompose_thm25,
    signed_first_moment,
    validate_triplet,
)

EXIT_OK, EXIT_SPEC, EXIT_NUMERIC, EXIT_HYPOTHESIS = 0, 2, 3, 4


class UsageError(LevyError):
    pass


# ---------------------------------------------------------------------------
# spec files

def _num(v, what):
    if isinstance(v, bool):
        raise SpecError(f"{what}: expected a number")
    if isinstance(v, (int, float)):
        return float(v)
    if v in ("inf", "+inf", "Infinity"):
        return INF
    if v in ("-inf", "-Infinity"):
        return -INF
    raise SpecError(f"{what}: expected a number, got {v!r}")


def _cutoff(v):
    return INF if v is None else _num(v, "cutoff")


def _keys(d, required, optional=(), what="object"):
    if not isinstance(d, dict):
        raise SpecError(f"{what}: expected an object")
    extra = set(d) - set(required) - set(optional)
    if extra:
        raise SpecError(f"{what}: unknown key(s) {sorted(extra)}")
    missing = [k for k in required if k not in d]
    if missing:
        raise SpecError(f"{what}: missing key(s) {missing}")


def parse_component(d):
    if not isinstance(d, dict) or "type" not in d:
        raise SpecError("component: expected an object with a 'type'")
    kind = d["type"]
    body = {k: v for k, v in d.items() if k != "type"}
    w = f"component {kind!r}"
    if kind == "stable_power":
        _keys(body, ["alpha"], ["c_plus", "c_minus", "cutoff"], w)
        alpha = _num(body["alpha"], "alpha")
        if not 0 < alpha < 2:
            raise SpecError("stable_power: alpha must lie in (0, 2)")
        return StablePowerDensity(alpha, _num(body.get("c_plus", 0.0), "c_plus"),
                                  _num(body.get("c_minus", 0.0), "c_minus"),
                                  _cutoff(body.get("cutoff", 1.0)))
    if kind == "log_singular":
        _keys(body, ["c", "delta"], (), w)
        return LogSingularDensity(_num(body["c"], "c"), _num(body["delta"], "delta"))
    if kind == "atoms":
        _keys(body, ["atoms"], (), w)
        pts = []
        for a in body["atoms"]:
            _keys(a, ["x", "w"], (), "atom")
            x = a["x"] if isinstance(a["x"], list) else [a["x"]]
            pts.append((tuple(_num(v, "x") for v in x), _num(a["w"], "w")))
        if not pts:
            raise SpecError("atoms: empty list")
        return Atoms(tuple(pts))
    if kind == "type_alpha_beta":
        _keys(body, ["rho", "alpha", "beta", "c"], ["cutoff"], w)
        terms = []
        for t in body["rho"]:
            _keys(t, ["coef", "index"], (), "rho term")
            terms.append((_num(t["coef"], "coef"), _num(t["index"], "index")))
        return TypeAlphaBetaDensity(PowerSumDensity(tuple(terms)),
                                    _num(body["alpha"], "alpha"),
                                    _num(body["beta"], "beta"), _num(body["c"], "c"),
                                    _cutoff(body.get("cutoff", 1.0)))
    if kind == "scaled_restriction":
        _keys(body, ["inner", "k", "lo", "hi"], (), w)
        return ScaledRestriction(parse_component(body["inner"]), _num(body["k"], "k"),
                                 _num(body["lo"], "lo"), _num(body["hi"], "hi"))
    if kind == "reflected":
        _keys(body, ["inner"], (), w)
        return Reflected(parse_component(body["inner"]))
    raise SpecError(f"unknown component type {kind!r}")


def parse_measure(d):
    if d is None:
        return LevyMeasure()
    _keys(d, ["components"], (), "levy_measure")
    return LevyMeasure(tuple(parse_component(c) for c in d["components"]))


def parse_spec(doc):
    """``(triplet, assertions dict)`` from a ProcessSpecFile document."""
    _keys(doc, ["dim", "a", "Q"], ["levy_measure", "assert"], "spec")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SpecError("dim must be a positive integer")
    a = [_num(v, "a") for v in doc["a"]]
    Q = [[_num(v, "Q") for v in row] for row in doc["Q"]]
    t = validate_triplet(a, Q, parse_measure(doc.get("levy_measure")))
    if t.dim != dim:
        raise SpecError(f"dim is {dim} but the drift has length {t.dim}")
    asserted = doc.get("assert", {})
    _keys(asserted, [], ["h_holds", "bounded_resolvent", "has_densities"], "assert")
    for k, v in asserted.items():
        if not isinstance(v, bool):
            raise SpecError(f"assert.{k} must be a boolean")
    return t, dict(asserted)


def _f(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def component_to_dict(c):
    if isinstance(c, StablePowerDensity):
        return {"type": "stable_power", "alpha": _f(c.alpha), "c_plus": _f(c.c_plus),
                "c_minus": _f(c.c_minus), "cutoff": _f(c.cutoff)}
    if isinstance(c, LogSingularDensity):
        return {"type": "log_singular", "c": _f(c.c), "delta": _f(c.delta)}
    if isinstance(c, Atoms):
        return {"type": "atoms", "atoms": [{"x": [_f(v) for v in x], "w": _f(w)}
                                           for x, w in c.points]}
    if isinstance(c, TypeAlphaBetaDensity):
        if not isinstance(c.rho, PowerSumDensity):
            raise Unsupported("only power-sum densities can be written to a spec file")
        return {"type": "type_alpha_beta",
                "rho": [{"coef": _f(k), "index": _f(i)} for k, i in c.rho.terms],
                "alpha": _f(c.alpha), "beta": _f(c.beta), "c": _f(c.c),
                "cutoff": _f(c.cutoff)}
    if isinstance(c, ScaledRestriction):
        return {"type": "scaled_restriction", "inner": component_to_dict(c.inner),
                "k": _f(c.k), "lo": _f(c.lo), "hi": _f(c.hi)}
    if isinstance(c, Reflected):
        return {"type": "reflected", "inner": component_to_dict(c.inner)}
    raise Unsupported(f"cannot serialise {type(c).__name__}")


def triplet_to_spec(t, asserted=None):
    doc = {"dim": t.dim, "a": [_f(v) for v in t.a],
           "Q": [[_f(v) for v in row] for row in t.Q],
           "levy_measure": {"components": [component_to_dict(c)
                                           for c in t.mu.components]}}
    if asserted:
        doc["assert"] = dict(asserted)
    return doc


def load_spec(ref):
    """A spec path, ``-`` for stdin, or ``preset:<name>``."""
    if ref.startswith("preset:"):
        entry = catalog.catalog_get(ref[len("preset:"):])
        return entry.triplet, dict(entry.pair_assertions)
    try:
        text = sys.stdin.read() if ref == "-" else open(ref, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {ref}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{ref}: invalid JSON at line {exc.lineno}, "
                        f"column {exc.colno}: {exc.msg}") from exc
    return parse_spec(doc)


# ---------------------------------------------------------------------------
# output

def jsonable(obj):
    if isinstance(obj, Status):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        return _f(x)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps(doc):
    return json.dumps(jsonable(doc), indent=2, allow_nan=False) + "\n"


def verdict_report(v: Verdict, cfg, name):
    return {"verdict": v.status.value, "condition": name, "case": None,
            "chain": [{"rule": tag, "anchor": anchor, "evidence": v.evidence,
                       "source": "computed"} for tag, anchor in v.citations],
            "evidence": v.evidence, "warnings": list(v.caveats),
            "config": cfg.as_dict()}


def text_report(doc):
    lines = [f"verdict: {doc['verdict']}"]
    if doc.get("condition"):
        lines[0] += f"  ({doc['condition']})"
    if doc.get("case"):
        case = doc["case"]
        lines.append(f"case: {case['case']}" + (" (reflected)" if case.get("reflected") else ""))
    if doc.get("hitting_set"):
        lines.append(f"hitting set: {doc['hitting_set']}")
    for i, e in enumerate(doc.get("chain", []), 1):
        lines.append(f"  {i}. [{e['rule']}] {e['anchor']}  <{e['source']}>")
    for w in doc.get("warnings", []):
        lines.append(f"  warning: {w}")
    return "\n".join(lines) + "\n"


def emit(doc, args):
    sys.stdout.write(text_report(doc) if getattr(args, "text", False) else dumps(doc))


# ---------------------------------------------------------------------------
# commands

def _config(args):
    return CheckConfig(zmax=args.zmax, eps_min_exp=args.eps_min_exp,
                       tol=args.tol, threads=args.threads)


def _parse_z(values, dim):
    pts = []
    for v in values:
        parts = [float(p) for p in str(v).split(",")]
        if len(parts) != dim:
            raise UsageError(f"z value {v!r} does not have {dim} coordinates")
        pts.append(parts)
    return np.array(pts)


def cmd_exponent(args):
    t, _ = load_spec(args.spec)
    cfg = _config(args)
    h = ExponentHandle(t, threads=cfg.threads)
    if args.z:
        pts = _parse_z(args.z, t.dim)
    else:
        lo, hi = math.log10(args.grid[0]), math.log10(args.grid[1])
        zs = np.logspace(lo, hi, int(args.grid[2]))
        pts = zs[:, None] if t.dim == 1 else np.outer(zs, np.eye(t.dim)[0])
    vals = h.psi_grid(pts[:, 0] if t.dim == 1 else pts)
    rows = []
    for p, v in zip(pts, np.atleast_1d(vals)):
        A = 1.0 + v.real
        rows.append({"z": [float(u) for u in p] if t.dim > 1 else float(p[0]),
                     "re": float(v.real), "im": float(v.imag),
                     "A": float(A), "B": float(abs(1.0 + v))})
    if args.format == "tsv":
        sys.stdout.write("z\tre\tim\tA\tB\n")
        for r in rows:
            z = repr(r["z"]) if t.dim == 1 else ",".join(repr(u) for u in r["z"])
            vals = "\t".join(repr(r[k]) for k in ("re", "im", "A", "B"))
            sys.stdout.write(f"{z}\t{vals}\n")
    else:
        sys.stdout.write(dumps({"rows": rows, "config": cfg.as_dict()}))
    return EXIT_OK


def _first_type_ab(t):
    for c in t.mu.components:
        if isinstance(c, TypeAlphaBetaDensity):
            return c
    raise UsageError("type-ab needs a type_alpha_beta component in the spec")


def _finite_measure(spec):
    if spec is None:
        return None
    try:
        doc = json.loads(spec)
    except json.JSONDecodeError as exc:
        raise SpecError(f"--finite-measure: invalid JSON at column {exc.colno}") from exc
    pts = []
    for p in doc:
        _keys(p, ["x", "w"], (), "finite measure atom")
        pts.append((tuple(np.atleast_1d(p["x"])), _num(p["w"], "w")))
    return FiniteMeasure(tuple(pts))


def _nu_measure(ref):
    if ref is None:
        return None
    try:
        doc = json.loads(open(ref, encoding="utf-8").read())
    except OSError as exc:
        raise UsageError(f"cannot read {ref}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{ref}: invalid JSON at line {exc.lineno}, "
                        f"column {exc.colno}: {exc.msg}") from exc
    return parse_measure(doc)


def cmd_check(args):
    t, _ = load_spec(args.spec)
    cfg = _config(args)
    cond = args.condition
    fam = GrowthFunctionFamily(args.family) if args.family else None
    if cond == "nd":
        v = check_nd(t, cfg)
    elif cond == "sym":
        v = check_sym(t, cfg)
    elif cond == "kf":
        v = check_kf(t, cfg=cfg)
    elif cond == "rao":
        v = check_rao(t, fam, cfg=cfg)
    elif cond == "cba":
        v = check_cba(t, cfg=cfg)
    elif cond == "s":
        v = check_s(t, cfg)
    elif cond == "thm25":
        if args.k is None or args.delta is None:
            raise UsageError("thm25 needs --k and --delta")
        v = check_thm25(t, args.k, args.delta, _nu_measure(args.nu), cfg)
    elif cond == "thm26":
        v = check_thm26(t, cfg)
    elif cond == "repsi-log":
        v = check_repsi_growth(t, "log", cfg=cfg)
    elif cond == "loglog":
        v = check_loglog_local(t, cfg)
    elif cond == "hw":
        v = check_hw(t, cfg)
    elif cond == "nu-alpha":
        if args.alpha is None:
            raise UsageError("nu-alpha needs --alpha")
        v = nu_alpha_verdict(t, args.alpha)
    elif cond == "bg":
        ind = bg_indices(t, cfg)
        v = Verdict(Status.HOLDS if ind.beta1pp_conclusive else Status.UNKNOWN,
                    ind.as_dict(), [("bg-indices", ANCHORS["bg-indices"])])
    elif cond == "type-ab":
        v = check_type_alpha_beta(_first_type_ab(t))
    elif cond == "pro123":
        nu = _finite_measure(args.finite_measure) or FiniteMeasure(
            ((tuple([0.0] * t.dim), 1.0),))
        v = pro123_limit(t, nu, fam, cfg)
    else:  # argparse restricts choices; kept for direct calls
        raise UsageError(f"unknown condition {cond!r}")
    emit(verdict_report(v, cfg, cond), args)
    return EXIT_OK


def _with_config(rep, cfg):
    doc = rep.as_dict()
    doc["config"] = cfg.as_dict()
    return doc


def cmd_classify(args):
    t, asserted = load_spec(args.spec)
    cfg = _config(args)
    rep = h_verdict(t, Assertions.from_dict(asserted), cfg)
    emit(_with_config(rep, cfg), args)
    return EXIT_OK


def cmd_sum(args):
    t1, a1 = load_spec(args.spec1)
    t2, _ = load_spec(args.spec2)
    cfg = _config(args)
    asserted = dict(a1)
    if args.assert_h1:
        asserted["h_holds"] = True
    if args.assert_bounded_resolvent:
        asserted["bounded_resolvent"] = True
    if args.assert_densities:
        asserted["has_densities"] = True
    rep = h_verdict_sum(t1, t2, Assertions.from_dict(asserted), cfg)
    emit(_with_config(rep, cfg), args)
    return EXIT_OK


def cmd_decompose(args):
    t, _ = load_spec(args.spec)
    cfg = _config(args)
    if args.method == "pro35":
        mu1 = _nu_measure(args.mu1)
        if mu1 is None:
            if not t.mu.atoms:
                raise UsageError("pro35 needs --mu1 when the measure has no atoms")
            mu1 = LevyMeasure((Atoms(tuple(sorted(t.mu.atoms.items()))),))
        t1 = decompose_pro35(t, mu1)
        t2 = validate_triplet(-signed_first_moment(mu1), np.zeros_like(t.Q), mu1)
        params = {"method": "pro35"}
    else:
        if args.k is None or args.delta is None:
            raise UsageError("thm25 needs --k and --delta")
        t1, t2 = decompose_thm25(t, args.k, args.delta, _nu_measure(args.nu))
        params = {"method": "thm25", "k": args.k, "delta": args.delta}
    s1, s2 = dumps(triplet_to_spec(t1)), dumps(triplet_to_spec(t2))
    paths = [f"{args.out}.1.json", f"{args.out}.2.json"] if args.out else []
    for path, text in zip(paths, (s1, s2)):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    z = np.logspace(-2, 4, 64)
    h, h1, h2 = (ExponentHandle(x) for x in (t, t1, t2))
    if t.dim == 1:
        resid = np.abs(h.psi_grid(z) - h1.psi_grid(z) - h2.psi_grid(z))
        scale_ = np.maximum(1.0, np.abs(h.psi_grid(z)))
        additivity = float(np.max(resid / scale_))
    else:
        additivity = None
    doc = {"parameters": params, "outputs": paths,
           "x1": json.loads(s1), "x2": json.loads(s2),
           "additivity_max_rel_error": additivity, "config": cfg.as_dict()}
    sys.stdout.write(dumps(doc))
    return EXIT_OK


def cmd_spec(args):
    t, asserted = load_spec(args.spec)
    sys.stdout.write(dumps(triplet_to_spec(t, asserted)))
    return EXIT_OK


def cmd_catalog(args):
    sys.stdout.write(dumps({"presets": catalog.catalog_list()}))
    return EXIT_OK


CONDITIONS = ("nd", "sym", "kf", "rao", "cba", "s", "thm25", "thm26", "repsi-log",
              "loglog", "hw", "nu-alpha", "bg", "type-ab", "pro123")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--zmax", type=float, default=1e6)
    common.add_argument("--eps-min-exp", type=int, default=40)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--text", action="store_true",
                        help="render the chain as text instead of JSON")

    p = argparse.ArgumentParser(prog="levyhunt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("exponent", parents=[common], help="evaluate psi on points")
    e.add_argument("spec")
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--z", nargs="+", help="points; n-D points as comma lists")
    g.add_argument("--grid", nargs=3, type=float, metavar=("ZMIN", "ZMAX", "N"))
    e.add_argument("--format", choices=("json", "tsv"), default="json")
    e.set_defaults(fn=cmd_exponent)

    c = sub.add_parser("check", parents=[common], help="run a single condition")
    c.add_argument("spec")
    c.add_argument("--condition", required=True, choices=CONDITIONS)
    c.add_argument("--k", type=float)
    c.add_argument("--delta", type=float)
    c.add_argument("--nu", help="levy_measure JSON file for thm25")
    c.add_argument("--alpha", type=float)
    c.add_argument("--family", choices=GrowthFunctionFamily.KINDS)
    c.add_argument("--finite-measure",
                   help='JSON list [{"x": .., "w": ..}] for pro123 (default: unit atom at 0)')
    c.set_defaults(fn=cmd_check)

    k = sub.add_parser("classify", parents=[common], help="decide (H) for one process")
    k.add_argument("spec")
    k.set_defaults(fn=cmd_classify)

    s = sub.add_parser("sum", parents=[common], help="decide (H) for X1 + X2")
    s.add_argument("spec1")
    s.add_argument("spec2")
    s.add_argument("--assert-h1", action="store_true")
    s.add_argument("--assert-bounded-resolvent", action="store_true")
    s.add_argument("--assert-densities", action="store_true")
    s.set_defaults(fn=cmd_sum)

    d = sub.add_parser("decompose", parents=[common], help="split a triplet")
    d.add_argument("spec")
    d.add_argument("--method", required=True, choices=("pro35", "thm25"))
    d.add_argument("--k", type=float)
    d.add_argument("--delta", type=float)
    d.add_argument("--nu", help="levy_measure JSON file for thm25")
    d.add_argument("--mu1", help="levy_measure JSON file for pro35 (default: all atoms)")
    d.add_argument("--out", help="write OUT.1.json and OUT.2.json")
    d.set_defaults(fn=cmd_decompose)

    n = sub.add_parser("spec", help="print the canonical form of a spec")
    n.add_argument("spec")
    n.set_defaults(fn=cmd_spec)

    cl = sub.add_parser("catalog", help="list presets")
    cl.set_defaults(fn=cmd_catalog)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except HypothesisNotVerified as exc:
        print(f"levyhunt: hypothesis not verified: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NumericalError as exc:
        print(f"levyhunt: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SpecError, UsageError, UnknownName, Unsupported, ValueError,
            TypeError, KeyError, LevyError) as exc:
        print(f"levyhunt: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
