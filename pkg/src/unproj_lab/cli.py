"""``unproj-lab`` command line.

Subcommands: invariants, pei, unproject, family, reproduce, sweep.  Ideal
files look like::

    # comments start with '#'
    ring: x0 x1 x2 x3 over 32003
    point: 1 0 0 0          (optional)
    a: x2^2                 (optional, unproject only)
    f: x1                   (optional, unproject only)
    gens:
    x0*x2 - x1^2
    ...

Exit codes: 0 ok, 1 reproduce mismatch, 2 parse error or missing file,
3 computation aborted (timeout), 4 not a fake linear form, 5 family
constraint violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import families, pei, unproj
from .groebner import ComputationAborted, Ideal, same_ideal
from .homalg import BettiTable, betti_invariants, hilbert
from .polyring import DEFAULT_PRIME, GREVLEX, LEX, ParseError, PolyRing, parse_polynomial

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_ABORT, EXIT_NOT_FAKE, EXIT_CONSTRAINT = 0, 1, 2, 3, 4, 5
CSV_COLUMNS = ["family", "k", "d", "e", "char", "seed", "dim", "deg", "reg", "pd", "ms"]


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# ideal files

@dataclass
class IdealFile:
    names: tuple
    char: int
    gens: list = field(default_factory=list)      # polynomial strings
    point: list | None = None
    a: str | None = None
    f: str | None = None

    def ring(self, char=None, order="grevlex") -> PolyRing:
        c = self.char if char is None else char
        return PolyRing(self.names, c, LEX if order == "lex" else GREVLEX)

    def ideal(self, char=None, order="grevlex") -> Ideal:
        R = self.ring(char, order)
        return Ideal(R, [parse_polynomial(g, R) for g in self.gens])

    def poly(self, which: str, char=None, order="grevlex"):
        text = getattr(self, which)
        if text is None:
            return None
        return parse_polynomial(text, self.ring(char, order))


def _parse_char(tok: str) -> int:
    if tok.upper() in ("QQ", "Q"):
        return 0
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad characteristic {tok!r}") from None


def parse_ideal_file(text: str) -> IdealFile:
    names = None
    char = DEFAULT_PRIME
    out = None
    in_gens = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        key = head.strip().lower() if sep else ""
        if key == "ring":
            body, _, ch = rest.partition(" over ")
            names = tuple(body.replace(",", " ").split())
            if not names:
                raise ParseError(f"line {lineno}: ring header lists no variables")
            if ch.strip():
                char = _parse_char(ch.strip())
            out = IdealFile(names, char)
            in_gens = False
            continue
        if out is None:
            raise ParseError(f"line {lineno}: the first entry must be 'ring: ... over CHAR'")
        if key == "point":
            try:
                out.point = [Fraction(t) for t in rest.replace(",", " ").split()]
            except ValueError:
                raise ParseError(f"line {lineno}: bad point coordinate") from None
            if len(out.point) != len(names):
                raise ParseError(f"line {lineno}: point needs {len(names)} coordinates")
        elif key in ("a", "f"):
            setattr(out, key, rest.strip())
        elif key == "gens":
            in_gens = True
            if rest.strip():
                out.gens += [g.strip() for g in rest.split(",") if g.strip()]
        elif in_gens:
            out.gens.append(line.rstrip(","))
        else:
            raise ParseError(f"line {lineno}: unexpected content {line!r}")
    if out is None:
        raise ParseError("empty ideal file")
    if not out.gens:
        raise ParseError("no generators after 'gens:'")
    # parse once now so errors surface with a line of context
    R = out.ring()
    for g in out.gens + [t for t in (out.a, out.f) if t]:
        try:
            parse_polynomial(g, R)
        except ParseError as e:
            raise ParseError(f"{g!r}: {e}") from None
    return out


def read_ideal_file(path: str) -> IdealFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", EXIT_PARSE) from None
    try:
        return parse_ideal_file(text)
    except ParseError as e:
        raise CliError(f"{path}: {e}", EXIT_PARSE) from None


def format_ideal_file(I: Ideal, point=None, a=None, f=None) -> str:
    R = I.ring
    lines = [f"ring: {' '.join(R.names)} over {R.characteristic}"]
    if point is not None:
        lines.append("point: " + " ".join(str(c) for c in point))
    if a is not None:
        lines.append(f"a: {a}")
    if f is not None:
        lines.append(f"f: {f}")
    lines.append("gens:")
    lines += [str(g) for g in I.gens]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# output helpers

def _table_obj(B: BettiTable) -> dict:
    return B.to_json_obj()


def _emit(args, obj: dict, text_lines: list) -> None:
    if args.json:
        print(json.dumps(obj, sort_keys=True, indent=2, default=str))
    else:
        print("\n".join(text_lines))


def _betti_text(B: BettiTable, args) -> list:
    return B.to_text(transposed=args.transposed_betti).splitlines()


def _invariants_obj(I: Ideal) -> tuple:
    h = hilbert(I)
    b = betti_invariants(I)
    n = I.ring.nvars
    obj = {"nvars": n, "dim": h.dim - 1, "deg": h.degree, "codim": n - h.dim,
           "reg": b.reg, "pd": b.pd_quotient, "depth": b.depth_quotient,
           "betti": _table_obj(b.table)}
    return obj, b.table


# ---------------------------------------------------------------------------
# commands

def cmd_invariants(args) -> int:
    F = read_ideal_file(args.path)
    I = F.ideal(args.char, args.order)
    obj, B = _invariants_obj(I)
    obj["input"] = args.path
    if args.csv:
        print(B.to_csv(transposed=args.transposed_betti))
        return EXIT_OK
    lines = [f"ring: {' '.join(I.ring.names)} over {I.ring.characteristic}",
             f"dim {obj['dim']}  deg {obj['deg']}  codim {obj['codim']}",
             f"reg {obj['reg']}  pd {obj['pd']}  depth {obj['depth']}",
             "Betti table of the ideal (beta_{i,j}, degree i+j):"]
    _emit(args, obj, lines + _betti_text(B, args))
    return EXIT_OK


def cmd_pei(args) -> int:
    F = read_ideal_file(args.path)
    I = F.ideal(args.char, args.order)
    point = args.point if args.point is not None else F.point
    if isinstance(point, str):
        point = [Fraction(t) for t in point.replace(",", " ").split()]
    ctx = pei.make_context(I, point)
    obj = {"x0": ctx.x0, "point": [str(c) for c in ctx.point], "K": {}, "M": {}}
    lines = [f"projection from {tuple(str(c) for c in ctx.point)}; distinguished variable {ctx.x0}"]
    K0 = pei.partial_elimination_ideal(ctx, 0)
    obj["K"]["0"] = [str(g) for g in K0.gens]
    lines.append("K_0 (projection ideal):")
    lines += ["  " + str(g) for g in K0.gens] or ["  0"]
    if args.upto == 0:
        _emit(args, obj, lines)
        return EXIT_OK
    try:
        pinv = pei.projection_invariants(ctx)
    except pei.NotGenericallyFinite as e:
        obj["generically_finite"] = False
        obj["label"] = str(e)
        _emit(args, obj, lines + [f"NOT GENERICALLY FINITE: {e}"])
        return EXIT_OK
    st = pei.stabilization(ctx)
    top = st.index if args.upto is None else min(args.upto, st.index)
    obj.update(generically_finite=True, stabilization_index=st.index, z_in_X=st.z_in_X,
               deg_map=pinv.deg_map, deg_X=pinv.deg_X, deg_Xz=pinv.deg_Xz,
               deg_tangent_cone=pinv.deg_tangent_cone,
               degree_formula=pinv.degree_formula_check)
    lines.append(f"stabilization index {st.index}; z in X: {st.z_in_X}")
    corr = f" + {pinv.deg_tangent_cone}" if st.z_in_X else ""
    lines.append(f"degree formula {pinv.deg_X} = {pinv.deg_map}*{pinv.deg_Xz}{corr}: "
                 f"{'ok' if pinv.degree_formula_check else 'FAILS'}")
    for i in range(1, top + 1):
        Ki = pei.partial_elimination_ideal(ctx, i)
        obj["K"][str(i)] = [str(g) for g in Ki.gens]
        lines.append(f"K_{i}:")
        lines += ["  " + str(g) for g in Ki.gens]
    for i in range(top + 1):
        B = pei.module_betti(ctx, i)
        obj["M"][str(i)] = _table_obj(B)
        lines.append(f"M_{i} Betti table:")
        lines += ["  " + s for s in _betti_text(B, args)]
    if top == st.index:
        dom = {}
        for i in range(st.index + 1):
            for mode in ("regularity", "projective_dimension"):
                r = pei.dominance(ctx, i, mode)
                if r.holds:
                    dom[f"{mode}:{i}"] = {"value": r.value, "verified": r.verified}
                    lines.append(f"M_{i} dominates ({mode}): predicts {r.value}, verified {r.verified}")
        obj["dominance"] = dom
        canc = pei.cancellation_report(ctx)
        obj["cancellation"] = canc.verdict
        lines.append(f"cancellation to the table of I_X: {canc.verdict}")
    _emit(args, obj, lines)
    return EXIT_OK


def cmd_unproject(args) -> int:
    F = read_ideal_file(args.path)
    if F.a is None or F.f is None:
        raise CliError(f"{args.path}: unproject needs 'a:' and 'f:' lines", EXIT_PARSE)
    I_Y = F.ideal(args.char, args.order)
    a = F.poly("a", args.char, args.order)
    f = F.poly("f", args.char, args.order)
    try:
        lam = unproj.check_fake_linear(I_Y, a, f)
    except unproj.NotFakeError as e:
        rep = e.representative
        obj = {"fake": False, "representative": str(rep)}
        _emit(args, obj, [f"NOT FAKE: a/f equals the linear form {rep} on Y"])
        return EXIT_NOT_FAKE
    U = unproj.unproject(lam, args.var, certify=True)
    tr = unproj.cor37_invariants(lam, U)
    obj = {"fake": True, "new_var": args.var, "I_X": [str(g) for g in U.I_X.gens],
           "certified": U.certified, "path": tr.path,
           "deg_X": tr.deg_X, "reg_X": tr.reg_X, "pd_X": tr.pd_X, "notes": tr.notes + U.notes}
    lines = [f"I_X in {' '.join(U.I_X.ring.names)} ({len(U.I_X.gens)} generators):"]
    lines += ["  " + str(g) for g in U.I_X.gens]
    lines += [f"certification: {k} {'ok' if v else 'FAILED'}" for k, v in U.certified.items()]
    lines.append(f"invariant transfer via {tr.path}: deg {tr.deg_X}  reg {tr.reg_X}  pd {tr.pd_X}")
    if args.direct:
        inv = unproj.invariants(U.I_X)
        obj["direct"] = {"deg": inv.deg, "reg": inv.reg, "pd": inv.pd}
        lines.append(f"direct: deg {inv.deg}  reg {inv.reg}  pd {inv.pd}")
    lines += ["note: " + n for n in obj["notes"]]
    _emit(args, obj, lines)
    return EXIT_OK


def _ints(text) -> list:
    if text is None:
        return None
    return [int(t) for t in str(text).replace(" ", "").split(",") if t]


def _spec_from_args(args) -> families.FamilySpec:
    return families.FamilySpec(args.tag, k=args.k, d=args.d, e=args.e, a=_ints(args.a),
                               b=_ints(args.b), c=_ints(args.c), m=args.m, Delta=args.Delta,
                               delta=args.delta, char=args.char if args.char is not None
                               else DEFAULT_PRIME, seed=args.seed)


def cmd_family(args) -> int:
    spec = _spec_from_args(args)
    obj = {"spec": json.loads(spec.to_json())}
    lines = [f"family {spec.to_json()}"]
    if spec.family == "thm43":
        pred = families.thm43_predictions(spec.a, spec.b, spec.c)
        families.thm43_check(spec.a, spec.b, spec.c)
        obj["predicted"] = {"reg_lb": pred["reg_lb"], "pd": pred["pd"], "alpha": pred["alpha"],
                            "rows": list(pred["rows"])}
        lines.append(f"predicted: reg >= {pred['reg_lb']} (bound {pred['reg_lb']}), pd Q/I = {pred['pd']}")
        lines.append(f"witness table rows {pred['rows']}: alpha = {pred['alpha']}")
    if spec.family == "pipeline":
        I_X, rep = families.pipeline(spec.k, spec.d, spec.e or 2, spec.char, spec.seed)
        obj["report"] = rep.to_json_obj()
        lines += [f"stage {k}: {'ok' if v else 'FAILED'}" for k, v in rep.stages.items()]
        lines.append("bounds: " + ", ".join(f"{k}={v}" for k, v in rep.bounds.items()))
        lines.append("invariants: " + ", ".join(f"{k}={v}" for k, v in rep.invariants.items()))
        _emit(args, obj, lines)
        return EXIT_OK
    if args.no_compute:
        _emit(args, obj, lines)
        return EXIT_OK
    I = spec.build()
    inv, B = _invariants_obj(I)
    obj["computed"] = inv
    lines.append(f"computed: dim {inv['dim']}  deg {inv['deg']}  reg {inv['reg']}  pd {inv['pd']}")
    if spec.family == "thm43":
        ok = inv["reg"] >= obj["predicted"]["reg_lb"] and inv["pd"] == obj["predicted"]["pd"]
        obj["bound_holds"] = ok
        lines.append(f"bound holds: {ok}")
    lines += _betti_text(B, args)
    _emit(args, obj, lines)
    return EXIT_OK


# -- reproduce ---------------------------------------------------------------

def _jsonable(v):
    # Betti dicts are keyed by (i, j) pairs, which JSON cannot carry
    if isinstance(v, dict):
        return BettiTable(v).to_json_obj()["entries"]
    return v


def _check(rows, name, got, want):
    rows.append({"check": name, "got": _jsonable(got), "expected": _jsonable(want),
                 "ok": got == want})


def reproduce_example34(char=DEFAULT_PRIME, seed=1) -> list:
    rows = []
    I, z, used = families.elliptic_quartic(seed, char)
    ctx = pei.make_context(I, z)
    tabs = pei.module_tables(ctx)
    _check(rows, "B(M_0)", tabs.get(0, BettiTable()).entries, families.EXAMPLE34_M0)
    _check(rows, "B(M_1)", tabs.get(1, BettiTable()).entries, families.EXAMPLE34_M1)
    _check(rows, "M_k = 0 for k > 1", sorted(tabs), [0, 1])
    _check(rows, "B(I_E)", betti_invariants(I).table.entries, families.EXAMPLE34_IE)
    pinv = pei.projection_invariants(ctx)
    _check(rows, "degree formula deg X = deg(pi)*deg X_z + deg PC",
           (pinv.deg_X, pinv.deg_map, pinv.deg_Xz, pinv.deg_tangent_cone), (4, 1, 3, 1))
    return rows


def example53_lambda(char=DEFAULT_PRIME):
    ex = families.example53(char)
    return ex, unproj.check_fake_linear(Ideal(ex.R, [ex.sextic]), ex.a, ex.f)


def example53_prop51(char=DEFAULT_PRIME):
    """The sextic written as y0^2 g_2 + y0 z0 g_1 + z0^2 g_0 over k[y1, z1, y2, z2]."""
    Q = PolyRing("y1 z1 y2 z2", char)
    g = [Q("z1^4"), Q("z2^3*y1 - y2^3*z1"), Q("y1^4")]
    return families.prop51(g, 0, 4, 3)


def reproduce_example53(char=DEFAULT_PRIME, full_table=True) -> list:
    rows = []
    ex, lam = example53_lambda(char)
    exp = ex.expected
    p51 = example53_prop51(char)
    _check(rows, "G equals the sextic", p51.G.to_ring(ex.R) == ex.sextic, True)
    v = families.prop51_verify(p51)
    _check(rows, "deg R/T", v["deg_RT"], exp["deg_RT"])
    _check(rows, "reg T", v["reg_T"], exp["reg_T"])
    _check(rows, "pd R/T", v["pd_RT"], exp["pd_RT"])
    U = unproj.unproject(lam, "x0", certify=True)
    _check(rows, "certification", all(U.certified.values()), True)
    tabs = pei.module_tables(U.ctx)
    dom = pei.dominance(U.ctx, 1, "regularity", verify=False)
    dpd = pei.dominance(U.ctx, 1, "projective_dimension", verify=False)
    _check(rows, "M_1 dominance route: reg X", dom.value if dom.holds else None, exp["reg_X"])
    _check(rows, "M_1 dominance route: pd S_X", dpd.value if dpd.holds else None, exp["pd_SX"])
    _check(rows, "M_i vanish for i > 1", sorted(tabs), [0, 1])
    h = hilbert(U.I_X)
    _check(rows, "deg X", h.degree, exp["deg_X"])
    st = pei.stabilization(U.ctx)
    _check(rows, "deg PC_zX", st.tangent_cone_degree, exp["deg_PCzX"])
    _check(rows, "reg of the tangent cone ideal", betti_invariants(st.K_inf).reg, exp["reg_PCzX"])
    reg_X = dom.value
    if full_table:
        b = betti_invariants(U.I_X)
        _check(rows, "reg X (direct)", b.reg, exp["reg_X"])
        _check(rows, "pd S_X (direct)", b.pd_quotient, exp["pd_SX"])
        _check(rows, "Betti table of I_X", b.table.entries, ex.table.entries)
        reg_X = b.reg
    codim = U.I_X.ring.nvars - h.dim
    bound = h.degree - codim + 1
    _check(rows, f"Eisenbud-Goto violated: reg {reg_X} > deg - codim + 1 = {bound}",
           reg_X is not None and reg_X > bound and (reg_X, bound) == (18, 17), True)
    return rows


def reproduce_example41(char=DEFAULT_PRIME) -> list:
    rows = []
    for d in (2, 3, 4):
        b = betti_invariants(families.caviglia(d, char))
        _check(rows, f"reg caviglia({d}) = d^2 - 1", b.reg, d * d - 1)
    return rows


def reproduce_pipeline(k, d, char=DEFAULT_PRIME) -> list:
    rows = []
    I_X, rep = families.pipeline(k, d, 2, char)
    for name, ok in rep.stages.items():
        _check(rows, f"stage {name}", ok, True)
    if k == 2:
        _check(rows, "deg X = 6d + 14", rep.invariants["deg"], 6 * d + 14)
    _check(rows, f"reg X >= composed bound {rep.bounds['reg_X_lb']}",
           rep.invariants["reg"] >= rep.bounds["reg_X_lb"], True)
    return rows


REPRODUCIBLE = ("example34", "example41", "example53", "pipeline-k2-dN")


def run_reproduction(name: str, char=DEFAULT_PRIME, full_table=True) -> list:
    if name == "example34":
        return reproduce_example34(char)
    if name == "example41":
        return reproduce_example41(char)
    if name == "example53":
        return reproduce_example53(char, full_table)
    if name.startswith("pipeline-k"):
        try:
            kpart, dpart = name[len("pipeline-k"):].split("-d")
            k, d = int(kpart), int(dpart)
        except ValueError:
            raise CliError(f"bad pipeline name {name!r} (use pipeline-k2-d3)", EXIT_PARSE) from None
        return reproduce_pipeline(k, d, char)
    raise CliError(f"unknown example {name!r}; choose from {', '.join(REPRODUCIBLE)}", EXIT_PARSE)


def cmd_reproduce(args) -> int:
    char = args.char if args.char is not None else DEFAULT_PRIME
    rows = run_reproduction(args.name, char, not args.dominance_only)
    ok = all(r["ok"] for r in rows)
    obj = {"name": args.name, "char": char, "pass": ok, "checks": rows}
    lines = [f"{'PASS' if r['ok'] else 'FAIL'}  {r['check']}: got {r['got']}"
             + ("" if r["ok"] else f", expected {r['expected']}") for r in rows]
    lines.append(f"{args.name}: {'PASS' if ok else 'FAIL'} ({sum(r['ok'] for r in rows)}/{len(rows)} checks)")
    _emit(args, obj, lines)
    return EXIT_OK if ok else EXIT_MISMATCH


# -- sweep -------------------------------------------------------------------

def parse_range(text):
    """'3..5' -> [3, 4, 5]; '2,4' -> [2, 4]; '7' -> [7]."""
    if text is None:
        return [None]
    out = []
    for part in str(text).split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out += list(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def sweep_row(spec_json: str) -> dict:
    """Build one family instance and measure it; runs in a worker process."""
    spec = families.FamilySpec.from_json(spec_json)
    t = time.perf_counter()
    I = spec.build()
    inv = unproj.invariants(I)
    ms = round(1000 * (time.perf_counter() - t))
    return {"family": spec.family, "k": spec.k, "d": spec.d, "e": spec.e, "char": spec.char,
            "seed": spec.seed, "dim": inv.dim, "deg": inv.deg, "reg": inv.reg, "pd": inv.pd,
            "ms": ms}


def sweep_specs(args) -> list:
    specs = []
    for k in parse_range(args.k):
        for d in parse_range(args.d):
            for e in parse_range(args.e):
                specs.append(families.FamilySpec(args.tag, k=k, d=d, e=e, char=args.char
                                                 if args.char is not None else DEFAULT_PRIME,
                                                 seed=args.seed))
    return specs


def cmd_sweep(args) -> int:
    specs = sweep_specs(args)
    payload = [s.to_json() for s in specs]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(sweep_row, payload))
    else:
        rows = [sweep_row(p) for p in payload]
    if args.json:
        print(json.dumps(rows, indent=2))
        return EXIT_OK
    buf = io.StringIO()
    w = csv.DictWriter(buf, CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r[k] is None else r[k]) for k in CSV_COLUMNS})
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _common(p):
    p.add_argument("--char", type=_parse_char, default=None,
                   help="characteristic: 0 (or QQ) for the rationals, else a prime")
    p.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--csv", action="store_true", help="Betti table as CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transposed-betti", action="store_true",
                   help="rows indexed by homological degree i (columns j)")
    p.add_argument("--timeout-s", type=float, default=None)


def _family_args(p, ranges=False):
    conv = str if ranges else int
    p.add_argument("tag", choices=families.FAMILY_TAGS)
    p.add_argument("--k", type=conv)
    p.add_argument("--d", type=conv)
    p.add_argument("--e", type=conv)
    if not ranges:
        p.add_argument("--a")
        p.add_argument("--b")
        p.add_argument("--c")
        p.add_argument("--m", type=int)
        p.add_argument("--Delta", type=int)
        p.add_argument("--delta", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unproj-lab", description="Exact unprojection laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="dim, deg, reg, pd, depth and the Betti table")
    p.add_argument("path")
    _common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("pei", help="partial elimination ideals and modules")
    p.add_argument("path")
    p.add_argument("--point", default=None, help="centre of projection, e.g. '1 0 0 0'")
    p.add_argument("--upto", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_pei)

    p = sub.add_parser("unproject", help="unprojection along the fake linear form a/f")
    p.add_argument("path")
    p.add_argument("--var", default="x0")
    p.add_argument("--direct", action="store_true", help="also resolve I_X directly")
    _common(p)
    p.set_defaults(func=cmd_unproject)

    p = sub.add_parser("family", help="build one family member and compare with predictions")
    _family_args(p)
    p.add_argument("--no-compute", action="store_true", help="predictions only")
    _common(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("reproduce", help="recompute a worked example and compare")
    p.add_argument("name", help="example34, example41, example53 or pipeline-k2-dN")
    p.add_argument("--dominance-only", action="store_true",
                   help="example53: skip the full resolution of I_X")
    _common(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", help="CSV rows over a parameter grid")
    _family_args(p, ranges=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    _common(p)
    p.set_defaults(func=cmd_sweep)
    return ap


def _on_alarm(signum, frame):
    raise ComputationAborted("time limit reached")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.timeout_s and hasattr(signal, "SIGALRM"):
        signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, args.timeout_s)
    try:
        return args.func(args)
    except CliError as e:
        print(f"unproj-lab: {e}", file=sys.stderr)
        return e.code
    except ParseError as e:
        print(f"unproj-lab: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except families.ConstraintViolation as e:
        print(f"unproj-lab: constraint violated: {e}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except ComputationAborted as e:
        print(f"unproj-lab: aborted: {e}", file=sys.stderr)
        return EXIT_ABORT
    finally:
        if args.timeout_s and hasattr(signal, "SIGALRM"):
            signal.setitimer(signal.ITIMER_REAL, 0)


if __name__ == "__main__":
    sys.exit(main())
