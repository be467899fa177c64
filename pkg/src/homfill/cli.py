"""Command-line entry point: ``homfill <command> [options]``.

Exit codes: 0 success, 2 parse failure, 3 failed precondition, 4 budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass

from .builders import basic
from .builders.double import build_double, hard_cycle, inclusion_map, toy_double
from .builders.flag import build_kq
from .builders.products import product
from .builders.salvetti import salvetti_skeleton
from .complex import ComplexError, mass
from .experiments import fmt, lift_trials, run_separation
from .fileio import ParseError, dumps_chain, dumps_complex, loads_complex, loads_flag, read_chain, read_complex
from .fill import BUDGET_EXCEEDED, Budget, FillingProblem, fv_profile, fvol
from .growth import GrowthSpec, bound_margin, preceq_check, slope_fit, u_exponents
from .lift import lift_modp_cycle
from .linalg import NotACycleError, homology
from .rings import Ring, RingError
from .slices import COCHAIN_PAIRING, SUPPORT_COUNT, certify_lower_bound, check_certificate, reflect_clip

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_BUDGET = 0, 2, 3, 4


class BudgetFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    ring: Ring
    budget: Budget
    seed: int
    fmt: str
    coeff_window: int
    workers: int
    timings: bool

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if not 0 <= args.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if args.coeff_window < 1 or args.workers < 1:
            raise ValueError("--coeff-window and --workers must be positive")
        return cls(args.command, Ring.parse(args.ring), Budget(args.budget_nodes, args.budget_kernel, args.budget_secs),
                   args.seed, args.format, args.coeff_window, args.workers, args.timings)

    def echo(self) -> dict[str, str]:
        b = self.budget
        return {"command": self.command, "ring": str(self.ring), "seed": str(self.seed),
                "budget_nodes": str(b.nodes), "budget_kernel": str(b.kernel), "budget_secs": str(b.secs),
                "coeff_window": str(self.coeff_window)}


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _record(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


def _emit(cfg: RunConfig, header, rows) -> str:
    if cfg.fmt == "csv":
        return _csv(rows, header)
    return "\n".join(_record(zip(header, r)) for r in rows)


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


# -- commands ---------------------------------------------------------------------------


def cmd_build(args, cfg: RunConfig) -> str:
    kind = args.kind
    if kind == "kq":
        kb = build_kq(args.q)
        return dumps_complex(kb.cw if args.form == "cw" else kb.triangulated)
    if kind == "salvetti":
        Y = loads_flag(_read_text(args.flag))
        return dumps_complex(salvetti_skeleton(Y, args.max_dim).complex)
    if kind == "product":
        return dumps_complex(product(read_complex(args.left), read_complex(args.right)))
    if kind == "double":
        tree = _parse_tree(args.tree)
        if args.xg is None:
            return dumps_complex(toy_double(args.length, tree).complex)
        XG, XH = read_complex(args.xg), read_complex(args.xh)
        return dumps_complex(build_double(XG, XH, inclusion_map(XH, XG), tree).complex)
    builders = {"disk": basic.grid_disk, "torus": lambda k: basic.torus(k, k),
                "klein": lambda k: basic.klein_bottle(k, k), "annulus": lambda k: basic.annulus(k, 1)}
    return dumps_complex(builders[args.shape](args.k))


def _parse_tree(text: str):
    try:
        return tuple(tuple(int(x) for x in e.split("-")) for e in text.split(","))
    except ValueError:
        raise ParseError(f"bad tree {text!r}; expected edges like 0-1,1-2") from None


def cmd_homology(args, cfg: RunConfig) -> str:
    X = read_complex(args.complex)
    degrees = [args.degree] if args.degree is not None else range(X.dimension + 1)
    rows = [(f"H{k}", str(homology(X, k, cfg.ring))) for k in degrees]
    if cfg.fmt == "record" or args.degree is not None:
        return "".join(f"{k} = {g}\n" for k, g in rows)
    return _csv(rows, ("group", "value"))


def cmd_fill(args, cfg: RunConfig) -> str:
    X = read_complex(args.complex)
    alpha = read_chain(args.chain, X)
    res = fvol(FillingProblem(alpha, cfg.ring, cfg.budget))
    out = _record([
        ("status", res.status), ("ring", cfg.ring), ("mass", fmt(res.mass)),
        ("lower_bound", fmt(res.lower_bound)), ("nodes", res.nodes),
        ("witness", dumps_chain(res.witness).strip() if res.witness is not None else "-"),
        ("complex", X.digest()),
    ])
    if res.status == BUDGET_EXCEEDED:
        raise BudgetFailure(out)
    return out


def cmd_lift(args, cfg: RunConfig) -> str:
    if args.random:
        rows = []
        for t, (X, p, alpha) in enumerate(lift_trials(cfg.seed, args.random, max_edges=args.max_edges)):
            lifted = lift_modp_cycle(X, alpha, args.method)
            rows.append((t, X.n_cells(1), p, mass(alpha), mass(lifted), p * mass(alpha)))
        return _emit(cfg, ("trial", "edges", "p", "mass", "lift_mass", "bound"), rows)
    if args.complex is None or args.chain is None:
        raise ParseError("lift needs a complex and a chain file, or --random N")
    X = read_complex(args.complex)
    return dumps_chain(lift_modp_cycle(X, read_chain(args.chain, X), args.method))


def cmd_profile(args, cfg: RunConfig) -> str:
    X = read_complex(args.complex)
    table = fv_profile(X, args.dim, cfg.ring, args.x_max, cfg.coeff_window, cfg.budget, args.mode, cfg.workers)
    head = f"# lower_bound={str(table.is_lower_bound).lower()} cycles={table.cycles}\n"
    return head + _csv([(x, fmt(m), u) for x, m, u in table.rows], ("x", "max_mass", "n_unfillable"))


def _hard_cycle_args(D, text: str, edge: int):
    a, _, b = text.partition("-")
    return hard_cycle(D, [(f"z{int(a)}", 1), (f"z{int(b)}", -1)], edge)


def cmd_certify(args, cfg: RunConfig) -> str:
    D = toy_double(args.length)
    hc = _hard_cycle_args(D, args.path, 0)
    res = fvol(FillingProblem(hc.chain, cfg.ring, cfg.budget))
    if res.status == BUDGET_EXCEEDED:
        raise BudgetFailure(f"status: {res.status}\n")
    cert = certify_lower_bound(D, hc, res.witness, args.method)
    problems = check_certificate(cert, D, hc, res.witness) if res.witness is not None else ["no witness"]
    return _record([
        ("component", cert.component), ("p", cert.p), ("wp", cert.wp), ("multiplicity", cert.multiplicity),
        ("certified_bound", cert.certified_bound), ("method", cert.method), ("orientation", cert.orientation),
        ("pairing", fmt(cert.pairing)), ("coboundary_norm", fmt(cert.coboundary_norm)),
        ("witness_mass", fmt(res.mass)), ("ring", cfg.ring), ("valid", "true" if not problems else "false"),
    ] + [("problem", p) for p in problems])


def cmd_clipfill(args, cfg: RunConfig) -> str:
    tree = _parse_tree(args.tree)
    D = toy_double(args.length, tree)
    gamma = None
    for item in args.cycle:
        e, _, span = item.partition(":")
        c = _hard_cycle_args(D, span, int(e)).chain
        gamma = c if gamma is None else gamma + c
    if gamma is None:
        raise ParseError("clipfill needs at least one --cycle edge:a-b")
    tr = reflect_clip(D, gamma, cfg.ring, cfg.budget)
    if tr.status == BUDGET_EXCEEDED:
        raise BudgetFailure(tr.status)
    rows = [tuple(fmt(v) for v in r) for r in tr.rows()]
    tail = f"# status={tr.status} total_mass={fmt(mass(tr.filling)) if tr.filling is not None else '-'}\n"
    return _emit(cfg, ("step", "leaf", "into", "mass_before", "mass_after", "status", "fill_mass"), rows) + tail


def _growth_spec(text: str) -> GrowthSpec:
    kind, _, arg = text.partition(":")
    if kind == "power":
        return GrowthSpec.power(arg)
    if kind == "stretched":
        return GrowthSpec.stretched(int(arg))
    if kind == "table":
        return GrowthSpec.table(_read_points(arg))
    raise ParseError(f"bad growth spec {text!r}; use power:a, stretched:n or table:FILE")


def _read_points(path: str):
    rows = []
    for n, row in enumerate(csv.reader(io.StringIO(_read_text(path))), start=1):
        if not row or row[0].startswith("#") or not row[0].strip().lstrip("-").replace("/", "").isdigit():
            continue
        try:
            rows.append((row[0].strip(), row[1].strip()))
        except IndexError:
            raise ParseError("expected x,y", n) from None
    return rows


def cmd_growth(args, cfg: RunConfig) -> str:
    if args.action == "exponents":
        rows = [(n, fmt(e), f"{float(e):.12f}", f"{bound_margin(n, e):.12f}")
                for n, e in enumerate(u_exponents(args.n_max), start=1)]
        return _emit(cfg, ("n", "e_n", "decimal", "bound_margin"), rows)
    if args.action == "fit":
        fit = slope_fit(_read_points(args.table))
        return _record([("slope", f"{fit.slope:.6f}"), ("intercept", f"{fit.intercept:.6f}"),
                        ("residual", f"{fit.residual:.3e}"), ("points", fit.n_points)])
    rep = preceq_check(_growth_spec(args.f), _growth_spec(args.g), args.C)
    pairs = [("holds", str(rep.holds).lower()), ("C", fmt(rep.C)), ("x_max", fmt(rep.x_max)),
             ("violating_x", fmt(rep.violating_x)), ("message", rep.message)]
    if rep.caveat:
        pairs.append(("caveat", rep.caveat))
    return _record(pairs)


def cmd_separation(args, cfg: RunConfig) -> str:
    qs = tuple(int(q) for q in args.q.split(","))
    rep = run_separation(qs, tuple(args.forms.split(",")), cfg.budget, cfg.workers, config=cfg.echo())
    return rep.to_csv(cfg.timings) if cfg.fmt == "csv" else rep.to_record(cfg.timings)


def cmd_roundtrip(args, cfg: RunConfig) -> str:
    text = _read_text(args.path)
    X = loads_complex(text)
    canon = dumps_complex(X)
    again = loads_complex(canon)
    ok = dumps_complex(again) == canon and again.digest() == X.digest()
    if args.write:
        with open(args.write, "w", encoding="utf-8") as fh:
            fh.write(canon)
    return ("true" if ok else "false") + "\n"


# -- parser -----------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("shared options")
    g.add_argument("--ring", default="Z", help="Z, Q, mod:p or scaled:q")
    g.add_argument("--budget-nodes", type=int, default=Budget.nodes)
    g.add_argument("--budget-kernel", type=int, default=Budget.kernel)
    g.add_argument("--budget-secs", type=float, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=("csv", "record"), default="csv")
    g.add_argument("--coeff-window", type=int, default=1)
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--timings", action="store_true", help="add wall-clock columns (breaks byte-identical reruns)")
    g.add_argument("-o", "--output", help="write to this file instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="homfill", description="Homological filling volumes of cellular cycles.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a complex file")
    bs = b.add_subparsers(dest="kind", required=True)
    k = bs.add_parser("kq", parents=[common])
    k.add_argument("q", type=int)
    k.add_argument("--form", choices=("cw", "flag"), default="cw")
    s = bs.add_parser("salvetti", parents=[common])
    s.add_argument("flag", help="flag complex file (vertex/edge/triangle/tetra lines)")
    s.add_argument("--max-dim", type=int, default=3)
    pr = bs.add_parser("product", parents=[common])
    pr.add_argument("left")
    pr.add_argument("right")
    d = bs.add_parser("double", parents=[common])
    d.add_argument("--xg")
    d.add_argument("--xh")
    d.add_argument("--length", type=int, default=3, help="fiber length of the toy double")
    d.add_argument("--tree", default="0-1")
    gr = bs.add_parser("grid", parents=[common])
    gr.add_argument("shape", choices=("disk", "torus", "klein", "annulus"))
    gr.add_argument("k", type=int)

    h = sub.add_parser("homology", parents=[common])
    h.add_argument("complex")
    h.add_argument("--degree", type=int)

    f = sub.add_parser("fill", parents=[common])
    f.add_argument("complex")
    f.add_argument("chain")

    li = sub.add_parser("lift", parents=[common])
    li.add_argument("complex", nargs="?")
    li.add_argument("chain", nargs="?")
    li.add_argument("--method", choices=("flow", "geodesic"), default="flow")
    li.add_argument("--random", type=int, default=0, help="run N seeded random trials instead")
    li.add_argument("--max-edges", type=int, default=40)

    p = sub.add_parser("profile", parents=[common])
    p.add_argument("complex")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--x-max", type=int, required=True)
    p.add_argument("--mode", choices=("ring", "reduction"), default="ring")

    c = sub.add_parser("certify", parents=[common])
    c.add_argument("--length", type=int, required=True)
    c.add_argument("--path", required=True, help="fan vertices a-b joined through the apex")
    c.add_argument("--method", choices=(COCHAIN_PAIRING, SUPPORT_COUNT), default=COCHAIN_PAIRING)

    cf = sub.add_parser("clipfill", parents=[common])
    cf.add_argument("--length", type=int, required=True)
    cf.add_argument("--tree", required=True)
    cf.add_argument("--cycle", action="append", default=[], help="edge:a-b, repeatable")

    g = sub.add_parser("growth")
    gs = g.add_subparsers(dest="action", required=True)
    ge = gs.add_parser("exponents", parents=[common])
    ge.add_argument("--n-max", type=int, default=10)
    gf = gs.add_parser("fit", parents=[common])
    gf.add_argument("table", help="CSV of x,y rows")
    gc = gs.add_parser("compare", parents=[common])
    gc.add_argument("f")
    gc.add_argument("g")
    gc.add_argument("--C", default=None)

    se = sub.add_parser("separation", parents=[common])
    se.add_argument("--q", default="2,3,5")
    se.add_argument("--forms", default="cw,flag")

    rt = sub.add_parser("roundtrip", parents=[common])
    rt.add_argument("path")
    rt.add_argument("--write", help="also write the canonical form here")
    return ap


COMMANDS = {
    "build": cmd_build, "homology": cmd_homology, "fill": cmd_fill, "lift": cmd_lift, "profile": cmd_profile,
    "certify": cmd_certify, "clipfill": cmd_clipfill, "growth": cmd_growth, "separation": cmd_separation,
    "roundtrip": cmd_roundtrip,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
    except (RingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        out = COMMANDS[args.command](args, cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetFailure as exc:
        print(str(exc), end="")
        print("error: budget exhausted", file=sys.stderr)
        return EXIT_BUDGET
    except (ComplexError, NotACycleError, RingError, ValueError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
