"""Command-line front end.

Exit codes: 0 success, 1 a check suite failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import abelian, asymptotics as asy, checks, resurgence as rs, surgery as sg
from .cyclo import Cyclotomic
from .mtc import MtcData, fusion, make_mtc

log = logging.getLogger("wrtkit")

MIN_PRECISION = 15
DEFAULT_PRECISION = 30


class InputError(Exception):
    pass


@dataclass
class Config:
    precision: int = DEFAULT_PRECISION
    family: str = "su2"
    k: int | None = None
    input: str | None = None
    fmt: str = "json"
    threads: int = 1

    def __post_init__(self):
        if self.precision < MIN_PRECISION:
            raise InputError(f"precision must be >= {MIN_PRECISION} digits (got {self.precision})")
        if self.family not in ("su2", "u1"):
            raise InputError(f"unknown family {self.family!r}")
        if self.k is not None:
            if self.k < 1:
                raise InputError("level k must be >= 1")
            if self.family == "u1" and self.k % 2:
                raise InputError(f"u1 needs an even level (got k={self.k})")

    @property
    def workers(self) -> int:
        return self.threads or os.cpu_count() or 1


def resolve_precision(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("WRT_PRECISION")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"WRT_PRECISION={env!r} is not an integer") from None
    return DEFAULT_PRECISION


def parse_range(text: str) -> tuple[int, int]:
    """``a..b`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"bad level range {text!r}; use a..b") from None
    if lo < 1 or hi < lo:
        raise InputError(f"bad level range {text!r}")
    return lo, hi


def num(x, precision: int) -> str:
    with mpmath.workdps(precision + 5):
        return mpmath.nstr(mpmath.mpf(x), precision, min_fixed=-precision, max_fixed=precision)


def cnum(z, precision: int) -> list[str]:
    with mpmath.workdps(precision + 5):
        z = mpmath.mpc(z)
        return [num(z.real, precision), num(z.imag, precision)]


# ---------------------------------------------------------------------------
# mtc-table


def mtc_table(m: MtcData, precision: int) -> dict:
    ev = lambda c: cnum(c.evaluate(precision), precision)
    S = m.s_matrix(precision)
    n = m.rank
    return {
        "family": m.family,
        "level": m.level,
        "root_order": m.root_order,
        "precision": precision,
        "labels": list(m.labels),
        "central_charge": str(m.central_charge),
        "qdims": [{"exact": q.to_str(), "value": ev(q)} for q in m.qdims],
        "twists": [{"exact": t.to_str(), "value": ev(t)} for t in m.twists],
        "s_unnorm": [[s.to_str() for s in row] for row in m.s_unnorm],
        "S": [[cnum(S[i, j], precision) for j in range(n)] for i in range(n)],
        "T": [{"exact": t.to_str(), "order": t.order, "value": ev(t)} for t in m.t_diag],
        "total_dim_sq": {"exact": m.total_dim_sq.to_str(), "value": ev(m.total_dim_sq)},
        "kappa": {"exact_unnormalized": m.kappa_unnorm.to_str(), "value": cnum(m.kappa(precision), precision)},
        "fusion": fusion(m, precision),
    }


def parse_mtc_table(data: dict) -> dict:
    """Exact fields of an ``mtc-table`` JSON document as Cyclotomic values."""
    N = data["root_order"]
    rd = lambda s, order=N: Cyclotomic.from_str(order, s)
    return {
        "qdims": [rd(q["exact"]) for q in data["qdims"]],
        "twists": [rd(t["exact"]) for t in data["twists"]],
        "s_unnorm": [[rd(s) for s in row] for row in data["s_unnorm"]],
        "t_diag": [rd(t["exact"], t["order"]) for t in data["T"]],
        "total_dim_sq": rd(data["total_dim_sq"]["exact"]),
        "kappa_unnorm": rd(data["kappa"]["exact_unnormalized"]),
        "fusion": data["fusion"],
    }


def mtc_table_csv(table: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "i", "j", "exact", "re", "im"])
    for i, q in enumerate(table["qdims"]):
        w.writerow(["qdim", i, "", q["exact"], *q["value"]])
    for i, t in enumerate(table["twists"]):
        w.writerow(["twist", i, "", t["exact"], *t["value"]])
    for i, row in enumerate(table["S"]):
        for j, v in enumerate(row):
            w.writerow(["S", i, j, table["s_unnorm"][i][j], *v])
    for i, t in enumerate(table["T"]):
        w.writerow(["T", i, i, t["exact"], *t["value"]])
    w.writerow(["kappa", "", "", table["kappa"]["exact_unnormalized"], *table["kappa"]["value"]])
    w.writerow(["total_dim_sq", "", "", table["total_dim_sq"]["exact"], *table["total_dim_sq"]["value"]])
    return buf.getvalue()


def cmd_mtc_table(cfg: Config, args) -> int:
    if cfg.k is None:
        raise InputError("mtc-table needs -k")
    table = mtc_table(make_mtc(cfg.family, cfg.k), cfg.precision)
    emit(args, mtc_table_csv(table) if cfg.fmt == "csv" else json.dumps(table, indent=1) + "\n")
    return 0


# ---------------------------------------------------------------------------
# rt / abelian


def load_graph(spec: str) -> sg.PlumbingGraph:
    try:
        return sg.parse_manifold(spec)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read manifold {spec!r}: {exc}") from exc


def rt_record(m: MtcData, g: sg.PlumbingGraph, precision: int) -> dict:
    ld = sg.linking_matrix(g)
    z = sg.rt_invariant(m, g, precision)
    F = sg.colored_sum_F(m, g)
    return {"family": m.family, "k": m.level, "graph": g.to_dict(), "value": cnum(z, precision),
            "abs": num(abs(z), precision), "signature": ld.signature, "b1": ld.b1, "m": ld.m,
            "det": ld.det, "F": {"order": F.order, "exact": F.reduced().to_str()}, "precision": precision}


def cmd_rt(cfg: Config, args) -> int:
    if cfg.k is None:
        raise InputError("rt needs -k")
    g = load_graph(args.manifold)
    emit(args, json.dumps(rt_record(make_mtc(cfg.family, cfg.k), g, cfg.precision), indent=1) + "\n")
    return 0


def load_matrix(spec: str) -> list[list[int]]:
    """Linking matrix from ``@file.json`` with a "matrix" key, or any manifold spec."""
    if spec.startswith("@"):
        try:
            with open(spec[1:]) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {spec[1:]!r}: {exc}") from exc
        if "matrix" in data:
            B = data["matrix"]
            if not all(isinstance(r, list) and len(r) == len(B) and all(isinstance(x, int) for x in r) for r in B):
                raise InputError("matrix must be a square list of integer rows")
            if any(B[i][j] != B[j][i] for i in range(len(B)) for j in range(len(B))):
                raise InputError("matrix must be symmetric")
            return B
    return sg.plumbing_matrix(load_graph(spec))


def cmd_abelian(cfg: Config, args) -> int:
    if cfg.k is None:
        raise InputError("abelian needs -k (even)")
    cfg.family = "u1"
    cfg.__post_init__()
    B = load_matrix(args.manifold)
    p = cfg.precision
    zl = abelian.linking_form_invariant(B, cfg.k, args.domain, p)
    zs = abelian.u1_surgery_invariant(B, cfg.k, p)
    h = abelian.homology_data(B, cfg.k)
    out = {"k": cfg.k, "matrix": B, "domain": args.domain,
           "linking_form_value": cnum(zl, p), "surgery_value": cnum(zs, p),
           "ratio": cnum(zl / zs, p) if abs(zs) > mpmath.mpf(10) ** (-p // 2) else None,
           "b1": h.b1, "torsion_orders": list(h.torsion_orders), "precision": p}
    emit(args, json.dumps(out, indent=1) + "\n")
    return 0


# ---------------------------------------------------------------------------
# sweep / spectrum / borel / poincare


def cmd_sweep(cfg: Config, args) -> int:
    lo, hi = parse_range(args.k)
    g = load_graph(args.manifold)
    if cfg.family == "u1" and lo == hi and lo % 2:
        raise InputError("u1 sweep window contains no even level")
    prec = None if args.fast else cfg.precision
    sw = asy.k_sweep(cfg.family, g, lo, hi, normalization=args.normalization,
                     precision=prec, workers=cfg.workers)
    emit(args, sw.to_csv())
    return 0


def cmd_spectrum(cfg: Config, args) -> int:
    try:
        with open(args.csv) as fh:
            text = fh.read()
        sw = asy.KSweep.from_csv(text, family=cfg.family)
    except (OSError, ValueError, IndexError) as exc:
        raise InputError(f"cannot read sweep {args.csv!r}: {exc}") from exc
    snap = args.snap if args.snap else (4 * args.lens if args.lens else None)
    spec = asy.phase_spectrum(sw, threshold=args.threshold, snap_denominator=snap)
    emit(args, spec.to_json() + "\n")
    return 0


def _parse_coeff(x):
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return mpmath.mpmathify(x)
    if isinstance(x, float):
        return mpmath.mpf(x)
    if isinstance(x, list) and len(x) == 2:
        return mpmath.mpc(*(mpmath.mpmathify(str(v)) for v in x))
    raise InputError(f"bad series coefficient {x!r}")


def load_series(path: str, precision: int) -> rs.FormalSeries:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read series {path!r}: {exc}") from exc
    coeffs = data["coeffs"] if isinstance(data, dict) else data
    with mpmath.workdps(precision):
        return rs.FormalSeries(tuple(_parse_coeff(c) for c in coeffs))


def cmd_borel(cfg: Config, args) -> int:
    if bool(args.series) == bool(args.synthetic):
        raise InputError("give either a series file or --synthetic")
    if args.synthetic:
        omega = complex(args.omega.replace(" ", "")) if args.omega else None
        s = rs.synthetic_series(args.synthetic, args.n, omega)
    else:
        s = load_series(args.series, cfg.precision)
    try:
        cs = [Fraction(c) for c in args.cs.split(",")] if args.cs else []
    except ValueError:
        raise InputError(f"bad --cs list {args.cs!r}") from None
    report = rs.borel_poles(s, precision=cfg.precision)
    matches = rs.stokes_location_check(report, cs, args.tol) if cs else []
    emit(args, rs.report_json(report, matches) + "\n")
    return 0


def cmd_poincare(cfg: Config, args) -> int:
    from .pipeline import PipelineConfig, run_pipeline

    pc = PipelineConfig(k_max=args.k_max, fit_k_min=args.fit_k_min, precision=cfg.precision,
                        n_trivial=args.n_trivial, workers=cfg.workers)
    rep = run_pipeline(cfg=pc)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    emit(args, json.dumps(rep.to_dict(), indent=1) + "\n")
    return 0


# ---------------------------------------------------------------------------
# check


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (Fraction, mpmath.mpf, mpmath.mpc)):
        return str(x)
    if hasattr(x, "item"):
        return x.item()
    return x


def cmd_check(cfg: Config, args) -> int:
    names = list(checks.SUITES) if args.suite == "all" else [args.suite]
    kw = {}
    if args.k:
        lo, hi = parse_range(args.k)
        if args.suite == "modular":
            kw["k_values"] = range(lo, hi + 1)
        elif args.suite == "kirby":
            kw["k_max"] = hi
        else:
            raise InputError("-k only applies to the modular and kirby suites")
    ok = True
    results = {}
    for name in names:
        r = checks.SUITES[name](**kw)
        ok &= r.passed
        print(r.line())
        for f in r.failures:
            print(f"    fail: {f}")
        for w in r.warnings:
            print(f"    warning: {w}")
        if name == "modular":
            print("    k  unitarity   S^4        (ST)^3     arg kappa")
            for k, row in r.details["table"].items():
                print(f"    {k:<2d} {row['unitarity_dev']:.2e}  {row['s4_dev']:.2e}  "
                      f"{row['st3_residual']:.2e}  {row['kappa_arg_dev']:.2e}")
        results[name] = {"passed": r.passed, "elapsed": r.elapsed, "failures": r.failures,
                         "warnings": r.warnings, "details": _jsonable(r.details)}
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=1, default=str)
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def emit(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="decimal digits (default $WRT_PRECISION or 30)")
    common.add_argument("--family", default="su2", choices=["su2", "u1"])
    common.add_argument("--threads", type=int, default=1, help="worker processes (0 = all CPUs)")
    common.add_argument("-o", "--output", help="write to file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="wrtkit", description="Quantum invariants of plumbed 3-manifolds.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mtc-table", parents=[common], help="S, T, twists, fusion of a modular category")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.set_defaults(func=cmd_mtc_table)

    s = sub.add_parser("rt", parents=[common], help="surgery invariant of a manifold")
    s.add_argument("manifold")
    s.add_argument("-k", type=int, required=True)
    s.set_defaults(func=cmd_rt)

    s = sub.add_parser("abelian", parents=[common], help="U(1) linking-form and surgery invariants")
    s.add_argument("manifold", help="manifold spec, or @file.json with a 'matrix' key")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--domain", choices=["flat", "h1_mod_k"], default="flat")
    s.set_defaults(func=cmd_abelian)

    s = sub.add_parser("sweep", parents=[common], help="invariant over a range of levels (CSV)")
    s.add_argument("manifold")
    s.add_argument("--k", required=True, help="inclusive range a..b")
    s.add_argument("--normalization", choices=["raw", "divided-by-S3"], default="raw")
    s.add_argument("--fast", action="store_true", help="double precision evaluation")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("spectrum", parents=[common], help="DFT peaks of a sweep CSV (JSON)")
    s.add_argument("csv")
    s.add_argument("--threshold", type=float, default=0.05)
    s.add_argument("--snap", type=int, default=None, help="snap peaks to this denominator")
    s.add_argument("--lens", type=int, default=None, help="lens order p; snaps to 4p")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("borel", parents=[common], help="Borel-Pade singularities of a series (JSON)")
    s.add_argument("series", nargs="?", help="JSON list of coefficients")
    s.add_argument("--synthetic", choices=["factorial", "alternating", "planted"])
    s.add_argument("--omega", help="planted singularity, e.g. 0.3+0.4j")
    s.add_argument("--n", type=int, default=20)
    s.add_argument("--cs", help="comma-separated Chern-Simons values, e.g. 0,1/2")
    s.add_argument("--tol", type=float, default=0.02)
    s.set_defaults(func=cmd_borel)

    s = sub.add_parser("poincare", parents=[common], help="full asymptotic pipeline on the Poincare sphere")
    s.add_argument("--k-max", type=int, default=200)
    s.add_argument("--fit-k-min", type=int, default=100)
    s.add_argument("--n-trivial", type=int, default=8)
    s.set_defaults(func=cmd_poincare)

    s = sub.add_parser("check", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=[*checks.SUITES, "all"])
    s.add_argument("-k", default=None, help="level range for modular/kirby, a..b")
    s.add_argument("--json", help="write detailed results here")
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = Config(precision=resolve_precision(args.precision), family=args.family,
                     k=getattr(args, "k", None) if isinstance(getattr(args, "k", None), int) else None,
                     fmt=getattr(args, "format", "json"), threads=args.threads)
        return args.func(cfg, args)
    except (InputError, sg.GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
