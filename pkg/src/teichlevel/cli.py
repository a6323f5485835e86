"""Command-line front end.

    teichlevel dilog   --b B --N N --x X --n n
    teichlevel verify  --suite a,b --b B [--b B ...] --N 1,3
    teichlevel knot    {chi,sweep,volume,hlimit} --knot {4_1,5_2} ...
    teichlevel tri     {info,pachner32,gauge,check} FILE

Exit codes: 0 success, 1 failed check, 2 usage or malformed input,
3 numerical failure (pole hit, no convergence).
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import asymptotics as asy
from . import identities, partition, triangulation
from .an_core import ANPoint, Contour, ModularParam, NonConvergent
from .qdilog import EvalFailure, PoleHit, d_b, phi_b

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ parsing

def parse_complex(s: str) -> complex:
    """`re`, `re,im` or `exp:theta` (the point e^{i theta})."""
    s = s.strip()
    try:
        if s.startswith("exp:"):
            return cmath.exp(1j * float(s[4:]))
        parts = s.split(",")
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse complex value {s!r}")


def parse_int_list(s: str) -> list[int]:
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse integer list {s!r}") from None


def parse_float_list(s: str) -> list[float]:
    try:
        return [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {s!r}") from None


def make_param(b: complex, N: int) -> ModularParam:
    try:
        return ModularParam(b, N)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


@dataclass
class RunConfig:
    b: complex | None = None
    N: int = 1
    tolerances: dict = field(default_factory=dict)
    offset: float | None = None
    fmt: str = "json"
    out: str | None = None

    def param(self) -> ModularParam:
        return make_param(self.b, self.N)

    def record(self) -> dict:
        d = asdict(self)
        if self.b is not None:
            d["b"] = [self.b.real, self.b.imag]
        return d


# ------------------------------------------------------------------ reports

def _num(v: float) -> str:
    return repr(float(v))


def render(config: dict, rows: list[dict], residuals: list[dict], passed: bool, fmt: str) -> str:
    if fmt == "csv":
        if not rows:
            return ""
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _num(v) if isinstance(v, float) else v for k, v in r.items()})
        return buf.getvalue()
    doc = {"tool_version": __version__, "config": config, "rows": rows,
           "residuals": residuals, "passed": passed}
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, Fraction):
        return str(o)
    if hasattr(o, "tolist"):
        return o.tolist()
    return str(o)


def emit(cfg: RunConfig, rows, residuals, passed, stdout) -> None:
    text = render(cfg.record(), rows, residuals, passed, cfg.fmt)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def write_plot_data(path: Path, rows: list[dict], plot: bool, title: str) -> list[str]:
    """Write (b, value, err) CSV next to the report; optionally render a PNG."""
    written = []
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["b", "value", "err"])
        for r in rows:
            w.writerow([_num(r["b_re"]), _num(math.hypot(r["re"], r["im"])), _num(r["err"])])
    written.append(str(path))
    if plot:
        try:
            import matplotlib
            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            raise UsageError("--plot needs matplotlib (pip install 'artifact[plot]')") from None
        bs = [r["b_re"] for r in rows]
        ys = [2 * math.pi * r["b_re"] ** 2 * r["N"] * math.log(max(math.hypot(r["re"], r["im"]), 1e-300))
              for r in rows]
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot([b * b for b in bs], ys, "o-")
        ax.set_xlabel("b^2")
        ax.set_ylabel("2 pi b^2 N log|value|")
        ax.set_title(title)
        fig.tight_layout()
        png = path.with_suffix(".png")
        fig.savefig(png, dpi=120)
        plt.close(fig)
        written.append(str(png))
    return written


# ------------------------------------------------------------------ dilog

def cmd_dilog(args, stdout) -> int:
    cfg = RunConfig(parse_complex(args.b), args.N, fmt=args.format, out=args.out)
    p = cfg.param()
    x = parse_complex(args.x)
    val = d_b(ANPoint(x, args.n % p.N, p.N), p)
    rep = "strip integral + difference ladder" if p.is_real_b else "q-Pochhammer product ratio"
    row = {"b_re": p.b.real, "b_im": p.b.imag, "N": p.N, "x_re": x.real, "x_im": x.imag,
           "n": args.n % p.N, "re": val.real, "im": val.imag, "representation": rep}
    if p.N == 1:
        ph = phi_b(x, p)
        row.update(phi_re=ph.real, phi_im=ph.imag)
    if args.out:
        emit(cfg, [row], [], True, stdout)
    stdout.write(f"{val.real!r} {val.imag!r}\n")
    stdout.write(f"# representation: {rep}\n")
    return EXIT_OK


# ------------------------------------------------------------------ verify

def cmd_verify(args, stdout) -> int:
    names = [s for s in args.suite.split(",") if s]
    unknown = [n for n in names if n not in identities.SUITE]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}; known: {', '.join(identities.SUITE)}")
    Ns = parse_int_list(args.N) if args.N else list(identities.DEFAULT_N)
    bs = [parse_complex(b) for b in args.b] if args.b else list(identities.DEFAULT_B)
    grid = [make_param(b, N) for b in bs for N in Ns]
    tol = {n: args.tol for n in names} if args.tol else None
    reports = identities.run_suite(names, grid, tol, workers=args.workers)
    cfg = RunConfig(None, 0, {"all": args.tol} if args.tol else {}, fmt=args.format, out=args.out)
    rows = [{"name": r.name, "b_re": r.params["b"][0], "b_im": r.params["b"][1], "N": r.params["N"],
             "max_residual": r.max_residual, "points": r.points_checked, "passed": r.passed}
            for r in reports]
    passed = all(r.passed for r in reports)
    config = cfg.record() | {"suites": names, "N": Ns, "b": [[b.real, b.imag] for b in bs]}
    text = render(config, rows, [r.as_dict() for r in reports], passed, cfg.fmt)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
        for r in rows:
            stdout.write(f"{'PASS' if r['passed'] else 'FAIL'} {r['name']} b=({r['b_re']:.6g},{r['b_im']:.6g}) "
                         f"N={r['N']} residual={r['max_residual']:.3e}\n")
    else:
        stdout.write(text)
    return EXIT_OK if passed else EXIT_FAIL


# ------------------------------------------------------------------ knot

KNOTS = {"4_1": partition.chi_41, "5_2": partition.chi_52}


def _knot_row(knot, p, lam, res) -> dict:
    return {"knot": knot, "N": p.N, "b_re": p.b.real, "b_im": p.b.imag, "lambda": lam,
            "re": res.value.real, "im": res.value.imag, "err": res.err_estimate, "nodes": res.nodes_used}


def _chi_task(knot, b, N, x, lam, offset, rel_tol):
    p = ModularParam(b, N)
    contour = None if offset is None else Contour(offset, rel_tol=rel_tol)
    return _knot_row(knot, p, lam, KNOTS[knot](x, lam, p, contour))


def _sweep(args, bs, N) -> list[dict]:
    x = parse_complex(args.x)
    tasks = [(args.knot, b, N, x, args.lam, args.offset, args.rel_tol) for b in bs]
    for b in bs:
        make_param(b, N)
    if args.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(args.workers) as ex:
            return list(ex.map(_chi_task, *zip(*tasks)))
    return [_chi_task(*t) for t in tasks]


def _plot_path(args) -> Path | None:
    if args.plot_data:
        return Path(args.plot_data)
    if args.out:
        o = Path(args.out)
        return o.with_name(o.stem + ".plot.csv")
    if args.plot:
        return Path(f"{args.knot}_{args.cmd}.plot.csv")
    return None


def cmd_knot(args, stdout) -> int:
    if args.knot not in KNOTS:
        raise UsageError(f"unknown knot {args.knot!r}; expected 4_1 or 5_2")
    cfg = RunConfig(None, args.N, {"rel_tol": getattr(args, "rel_tol", None)}, getattr(args, "offset", None),
                    args.format, args.out)
    config = cfg.record() | {"knot": args.knot, "subcommand": args.cmd, "x": getattr(args, "x", None),
                             "lambda": getattr(args, "lam", None)}
    residuals: list[dict] = []
    passed = True

    if args.cmd == "chi":
        b = parse_complex(args.b)
        config["b"] = [b.real, b.imag]
        rows = _sweep(args, [b], args.N)
    elif args.cmd in ("sweep", "volume"):
        bs = [parse_complex(s) for s in args.b_list.split(",")] if "exp:" in args.b_list \
            else [complex(v) for v in parse_float_list(args.b_list)]
        config["b_list"] = [[b.real, b.imag] for b in bs]
        rows = _sweep(args, bs, args.N)
        if args.cmd == "volume":
            if any(b.imag for b in bs):
                raise UsageError("volume fits need real b")
            samples = [(r["b_re"], math.hypot(r["re"], r["im"])) for r in rows]
            fit = asy.extract_volume(samples, args.N, b4=args.b4, pure=args.pure)
            ref = asy.VOL_41 if args.knot == "4_1" else asy.volume_52()
            rel = abs(fit.volume - ref) / ref
            passed = rel <= args.tol
            residuals.append({"name": "volume", "model": fit.model, "fitted": fit.volume,
                              "reference": ref, "rel_error": rel, "coeffs": list(fit.coeffs),
                              "fit_residual": fit.residual, "tol": args.tol})
            stdout_note = f"volume {fit.volume:.7f} reference {ref:.7f} rel_error {rel:.3e}\n"
        pp = _plot_path(args)
        if pp is not None:
            config["plot_files"] = write_plot_data(pp, rows, args.plot, f"{args.knot}, N={args.N}")
    elif args.cmd == "hlimit":
        b = parse_complex(args.b)
        p = make_param(b, args.N)
        seq = [v / p.sqrtN for v in parse_float_list(args.a0_list)]
        try:
            fn = partition.h_limit_41 if args.knot == "4_1" else partition.h_limit_52
            res = fn(seq, p)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rows = [{"knot": args.knot, "N": p.N, "b_re": p.b.real, "b_im": p.b.imag, "a0": t,
                 "re": complex(v).real, "im": complex(v).imag, "rel_residual": r}
                for t, v, r in zip(res.a0, res.values, res.residuals)]
        passed = res.rel_error <= args.tol
        residuals.append({"name": "hlimit", "extrapolated": res.extrapolated, "rhs": res.rhs,
                          "rel_error": res.rel_error, "modulus_only": res.modulus_only, "tol": args.tol})
        stdout_note = f"extrapolated rel_error {res.rel_error:.3e}\n"
    else:  # pragma: no cover - argparse enforces the choices
        raise UsageError(args.cmd)

    text = render(config, rows, residuals, passed, cfg.fmt)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
        if args.cmd in ("volume", "hlimit"):
            stdout.write(stdout_note)
    else:
        stdout.write(text)
    return EXIT_OK if passed else EXIT_FAIL


# ------------------------------------------------------------------ tri

def _load_tri(path: str):
    try:
        return triangulation.load(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (triangulation.MalformedGluing, ValueError) as exc:
        raise UsageError(f"malformed triangulation {path}: {exc}") from None


def _tri_info_rows(X) -> list[dict]:
    rows = []
    for i, e in enumerate(X.edges):
        w = triangulation.weight_pi(X, i)
        rows.append({"edge": e, "weight_pi": str(w), "weight": float(w) * math.pi,
                     "balanced": triangulation.is_balanced(X, None, i),
                     "boundary": i in X.boundary_edges()})
    return rows


def cmd_tri(args, stdout) -> int:
    X = _load_tri(args.file)
    cfg = RunConfig(None, X.N, fmt=args.format, out=args.out)
    config = cfg.record() | {"subcommand": args.cmd, "file": args.file}
    passed = True
    residuals: list[dict] = []
    if args.cmd == "info":
        rows = _tri_info_rows(X)
        v, e, f, t = X.census
        residuals.append({"census": [v, e, f, t], "fully_balanced": triangulation.is_fully_balanced(X)})
        if not cfg.out and cfg.fmt == "json":
            stdout.write(f"census {v}/{e}/{f}/{t}\n")
    elif args.cmd == "check":
        slack = triangulation.shape_polytope_slack(X)
        h2 = triangulation.h2_vanishes(X)
        passed = slack > 0 and h2
        rows = [{"polytope_slack": slack, "h2_vanishes": h2, "admissible": passed}]
        stdout.write(f"admissible: {'true' if passed else 'false'}\n")
    elif args.cmd == "pachner32":
        try:
            r = triangulation.pachner_32_full(X, X.shape(), args.edge)
        except triangulation.NotBalanced as exc:
            stdout.write(f"NotBalanced: {exc}\n")
            return EXIT_FAIL
        except (triangulation.BadStar, triangulation.UnknownEdge) as exc:
            stdout.write(f"{type(exc).__name__}: {exc}\n")
            return EXIT_FAIL
        text = triangulation.dumps(r.manifold, r.shape)
        dest = args.output or (str(Path(args.file).with_suffix("")) + ".p32.tri")
        Path(dest).write_text(text, encoding="utf-8")
        Y = triangulation.loads(text)
        rows = [{"old_edge": f"e{k}", "new_edge": f"e{v}",
                 "old_weight_pi": str(triangulation.weight_pi(X, k)),
                 "new_weight_pi": str(triangulation.weight_pi(Y, v))} for k, v in sorted(r.edge_map.items())]
        passed = all(row["old_weight_pi"] == row["new_weight_pi"] for row in rows)
        residuals.append({"written": dest, "census": list(Y.census), "level": r.level})
    elif args.cmd == "gauge":
        t = triangulation._parse_num(args.t)
        ls = triangulation.LeveledShape(X.shape(), 0)
        try:
            out = triangulation.gauge_transform(X, ls, {args.edge: t})
        except (triangulation.BoundaryGauge, triangulation.UnknownEdge) as exc:
            stdout.write(f"{type(exc).__name__}: {exc}\n")
            return EXIT_FAIL
        before = triangulation.weights(X)
        after = triangulation.weights(X, out.shape)
        rows = [{"edge": f"e{i}", "before": u, "after": v, "diff": abs(u - v)} for i, (u, v) in enumerate(zip(before, after))]
        passed = max(r["diff"] for r in rows) < 1e-12
        residuals.append({"level": out.level, "shape": out.shape})
        if args.output:
            Path(args.output).write_text(triangulation.dumps(X, out.shape), encoding="utf-8")
    else:  # pragma: no cover
        raise UsageError(args.cmd)
    text = render(config, rows, residuals, passed, cfg.fmt)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    elif args.cmd != "check" or cfg.fmt == "csv" or args.verbose:
        stdout.write(text)
    return EXIT_OK if passed else EXIT_FAIL


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="teichlevel", description="Level-N quantum dilogarithm and state-integral tools.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", "-o", default=None, help="report path (default: stdout)")

    d = sub.add_parser("dilog", help="evaluate D_b(x, n)")
    d.add_argument("--b", required=True)
    d.add_argument("--N", type=int, default=1)
    d.add_argument("--x", default="0")
    d.add_argument("--n", type=int, default=0)
    common(d)

    v = sub.add_parser("verify", help="run identity checks")
    v.add_argument("--suite", required=True, help=f"comma list of: {','.join(identities.SUITE)}")
    v.add_argument("--b", action="append", help="repeatable; default grid when absent")
    v.add_argument("--N", default=None, help="comma list of odd levels")
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--workers", type=int, default=1)
    common(v)

    k = sub.add_parser("knot", help="knot integrals, sweeps, volume fits, H-limits")
    ks = k.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("chi", "sweep", "volume", "hlimit"):
        s = ks.add_parser(name)
        s.add_argument("--knot", required=True)
        s.add_argument("--N", type=int, default=1)
        s.add_argument("--workers", type=int, default=1)
        common(s)
        if name in ("chi", "hlimit"):
            s.add_argument("--b", required=True)
        if name in ("chi", "sweep", "volume"):
            s.add_argument("--x", default="0")
            s.add_argument("--lambda", dest="lam", type=float, default=0.0)
            s.add_argument("--offset", type=float, default=None, help="contour Im y (default: saddle line)")
            s.add_argument("--rel-tol", type=float, default=1e-10)
        if name in ("sweep", "volume"):
            s.add_argument("--b-list", required=True)
            s.add_argument("--plot-data", default=None, help="(b, value, err) CSV path")
            s.add_argument("--plot", action="store_true", help="also render a PNG (needs matplotlib)")
        if name == "volume":
            s.add_argument("--b4", action="store_true", help="add a b^4 term to the fit")
            s.add_argument("--pure", action="store_true", help="fit the constant only")
            s.add_argument("--tol", type=float, default=0.01)
        if name == "hlimit":
            s.add_argument("--a0-list", default="0.08,0.04,0.02,0.01", help="in units of 1/sqrt N")
            s.add_argument("--tol", type=float, default=1e-3)

    t = sub.add_parser("tri", help="triangulation files")
    ts = t.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("info", "pachner32", "gauge", "check"):
        s = ts.add_parser(name)
        s.add_argument("file")
        s.add_argument("--verbose", action="store_true")
        common(s)
        if name in ("pachner32", "gauge"):
            s.add_argument("--edge", required=True)
            s.add_argument("--output", default=None, help="transformed triangulation path")
        if name == "gauge":
            s.add_argument("--t", required=True, help="gauge value in units of pi")
    return ap


COMMANDS = {"dilog": cmd_dilog, "verify": cmd_verify, "knot": cmd_knot, "tri": cmd_tri}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except PoleHit as exc:
        stderr.write(f"pole: {exc}\n")
        return EXIT_NUMERIC
    except (NonConvergent, EvalFailure, partition.PoleOnContour, asy.NoConvergence) as exc:
        stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    except (partition.StripViolation, partition.Unbalanced, asy.IllConditioned) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
