"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import certify, thorpe
from .curvature.connection import connection_curvature, UnitFrameCurvature
from .curvature.frame import compute_frame
from .exactmath.poly import Poly
from .exactmath.rational import format_rational, parse_rational
from .metricdef.metric import MetricFormatError, PiecewiseMetric, load_metric, map_to_3L
from .metricdef.smoothness import check_smoothness
from .sturm import certify_positive, evaluate_chain, sign_changes, sturm_sequence

DIGITS = 12
_CTX = Context(prec=DIGITS, rounding=ROUND_HALF_EVEN)


class UsageError(Exception):
    pass


# -- output helpers ------------------------------------------------------------

def fmt_decimal(x: Fraction) -> str:
    """Exact rational rounded half-even to 12 significant digits, in plain notation."""
    x = Fraction(x)
    if x == 0:
        return "0"
    d = _CTX.divide(Decimal(x.numerator), Decimal(x.denominator)).normalize()
    return format(d, "f")


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


_PACKAGED = {"p2.metric.json", "p2_flipped_v3.metric.json"}


def read_metric(path: str) -> PiecewiseMetric:
    """Load a metric file; the shipped file names fall back to the packaged copies."""
    if not os.path.exists(path) and os.path.basename(path) in _PACKAGED:
        from importlib import resources
        with resources.as_file(resources.files("p2cert").joinpath("data", os.path.basename(path))) as p:
            return load_metric(p)
    return load_metric(path)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _config(args) -> certify.VerifyConfig:
    try:
        return certify.VerifyConfig(mode=args.mode, eps=args.eps, seed=args.seed, jobs=args.jobs,
                                    variant=getattr(args, "variant", "corrected"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _summary(checks: Sequence[certify.Check]) -> dict:
    return {
        "checks": [c.to_json() for c in checks],
        "overall": certify.PASS if checks and all(c.passed for c in checks) else certify.FAIL,
    }


def _report(checks: Sequence[certify.Check]) -> None:
    for c in checks:
        print(f"{c.verdict}  {c.name}", file=sys.stderr)


def _frames(m: PiecewiseMetric, piece: int | None):
    pieces = range(m.num_pieces) if piece is None else [piece]
    for p in pieces:
        if not 0 <= p < m.num_pieces:
            raise UsageError(f"piece {p} out of range 0..{m.num_pieces - 1}")
        yield compute_frame(m, p)


# -- commands ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    m = read_metric(args.metric)
    cert = certify.verify(m, _config(args))
    emit(cert.dumps(), args.out)
    for c in cert.failures():
        print(f"FAIL  {c.name}", file=sys.stderr)
    print(f"overall: {cert.overall} ({len(cert.checks)} checks)", file=sys.stderr)
    return 0 if cert.passed else 1


def cmd_replay(args) -> int:
    from .replay import replay_file
    try:
        rep = replay_file(args.certificate)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"{args.certificate}: {exc}") from None
    out = {
        "recorded_overall": rep.recorded_overall,
        "replayed_overall": rep.replayed_overall,
        "checks": len(rep.entries),
        "disagreements": [{"name": e.name, "recorded": e.recorded, "replayed": e.replayed, "issues": e.issues}
                          for e in rep.disagreements()],
    }
    emit(dump_json(out), args.out)
    return 0 if rep.agrees and rep.replayed_overall == certify.PASS else 1


def cmd_sturm(args) -> int:
    a, b = args.interval
    if not a < b:
        raise UsageError("interval needs a < b")
    p = Poly(args.coeffs, args.center)
    if p.is_zero():
        raise UsageError("the zero polynomial has no sign")
    cert = certify_positive(p, a, b)
    out = cert.to_json()
    if p.degree > 0:
        seq = sturm_sequence(p)
        out["chain"] = [[str(c) for c in t.coeffs] for t in seq.terms]
        va, vb = evaluate_chain(seq, a), evaluate_chain(seq, b)
        out["signs"] = [[(v > 0) - (v < 0) for v in va], [(v > 0) - (v < 0) for v in vb]]
        out["values"] = [[format_rational(v) for v in va], [format_rational(v) for v in vb]]
        assert [sign_changes(va), sign_changes(vb)] == out["sturm"]["sign_changes"]
    emit(dump_json(out), args.out)
    return 0


def cmd_smoothness(args) -> int:
    rep = check_smoothness(read_metric(args.metric))
    emit(dump_json(rep.to_json()), args.out)
    return 0 if rep.passed else 1


def _run_piecewise(args, fn) -> int:
    m = read_metric(args.metric)
    checks = []
    for fr in _frames(m, args.piece):
        checks += fn(fr, jobs=args.jobs)
    _report(checks)
    emit(dump_json(_summary(checks)), args.out)
    return 0 if all(c.passed for c in checks) else 1


def cmd_fatness(args) -> int:
    return _run_piecewise(args, certify.check_fatness)


def cmd_hyperfatness(args) -> int:
    return _run_piecewise(args, certify.check_hyperfatness)


def cmd_base(args) -> int:
    m = read_metric(args.metric)
    checks = []
    for fr in _frames(m, args.piece):
        checks += certify.check_base_positive(fr, jobs=args.jobs)
    try:
        checks += certify.check_endpoint_inequalities(m)
    except certify.JetError as exc:
        raise UsageError(str(exc)) from None
    _report(checks)
    emit(dump_json(_summary(checks)), args.out)
    return 0 if all(c.passed for c in checks) else 1


def cmd_minors(args) -> int:
    m = read_metric(args.metric)
    cfg = _config(args)
    checks, summary = certify.check_minors(m, cfg.mode, eps=cfg.eps, variant=cfg.variant, jobs=cfg.jobs)
    _report(checks)
    out = _summary(checks)
    out["summary"] = summary
    emit(dump_json(out), args.out)
    return 0 if all(c.passed for c in checks) else 1


def cmd_dump_curvature(args) -> int:
    m = read_metric(args.metric)
    out = []
    for fr in _frames(m, args.piece):
        oracle = UnitFrameCurvature(fr) if args.source == "oracle" else None
        comps = connection_curvature(fr, oracle, printed=args.printed, anticyclic=not args.printed)
        out.append({"interval": [format_rational(x) for x in fr.interval],
                    "components": [c.to_json() for c in comps]})
    emit(dump_json({"convention": "R_abcd = g(R(a,b)d,c)", "printed": args.printed, "pieces": out}), args.out)
    return 0


def grid_points(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    """``n + 1`` equally spaced rationals from ``lo`` to ``hi`` inclusive."""
    if n < 1:
        raise UsageError("grid must be at least 1")
    return [lo + (hi - lo) * Fraction(i, n) for i in range(n + 1)]


def _piece_of(m: PiecewiseMetric, t: Fraction) -> int:
    for p in range(m.num_pieces):
        a, b = m.interval(p)
        if a <= t <= b:
            return p
    raise ValueError(t)


def minor_series(m: PiecewiseMetric, ts: Sequence[Fraction], blocks=("A12", "A23", "A31"),
                 variant: str = "corrected") -> dict[str, list[tuple[Fraction, Fraction]]]:
    """Exact values of the leading minor coefficients at the points ``ts``."""
    leading = {}
    for p in range(m.num_pieces):
        fr = compute_frame(m, p)
        for label, block in thorpe.block_set(fr, variant=variant, labels=blocks).items():
            for ms in thorpe.leading_minors(block, max_degree=6):
                leading[(p, label, ms.k)] = ms.leading
    out: dict[str, list] = {}
    for label in blocks:
        for k in range(1, 6):
            out[f"{label} k={k}"] = [(t, leading[(_piece_of(m, t), label, k)](t)) for t in ts]
    return out


def cmd_dump_minors(args) -> int:
    m = read_metric(args.metric)
    if args.grid is None:
        out = []
        for fr in _frames(m, None):
            for label, block in thorpe.block_set(fr, variant=args.variant).items():
                for ms in thorpe.leading_minors(block, max_degree=6):
                    out.append({"interval": [format_rational(x) for x in fr.interval], "block": label,
                                "k": ms.k, "eps_degree": ms.eps_degree, "leading": ms.leading.to_json()})
        emit(dump_json(out), args.out)
        return 0
    ts = grid_points(Fraction(0), m.L, args.grid)
    series = minor_series(m, ts, variant=args.variant)
    emit(series_csv(series), args.out)
    return 0


# -- plotting ----------------------------------------------------------------------

def series_csv(series: dict[str, list[tuple[Fraction, Fraction]]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "t", "value"])
    for name, pts in series.items():
        w.writerows([name, fmt_decimal(t), fmt_decimal(v)] for t, v in pts)
    return buf.getvalue()


def _value(f, t: Fraction) -> Fraction:
    lo, hi = f.domain
    return f.derivative_at(t, 0, "left" if t == hi else "right")


def plot_series(m: PiecewiseMetric, what: str, grid: int) -> list[tuple[str, dict]]:
    """Panels of named series for ``what``; each panel is drawn separately in SVG."""
    ts = grid_points(Fraction(0), m.L, grid)
    if what in ("v", "h"):
        funcs = m.v if what == "v" else m.h
        panel = {f"{what}{i + 1}": [(t, _value(f, t)) for t in ts] for i, f in enumerate(funcs)}
        v3l, h3l = map_to_3L(m)
        f = v3l if what == "v" else h3l
        ts3 = grid_points(Fraction(0), 3 * m.L, 3 * grid)
        unrolled = {f"{what} on [0,3L]": [(t, _value(f, t)) for t in ts3]}
        if what == "v":
            # tangent at the collapsing end; an upper bound for a concave v
            slope = Fraction(4, m.ell)
            unrolled["tangent line at 3L"] = [(t, slope * (3 * m.L - t)) for t in ts3]
        return [(f"{what}_i on [0,L]", panel), (f"{what} unrolled on [0,3L]", unrolled)]
    if what == "minors":
        series = minor_series(m, ts)
        return [(f"{b}: leading minor coefficients", {k: v for k, v in series.items() if k.startswith(b)})
                for b in ("A12", "A23", "A31")]
    if what == "frame":
        panel: dict[str, list] = {}
        frames = [compute_frame(m, p) for p in range(m.num_pieces)]
        for q in ("beta", "gamma"):
            for i in (1, 2, 3):
                panel[f"{q}{i}"] = [(t, frames[_piece_of(m, t)].ratfunc(f"{q}{i}")(t)) for t in ts]
        return [("beta_i, gamma_i", panel)]
    raise UsageError(f"unknown plot {what!r}")


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def render_svg(panels: list[tuple[str, dict]], width: int = 640, height: int = 300) -> str:
    """A static SVG with one chart per panel, stacked vertically."""
    pad = 50
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height * len(panels)}" '
             f'font-family="sans-serif" font-size="11">']
    for n, (title, series) in enumerate(panels):
        y0 = n * height
        xs = [float(t) for pts in series.values() for t, _ in pts]
        ys = [float(v) for pts in series.values() for _, v in pts]
        xmin, xmax = min(xs), max(xs)
        ymin, ymax = min(ys + [0.0]), max(ys + [0.0])
        if ymax == ymin:
            ymax = ymin + 1
        sx = lambda x: pad + (x - xmin) / (xmax - xmin or 1) * (width - 2 * pad)
        sy = lambda y: y0 + height - pad - (y - ymin) / (ymax - ymin) * (height - 2 * pad)
        parts.append(f'<text x="{pad}" y="{y0 + 20}" font-size="13">{_esc(title)}</text>')
        parts.append(f'<line x1="{pad}" y1="{sy(0):.2f}" x2="{width - pad}" y2="{sy(0):.2f}" stroke="#999"/>')
        parts.append(f'<line x1="{pad}" y1="{y0 + pad}" x2="{pad}" y2="{y0 + height - pad}" stroke="#999"/>')
        for lab, y in ((fmt_decimal(Fraction(ymax).limit_denominator(10 ** 6)), ymax),
                       (fmt_decimal(Fraction(ymin).limit_denominator(10 ** 6)), ymin)):
            parts.append(f'<text x="2" y="{sy(y):.2f}">{_esc(lab[:8])}</text>')
        for lab, x in ((f"{xmin:g}", xmin), (f"{xmax:g}", xmax)):
            parts.append(f'<text x="{sx(x):.2f}" y="{y0 + height - pad + 15}">{lab}</text>')
        for k, (name, pts) in enumerate(series.items()):
            color = _COLORS[k % len(_COLORS)]
            path = " ".join(f"{sx(float(t)):.2f},{sy(float(v)):.2f}" for t, v in pts)
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
            parts.append(f'<text x="{width - pad - 120}" y="{y0 + 35 + 14 * k}" fill="{color}">{_esc(name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def cmd_plot(args) -> int:
    m = read_metric(args.metric)
    panels = plot_series(m, args.what, args.grid)
    if args.format == "csv":
        merged: dict = {}
        for _, series in panels:
            merged.update(series)
        emit(series_csv(merged), args.out)
    else:
        emit(render_svg(panels), args.out)
    return 0


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=thorpe.MODES, default="leading",
                        help="leading-order minors (the proof) or, in addition, minors at a fixed eps")
    common.add_argument("--eps", type=_rational, default=None, help="rational 0 < eps <= 1 for exact mode")
    common.add_argument("--seed", type=int, default=0, help="seed for the sampled identity checks")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    common.add_argument("--out", "-o", default=None, help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="p2cert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, metric=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if metric:
            p.add_argument("metric", help="metric JSON file")
        p.set_defaults(fn=fn)
        return p

    p = add("verify", cmd_verify, "run the full certification pipeline")
    p.add_argument("--variant", choices=thorpe.VARIANTS, default="corrected",
                   help="which (3,4) entry of the 5x5 blocks to use")
    p = add("replay", cmd_replay, "re-check a certificate file", metric=False)
    p.add_argument("certificate")
    p = add("sturm", cmd_sturm, "Sturm chain and sign verdict of one polynomial", metric=False)
    p.add_argument("coeffs", nargs="+", type=_rational, help="coefficients, lowest degree first (put -- before them if one is a negative fraction)")
    p.add_argument("--interval", nargs=2, type=_rational, required=True, metavar=("A", "B"))
    p.add_argument("--center", type=_rational, default=Fraction(0), help="polynomial is in (t - center)")
    add("smoothness", cmd_smoothness, "C2 conditions at both singular orbits and across breakpoints")
    for name, fn, help_ in (("fatness", cmd_fatness, "beta_i > 0 and gamma_i > 0"),
                            ("hyperfatness", cmd_hyperfatness, "the two hyperfatness conditions"),
                            ("base", cmd_base, "base positivity and the endpoint inequalities")):
        p = add(name, fn, help_)
        p.add_argument("--piece", type=int, default=None)
    p = add("minors", cmd_minors, "certify the leading minors of the modified curvature operator")
    p.add_argument("--variant", choices=thorpe.VARIANTS, default="corrected")
    p = add("dump-curvature", cmd_dump_curvature, "curvature components in the unit frame")
    p.add_argument("--piece", type=int, default=None)
    p.add_argument("--printed", action="store_true", help="the literal table instead of the corrected one")
    p.add_argument("--source", choices=("table", "oracle"), default="table")
    p = add("dump-minors", cmd_dump_minors, "leading minor coefficients, symbolic or on a grid (CSV)")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--variant", choices=thorpe.VARIANTS, default="corrected")
    p = add("plot", cmd_plot, "CSV or SVG data for the metric, frame or minors")
    p.add_argument("--what", choices=("v", "h", "minors", "frame"), default="v")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--grid", type=int, default=200)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    try:
        return args.fn(args)
    except (UsageError, MetricFormatError, certify.JetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
