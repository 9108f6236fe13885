"""Batch command-line frontend.

Each subcommand parses one model description, runs one computation, and
prints a machine-readable record (json by default, csv on request).  Every
numeric field is tagged either exact or with a bracket/tolerance; output is
deterministic for fixed inputs and seed apart from the timestamp field.

Exit status: 0 success, 2 undecided or uncertified result, 1 input error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import datetime
import io
import json
import math
import re
import sys
from fractions import Fraction

from .kernel import Bracket, UpperHalfPoint, Mat2, is_exact
from . import torus as T
from . import origami as O
from . import horolab as H
from . import curvegraph as C

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNDECIDED = 2


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Parsers

_COMPLEX_RE = re.compile(
    r"^([+-]?\d+(?:\.\d+)?)?([+-]\d*(?:\.\d+)?)i$|^([+-]?\d+(?:\.\d+)?)$"
)


def parse_tau(text: str) -> UpperHalfPoint:
    """Complex in the a+bi format, no spaces; must lie in the upper half-plane."""
    m = _COMPLEX_RE.match(text.strip())
    if not m:
        raise InputError(f"cannot parse complex number {text!r}; use a+bi")
    if m.group(3) is not None:
        raise InputError(f"{text!r} has no positive imaginary part")
    re_part = float(m.group(1)) if m.group(1) else 0.0
    im_text = m.group(2)
    if im_text in ("+", "-"):
        im_text += "1"
    im_part = float(im_text)
    if not im_part > 0:
        raise InputError(f"{text!r} is not in the upper half-plane")
    return UpperHalfPoint(re_part, im_part)


def parse_curve(text: str) -> T.TorusCurve:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError as e:
        raise InputError(f"cannot parse curve {text!r}; use p,q") from e
    if math.gcd(p, q) != 1:
        raise InputError(f"curve {text!r} is not primitive (coprime p,q required)")
    return T.TorusCurve(p, q)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"cannot parse rational {text!r}") from e


def parse_perm(text: str):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise InputError(f"permutation {text!r} must be a bracketed 1-based array")
    try:
        vals = [int(x) for x in text[1:-1].split(",")]
    except ValueError as e:
        raise InputError(f"cannot parse permutation {text!r}") from e
    return vals


def parse_slope(text: str):
    text = text.strip().lower()
    if text in ("vert", "vertical", "inf"):
        return None
    return parse_rational(text)


def _foliation(curve: T.TorusCurve, weight=Fraction(1)) -> T.WeightedTorusFoliation:
    return T.WeightedTorusFoliation(weight, curve)


# ---------------------------------------------------------------------------
# Output encoding


def num_exact(v) -> dict:
    return {"value": str(Fraction(v)), "float": float(v), "exact": True}


def num_float(v, tol) -> dict:
    return {"value": float(v), "exact": False, "tolerance": float(tol)}


def num_bracket(b: Bracket) -> dict:
    return {
        "value": b.lo if b.hi == math.inf else 0.5 * (b.lo + b.hi),
        "exact": False,
        "bracket": [b.lo, b.hi],
    }


def encode(v, tol=1e-12) -> dict:
    if isinstance(v, Bracket):
        return num_bracket(v)
    if is_exact(v):
        return num_exact(v)
    return num_float(v, tol)


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, obj))


def emit(record: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    record = dict(record)
    record["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    if fmt == "json":
        json.dump(record, stream, indent=2, default=str)
        stream.write("\n")
    elif fmt == "csv":
        rows = []
        _flatten("", record, rows)
        writer = csv.writer(stream)
        writer.writerow(["key", "value"])
        for k, v in rows:
            writer.writerow([k, v])
    else:
        raise InputError(f"unknown output format {fmt!r}")


# ---------------------------------------------------------------------------
# Config file


def load_config(path: str) -> dict:
    cfg = configparser.ConfigParser()
    read = cfg.read(path)
    if not read:
        raise InputError(f"cannot read config file {path!r}")
    out = {}
    if cfg.has_section("origami"):
        sec = cfg["origami"]
        if "h" in sec:
            out["h"] = sec["h"]
        if "v" in sec:
            out["v"] = sec["v"]
        if "n" in sec:
            out["n"] = int(sec["n"])
    if cfg.has_section("job"):
        for key in ("tol", "cap", "seed", "format"):
            if key in cfg["job"]:
                out[key] = cfg["job"][key]
    return out


def _build_origami_from(args, cfg) -> O.Origami:
    h = args.h if getattr(args, "h", None) else cfg.get("h")
    v = args.v if getattr(args, "v", None) else cfg.get("v")
    if h is None or v is None:
        raise InputError("origami requires --h and --v (or a config [origami] section)")
    hp, vp = parse_perm(h), parse_perm(v)
    if "n" in cfg and cfg["n"] != len(hp):
        raise InputError(f"config n = {cfg['n']} does not match permutation length {len(hp)}")
    try:
        return O.build_origami(hp, vp)
    except ValueError as e:
        raise InputError(str(e)) from e


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (record, exit_status)


def cmd_torus_ext(args, cfg):
    tau = parse_tau(args.tau)
    f = _foliation(parse_curve(args.curve), parse_rational(args.weight))
    val = T.extremal_length(tau, f)
    rec = {
        "command": "torus-ext",
        "inputs": {"tau": args.tau, "curve": args.curve, "weight": args.weight},
        "results": {"ext": num_float(val, 1e-12)},
    }
    return rec, EXIT_OK


def cmd_torus_dist(args, cfg):
    t1, t2 = parse_tau(args.tau1), parse_tau(args.tau2)
    res = T.kerckhoff_distance(t1, t2, tol=args.tol, cap=args.cap)
    rec = {
        "command": "torus-dist",
        "inputs": {"tau1": args.tau1, "tau2": args.tau2, "tol": args.tol, "cap": args.cap},
        "results": {
            "distance": num_float(res.value, args.tol),
            "closed_form": num_float(res.closed_form, 1e-12),
            "witness_curve": f"{res.witness.p},{res.witness.q}",
            "nodes": res.nodes,
            "certified": res.certified,
        },
    }
    return rec, EXIT_OK if res.certified else EXIT_UNDECIDED


def _horospec(curve_text, level_text) -> T.HoroSpec:
    f = _foliation(parse_curve(curve_text))
    level = parse_rational(level_text)
    if not level > 0:
        raise InputError("levels must be positive")
    return T.HoroSpec.create(f, level)


def cmd_tangency(args, cfg):
    h1 = _horospec(args.curve1, args.level1)
    h2 = _horospec(args.curve2, args.level2)
    if h1.curve == h2.curve:
        raise InputError("tangency requires transverse (non-parallel) curves")
    tangent = T.tangency_check(h1, h2)
    results = {
        "tangent": tangent,
        "product": num_exact(h1.level * h2.level),
        "i_squared": num_exact(Fraction(T.intersection(h1.curve, h2.curve)) ** 2),
    }
    if tangent:
        pt = T.tangency_point(h1, h2)
        results["tangent_point"] = {
            "re": num_float(pt.x, 1e-10),
            "im": num_float(pt.y, 1e-10),
        }
    rec = {
        "command": "tangency",
        "inputs": {
            "curve1": args.curve1,
            "level1": args.level1,
            "curve2": args.curve2,
            "level2": args.level2,
        },
        "results": results,
    }
    return rec, EXIT_OK


def cmd_triple(args, cfg):
    parts = args.i.split(",")
    if len(parts) != 3:
        raise InputError("--i requires three comma-separated positive values")
    vals = [parse_rational(p) for p in parts]
    if any(not v > 0 for v in vals):
        raise InputError("all three intersection numbers must be positive")
    r, s, t = H.triple_solve(*vals)
    rec = {
        "command": "triple",
        "inputs": {"i": args.i},
        "results": {"r": num_exact(r), "s": num_exact(s), "t": num_exact(t)},
    }
    return rec, EXIT_OK


def cmd_ratio_curve(args, cfg):
    alpha, beta = parse_curve(args.alpha), parse_curve(args.beta)
    if T.intersection(alpha, beta) == 0:
        raise InputError("alpha and beta must intersect (filling pair required)")
    target = parse_rational(args.target)
    eps = parse_rational(str(args.eps)) if args.eps else Fraction(1, 1000)
    gamma = T.ratio_curve_search(alpha, beta, target, eps, budget=args.cap)
    ratio = Fraction(T.intersection(alpha, gamma), T.intersection(beta, gamma))
    rec = {
        "command": "ratio-curve",
        "inputs": {
            "alpha": args.alpha,
            "beta": args.beta,
            "target": args.target,
            "eps": str(eps),
        },
        "results": {
            "curve": f"{gamma.p},{gamma.q}",
            "ratio": num_exact(ratio),
            "error": num_exact(abs(ratio - target)),
        },
    }
    return rec, EXIT_OK


def cmd_busemann(args, cfg):
    x0, x = parse_tau(args.tau0), parse_tau(args.tau)
    f = _foliation(parse_curve(args.curve))
    be = H.TorusBackend()
    closed = T.busemann(x0, f, x)
    est = H.busemann_estimate(x0, f, x, be, tol=args.tol)
    rec = {
        "command": "busemann",
        "inputs": {"tau0": args.tau0, "curve": args.curve, "tau": args.tau, "tol": args.tol},
        "results": {
            "closed_form": num_float(closed, 1e-12),
            "limit_estimate": num_float(est.value, 2 * args.tol),
            "certified": est.certified,
            "steps": len(est.trace),
        },
    }
    return rec, EXIT_OK if est.certified else EXIT_UNDECIDED


def cmd_ball_limit(args, cfg):
    import numpy as np

    x0 = parse_tau(args.tau0)
    f = _foliation(parse_curve(args.curve))
    rng = np.random.default_rng(args.seed)
    sample = []
    while len(sample) < args.samples:
        x = UpperHalfPoint(float(rng.uniform(-3, 3)), float(math.exp(rng.uniform(-1.5, 1.5))))
        if abs(T.busemann(x0, f, x)) >= 1e-3:
            sample.append(x)
    rep = T.metric_ball_limit_check(x0, f, sample)
    inside = sum(1 for e in rep.entries if e.classification == "inside")
    outside = sum(1 for e in rep.entries if e.classification == "outside")
    rec = {
        "command": "ball-limit",
        "inputs": {"tau0": args.tau0, "curve": args.curve, "samples": args.samples, "seed": args.seed},
        "results": {
            "ok": rep.ok,
            "inside": inside,
            "outside": outside,
            "inconclusive": len(rep.inconclusive),
        },
    }
    return rec, EXIT_OK if rep.ok and not rep.inconclusive else EXIT_UNDECIDED


def cmd_origami_info(args, cfg):
    o = _build_origami_from(args, cfg)
    rec = {
        "command": "origami-info",
        "inputs": {"h": args.h or cfg.get("h"), "v": args.v or cfg.get("v")},
        "results": {
            "n": o.n,
            "area": {"value": str(o.area), "float": float(o.area), "exact": True},
            "genus": o.genus,
            "cone_orders": list(o.singularities),
            "cylinders": {
                d: [
                    {"circumference": c.circumference, "height": c.height,
                     "squares": [s + 1 for s in c.all_squares]}
                    for c in O.cylinders(o, d)
                ]
                for d in (O.HORIZONTAL, O.VERTICAL)
            },
        },
    }
    return rec, EXIT_OK


def cmd_origami_flow(args, cfg):
    o = _build_origami_from(args, cfg)
    x = O.MarkedFlatSurface.base_point(o)
    if args.kind == "geodesic":
        if args.time:
            y = O.geodesic_flow(x, t=float(parse_rational(args.param)))
        else:
            stretch = parse_rational(args.param)
            if not stretch > 0:
                raise InputError("geodesic stretch must be positive")
            y = O.geodesic_flow(x, stretch=stretch)
    else:
        y = O.horocycle_flow(x, parse_rational(args.param))
    ev, eh = O.ext_vertical(y), O.ext_horizontal(y)
    rec = {
        "command": "origami-flow",
        "inputs": {"h": args.h or cfg.get("h"), "v": args.v or cfg.get("v"),
                   "kind": args.kind, "param": args.param, "time": args.time},
        "results": {
            "ext_vertical": encode(ev),
            "ext_horizontal": encode(eh),
            "product": encode(ev * eh),
            "area_squared": num_exact(Fraction(o.n) ** 2),
        },
    }
    return rec, EXIT_OK


def _trace_from_args(o, slope_text, square, offset_text):
    slope = parse_slope(slope_text)
    if not 1 <= square <= o.n:
        raise InputError(f"square {square} out of range 1..{o.n}")
    offset = parse_rational(offset_text)
    try:
        return O.robust_trace(o, square - 1, slope, offset=offset)
    except O.SingularityHit as e:
        raise InputError(str(e)) from e


def cmd_origami_intersect(args, cfg):
    o = _build_origami_from(args, cfg)
    t1 = _trace_from_args(o, args.slope1, args.square1, args.offset1)
    t2 = _trace_from_args(o, args.slope2, args.square2, args.offset2)
    n = O.crossing_number(t1, t2)
    rec = {
        "command": "origami-intersect",
        "inputs": {
            "h": args.h or cfg.get("h"), "v": args.v or cfg.get("v"),
            "slope1": args.slope1, "square1": args.square1,
            "slope2": args.slope2, "square2": args.square2,
        },
        "results": {
            "crossings": num_exact(n),
            "holonomy1": list(t1.holonomy),
            "holonomy2": list(t2.holonomy),
        },
    }
    return rec, EXIT_OK


def cmd_growth_check(args, cfg):
    o = _build_origami_from(args, cfg)
    t = _trace_from_args(o, args.slope, args.square, args.offset)
    s_values = [float(parse_rational(p)) for p in args.s_values.split(",")]
    x = O.MarkedFlatSurface.base_point(o)
    try:
        rep = O.horocycle_growth_check(t, x, s_values)
    except ValueError as e:
        raise InputError(str(e)) from e
    rec = {
        "command": "growth-check",
        "inputs": {"h": args.h or cfg.get("h"), "v": args.v or cfg.get("v"),
                   "slope": args.slope, "square": args.square, "s_values": args.s_values},
        "results": {
            "ok": rep.ok,
            "i_vertical": encode(rep.i_vertical),
            "i_horizontal": encode(rep.i_horizontal),
            "lower_bounds": [num_float(v, 1e-12) for v in rep.lower_bounds],
            "quadratic_coefficient": num_float(rep.quad_coefficient, 1e-9),
            "fit_residual": num_float(rep.relative_residual, 1e-12),
            "violations": len(rep.violations),
        },
    }
    return rec, EXIT_OK if rep.ok else EXIT_UNDECIDED


def cmd_walsh_e(args, cfg):
    o = _build_origami_from(args, cfg)
    gamma = _trace_from_args(o, args.slope, args.square, args.offset)
    f = O.canonical_vertical_foliation(o)
    x = O.MarkedFlatSurface.base_point(o)
    val = O.walsh_E(f, gamma, x)
    rec = {
        "command": "walsh-e",
        "inputs": {"h": args.h or cfg.get("h"), "v": args.v or cfg.get("v"),
                   "slope": args.slope, "square": args.square},
        "results": {
            "E": num_exact(val),
            "components": [
                {"weight": str(w), "circumference": c.circumference}
                for w, c in f.components
            ],
        },
    }
    return rec, EXIT_OK


def cmd_curve_graph(args, cfg):
    o = _build_origami_from(args, cfg)
    traces = []
    ids = []
    for d in (O.HORIZONTAL, O.VERTICAL):
        for k, cyl in enumerate(O.cylinders(o, d)):
            traces.append(O.core_trace(o, cyl))
            ids.append(f"{d[0]}{k}")
    if args.slopes:
        for text in args.slopes.split(";"):
            slope = parse_slope(text)
            tr = O.robust_trace(o, 0, slope)
            traces.append(tr)
            ids.append(f"s{text.strip()}")
    cs = C.curve_set_from_traces(ids, traces)
    g = C.build_graph(cs)
    dist = {}
    for i, u in enumerate(ids):
        for v in ids[i + 1:]:
            d = C.graph_distance(g, u, v)
            dist[f"{u}-{v}"] = "unreachable" if d == C.UNREACHABLE else d
    rec = {
        "command": "curve-graph",
        "inputs": {"h": args.h or cfg.get("h"), "v": args.v or cfg.get("v"), "slopes": args.slopes},
        "results": {
            "vertices": C.curve_set_table(cs),
            "edges": [list(e) for e in g.edges],
            "distances": dist,
        },
    }
    return rec, EXIT_OK


def cmd_relation(args, cfg):
    if args.model == "torus":
        h1 = _horospec(args.curve1, args.level1)
        h2 = _horospec(args.curve2, args.level2)
        rel = H.classify(h1, h2, H.TorusBackend())
    elif args.model == "origami":
        o = _build_origami_from(args, cfg)
        be = H.OrigamiBackend(o)

        def pick(text, level_text):
            level = parse_rational(level_text)
            text = text.strip().lower()
            if text == "vertical":
                f = O.canonical_vertical_foliation(o)
            elif text == "horizontal":
                f = O.canonical_horizontal_foliation(o)
            elif text.startswith("vertical:"):
                k = int(text.split(":")[1])
                f = O.MulticurveFoliation((O.canonical_vertical_foliation(o).components[k],))
            elif text.startswith("horizontal:"):
                k = int(text.split(":")[1])
                f = O.MulticurveFoliation((O.canonical_horizontal_foliation(o).components[k],))
            else:
                raise InputError(
                    f"unknown foliation {text!r}; use vertical, horizontal, "
                    "vertical:<k>, or horizontal:<k>"
                )
            return H.HoroBall(f, level)

        rel = H.classify(pick(args.f1, args.level1), pick(args.f2, args.level2), be)
    else:
        raise InputError(f"unknown model {args.model!r}")
    rec = {
        "command": "relation",
        "inputs": {k: v for k, v in vars(args).items()
                   if k in ("model", "curve1", "curve2", "f1", "f2", "level1", "level2")},
        "results": {"tag": rel.tag, "detail": {k: str(v) for k, v in rel.detail.items()}},
    }
    return rec, EXIT_OK if rel.decided else EXIT_UNDECIDED


def _svg_horocycles(curve: T.TorusCurve, levels):
    """Static SVG of the horocycles HS((p,q), level) in the half-plane."""
    width, height, scale = 720, 420, 110.0
    x_min, y_max = -3.0, height / scale

    def sx(x):
        return (x - x_min) * scale

    def sy(y):
        return height - y * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="0" y1="{height}" x2="{width}" y2="{height}" stroke="black" stroke-width="2"/>',
    ]
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    for k, level in enumerate(levels):
        color = colors[k % len(colors)]
        lvl = float(level)
        if curve.q == 0:
            # horizontal foliation curve: level set is a horizontal line
            y = curve.p * curve.p / lvl
            if y <= y_max:
                parts.append(
                    f'<line x1="0" y1="{sy(y):.2f}" x2="{width}" y2="{sy(y):.2f}" '
                    f'stroke="{color}" stroke-width="1.5" fill="none"/>'
                )
        else:
            y0 = curve.q * curve.q / lvl
            cx = -curve.p / curve.q
            r = 1.0 / (2.0 * y0)
            parts.append(
                f'<circle cx="{sx(cx):.2f}" cy="{sy(r):.2f}" r="{r * scale:.2f}" '
                f'stroke="{color}" stroke-width="1.5" fill="none"/>'
            )
        parts.append(
            f'<text x="8" y="{18 * (k + 1)}" fill="{color}" font-size="13">'
            f"level {level}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts)


def cmd_torus_plot(args, cfg):
    curve = parse_curve(args.curve)
    levels = [parse_rational(p) for p in args.levels.split(",")]
    if any(not lv > 0 for lv in levels):
        raise InputError("levels must be positive")
    svg = _svg_horocycles(curve, levels)
    with open(args.out, "w") as fh:
        fh.write(svg)
    rec = {
        "command": "torus-plot",
        "inputs": {"curve": args.curve, "levels": args.levels},
        "results": {"path": args.out, "levels_drawn": len(levels)},
    }
    return rec, EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common(p):
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--config", default=None, help="INI file with [origami] and [job] sections")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)


def _add_origami_args(p):
    p.add_argument("--h", default=None, help="1-based bracketed array, e.g. [2,1,3]")
    p.add_argument("--v", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="horoteich")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("torus-ext")
    p.add_argument("--tau", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--weight", default="1")
    _add_common(p)
    p.set_defaults(fn=cmd_torus_ext)

    p = sub.add_parser("torus-dist")
    p.add_argument("--tau1", required=True)
    p.add_argument("--tau2", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_torus_dist)

    p = sub.add_parser("tangency")
    p.add_argument("--curve1", required=True)
    p.add_argument("--level1", required=True)
    p.add_argument("--curve2", required=True)
    p.add_argument("--level2", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_tangency)

    p = sub.add_parser("triple")
    p.add_argument("--i", required=True, help="i_ab,i_ag,i_bg")
    _add_common(p)
    p.set_defaults(fn=cmd_triple)

    p = sub.add_parser("ratio-curve")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--eps", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_ratio_curve)

    p = sub.add_parser("busemann")
    p.add_argument("--tau0", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--tau", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_busemann)

    p = sub.add_parser("ball-limit")
    p.add_argument("--tau0", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--samples", type=int, default=20)
    _add_common(p)
    p.set_defaults(fn=cmd_ball_limit)

    p = sub.add_parser("origami-info")
    _add_origami_args(p)
    _add_common(p)
    p.set_defaults(fn=cmd_origami_info)

    p = sub.add_parser("origami-flow")
    _add_origami_args(p)
    p.add_argument("--kind", required=True, choices=["geodesic", "horocycle"])
    p.add_argument("--param", required=True,
                   help="stretch factor (geodesic) or shear (horocycle); rational stays exact")
    p.add_argument("--time", action="store_true",
                   help="interpret a geodesic parameter as time t instead of stretch e^t")
    _add_common(p)
    p.set_defaults(fn=cmd_origami_flow)

    p = sub.add_parser("origami-intersect")
    _add_origami_args(p)
    p.add_argument("--slope1", required=True)
    p.add_argument("--square1", type=int, default=1)
    p.add_argument("--offset1", default="1/2")
    p.add_argument("--slope2", required=True)
    p.add_argument("--square2", type=int, default=1)
    p.add_argument("--offset2", default="1/3")
    _add_common(p)
    p.set_defaults(fn=cmd_origami_intersect)

    p = sub.add_parser("growth-check")
    _add_origami_args(p)
    p.add_argument("--slope", default="0")
    p.add_argument("--square", type=int, default=1)
    p.add_argument("--offset", default="1/2")
    p.add_argument("--s-values", dest="s_values", default="1,2,3,5,10,20")
    _add_common(p)
    p.set_defaults(fn=cmd_growth_check)

    p = sub.add_parser("walsh-e")
    _add_origami_args(p)
    p.add_argument("--slope", default="0")
    p.add_argument("--square", type=int, default=1)
    p.add_argument("--offset", default="1/2")
    _add_common(p)
    p.set_defaults(fn=cmd_walsh_e)

    p = sub.add_parser("curve-graph")
    _add_origami_args(p)
    p.add_argument("--slopes", default=None, help="semicolon-separated extra slopes")
    _add_common(p)
    p.set_defaults(fn=cmd_curve_graph)

    p = sub.add_parser("relation")
    p.add_argument("--model", required=True, choices=["torus", "origami"])
    p.add_argument("--curve1", default=None)
    p.add_argument("--curve2", default=None)
    p.add_argument("--f1", default=None)
    p.add_argument("--f2", default=None)
    p.add_argument("--level1", required=True)
    p.add_argument("--level2", required=True)
    _add_origami_args(p)
    _add_common(p)
    p.set_defaults(fn=cmd_relation)

    p = sub.add_parser("torus-plot")
    p.add_argument("--curve", required=True)
    p.add_argument("--levels", required=True)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_torus_plot)

    return ap


def run(argv) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        if args.tol is None:
            args.tol = float(cfg.get("tol", 1e-9))
        if args.cap is None:
            args.cap = int(cfg.get("cap", 10**6))
        if args.seed is None:
            args.seed = int(cfg.get("seed", 0))
        fmt = args.format or cfg.get("format", "json")
        if not args.tol > 0:
            raise InputError("tolerance must be positive")
        if args.cap < 1:
            raise InputError("enumeration cap must be at least 1")
        record, status = args.fn(args, cfg)
        emit(record, fmt)
        return status
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except T.EnumerationBudgetError as e:
        print(f"error: enumeration budget exhausted; lower bound {e.lower_bound}", file=sys.stderr)
        return EXIT_UNDECIDED


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
