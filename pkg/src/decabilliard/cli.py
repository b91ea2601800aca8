"""Command-line verification harness for the decagon outer billiard.

Subcommands:

  orbit      iterate one exact point under T or T' and report the halt
  verify     run the whole lemma-check suite; writes a CSV report and
             rendered figures when --out is given
  periods    enumerate the period set (or check one value) with provenance
  aperiodic  build the aperiodic-point certificate
  partition  compute a red/green partition level (JSON or SVG)
  measure    Monte-Carlo periodic-fraction statistics

All JSON/CSV payloads serialize exact values as rational-coefficient tokens
(`CycNum.token()`), never floats; floats appear only in SVG/PNG geometry.
Identical arguments produce byte-identical JSON/CSV/SVG.  Exit status is 0
only when every requested check passes.
"""

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from .billiard import Table, per_from_induced
from .cyclotomic import CycNum, ZETA, ONE
from .geometry import BoundaryError
from .returns import ReturnStructure
from . import partitions, periods, selfsim

RED = "#c0392b"
GREEN = "#27ae60"
TABLE_GREY = "#b0b0b0"

_STRUCTURE = None


def _structure():
    global _STRUCTURE
    if _STRUCTURE is None:
        _STRUCTURE = ReturnStructure()
    return _STRUCTURE


def _emit(args, text, suffix):
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _json(payload):
    return json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=1) + "\n"


def _frac(x):
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


# -- SVG ------------------------------------------------------------------------


def svg_document(polygons, size=720):
    """Deterministic SVG: polygons are (vertex list, fill, opacity) triples."""
    pts = [complex(v) for vs, _, _ in polygons for v in vs]
    if pts:
        xs = [p.real for p in pts]
        ys = [p.imag for p in pts]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        pad = 0.05 * max(x1 - x0, y1 - y0, 1e-9)
        x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    scale = size / max(x1 - x0, y1 - y0)
    h = (y1 - y0) * scale
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{h:.2f}" viewBox="0 0 {size} {h:.2f}">'
    ]
    for vs, fill, opacity in polygons:
        coords = " ".join(
            f"{(complex(v).real - x0) * scale:.3f},{(y1 - complex(v).imag) * scale:.3f}"
            for v in vs
        )
        out.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity}" '
            f'stroke="#333333" stroke-width="0.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- deterministic sample points -------------------------------------------------


def _triangle_samples(rng, a, b, c, n):
    out = []
    for _ in range(n):
        w = [rng.randint(1, 60) for _ in range(3)]
        s = Fraction(1, sum(w))
        out.append((w[0] * a + w[1] * b + w[2] * c) * s)
    return out


def _x_samples(x, n, seed=11):
    rng = random.Random(seed)
    q = x.quad
    half = n // 2
    return _triangle_samples(rng, q.A, q.B, q.E, n - half) + _triangle_samples(
        rng, q.C, q.E, q.D, half
    )


def _vprime_samples(table, n, seed=13):
    rng = random.Random(seed)
    a1 = table.A[1]
    d1 = ZETA - 1
    d2 = ZETA * ZETA - ZETA
    out = []
    for _ in range(n):
        u = Fraction(rng.randint(1, 400), 401)
        v = Fraction(rng.randint(1, 400), 401)
        out.append(a1 + u * d1 + v * d2)
    return out


# -- the verification suite -------------------------------------------------------


def _check_fixed_points(rs):
    t = rs.table
    for i in range(1, 5):
        if t.step_T_prime(rs.O[i])[0] != rs.O[i]:
            return False, f"O_{i} not fixed"
    return True, "T'(O_i) = O_i for i = 1..4"


def _check_beta_components(rs):
    sizes = [len(rs.betas[i].vertices) for i in range(1, 5)]
    if sizes != [5, 10, 5, 10]:
        return False, f"beta vertex counts {sizes}"
    t = rs.table
    pers = []
    for i in range(1, 5):
        res = t.engine().detect_period(rs.O[i], 100)
        pers.append(per_from_induced(res[1], res[2]))
    if pers != [10, 5, 10, 5]:
        return False, f"beta plane periods {pers}"
    return True, "beta_1..4: 5/10/5/10-gons with plane periods 10/5/10/5"


def _check_code_relation(rs, n_points=12, window=40):
    t = rs.table
    for p in _vprime_samples(t, n_points, seed=17):
        try:
            rho = t.orbit(p, "T", window).code[:window]
            rho_prime = t.orbit(p, "Tprime", window).code[:window]
        except BoundaryError:
            continue
        if len(rho) < window or len(rho_prime) < window:
            continue
        derived = tuple((rho[i] - rho[i - 1]) % 10 for i in range(1, window))
        if derived != rho_prime[1:]:
            return False, f"code relation fails at {p.token()}"
    return True, "rho'[i] = (rho[i] - rho[i-1]) mod 10 on sampled windows"


def _check_return_structure(rs):
    # construction already asserts the structure; reaching here means it built
    return True, "return structure (Z', X'_1, X'_2, holonomies) constructed"


def _check_h_conjugacy(rs):
    pts = _vprime_samples(rs.table, 25, seed=19)
    fails = rs.verify_H_conjugacy(pts, window=30)
    return not fails, f"{len(fails)} failures on 25 points, window 30"


def _check_delta_lifts(rs):
    pts = _x_samples(rs.X, 20, seed=23)
    fails = rs.verify_delta_lifts(pts, window=10)
    return not fails, f"{len(fails)} failures on 20 points, window 10"


def _check_omegas(rs):
    selfsim.omega_components(rs.X)  # asserts invariances internally
    return True, "omega_a / omega_ba / omega_ab invariant under f"


def _check_gamma(rs):
    x = rs.X
    gamma = selfsim.build_Gamma(x)
    pts = _x_samples(x, 20, seed=29)
    fails = selfsim.verify_gamma_return(x, gamma, pts)
    fails += selfsim.verify_sigma_codes(x, gamma, pts[:10], window=15)
    return not fails, f"{len(fails)} failures (return times, paths, sigma codes)"


def _check_aperiodic(rs, steps=1000):
    cert = selfsim.aperiodic_point(rs.X, steps=steps, nesting=8)
    return True, f"p_inf certified: {steps} steps, nesting 8, branches {cert.branch_pair}"


def _check_partitions(rs, depth=4):
    pb = partitions.PartitionBuilder(rs.X)
    eps = pb.epsilon()
    if not (eps.real_sign() > 0 and (ONE - eps).real_sign() > 0):
        return False, "epsilon outside (0, 1)"
    levels = pb.levels(depth)
    xarea = rs.X.quad.area()
    prev_green = None
    for p in levels:
        r, g = partitions.areas(p)
        if r + g != xarea:
            return False, f"conservation fails at level {p.level}"
        if prev_green is not None:
            if ((ONE - eps) * prev_green - g).real_sign() < 0:
                return False, f"decay fails at level {p.level}"
        prev_green = g
    return True, f"conservation + (1-eps) decay through level {depth}"


def _check_periods(rs):
    vals = set(periods.enumerate_periods(10 ** 6))
    for fam in periods.generators_CV():
        ks = range(5) if "k" in fam.arity else (0,)
        ls = range(4) if "l" in fam.arity else (0,)
        for k in ks:
            for l in ls:
                r = periods.period_from_abel(fam(k, l))
                if r <= 10 ** 6 and r not in vals:
                    return False, f"family {fam.ident} value {r} missing from B2"
    return True, "all generator-family periods lie in the enumerated B2"


CHECKS = [
    ("fixed-points", _check_fixed_points),
    ("beta-components", _check_beta_components),
    ("code-relation", _check_code_relation),
    ("return-structure", _check_return_structure),
    ("h-conjugacy", _check_h_conjugacy),
    ("delta-lifts", _check_delta_lifts),
    ("omega-invariance", _check_omegas),
    ("gamma-return", _check_gamma),
    ("aperiodic-certificate", _check_aperiodic),
    ("partition-decay", _check_partitions),
    ("period-families", _check_periods),
]


def cmd_verify(args):
    rs = _structure()
    rows = []
    failed = 0
    names = None if args.suite == "all" else set(args.suite.split(","))
    for name, fn in CHECKS:
        if names is not None and name not in names:
            continue
        try:
            ok, detail = fn(rs)
        except (AssertionError, ValueError, BoundaryError) as exc:
            ok, detail = False, f"error: {exc}"
        rows.append((name, "pass" if ok else "FAIL", detail))
        failed += 0 if ok else 1
        print(f"{name:24s} {'pass' if ok else 'FAIL':4s}  {detail}")
    if args.report_dir:
        _write_report(args.report_dir, rows, rs)
    return 1 if failed else 0


def _write_report(out_dir, rows, rs):
    import os

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.csv"), "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["check", "status", "detail"])
        w.writerows(rows)
    _render_figures(out_dir, rs)
    print(f"report and figures written to {out_dir}/")


def _render_figures(out_dir, rs):
    import os

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Polygon as MplPolygon

    def draw(ax, vs, **kw):
        ax.add_patch(MplPolygon([(complex(v).real, complex(v).imag) for v in vs], **kw))

    t = rs.table

    # the table, its sector pieces, and the period-1 components
    fig, ax = plt.subplots(figsize=(7, 7))
    draw(ax, t.A, facecolor=TABLE_GREY, edgecolor="#333")
    for i in range(1, 4):
        draw(ax, t.alpha_polygon(i).vertices, facecolor="none", edgecolor="#666", lw=0.7)
    for i in range(1, 5):
        draw(ax, rs.betas[i].vertices, facecolor=RED, alpha=0.6, edgecolor="#333")
    ax.set_xlim(-2.0, 3.2)
    ax.set_ylim(-1.6, 3.6)
    ax.set_aspect("equal")
    ax.set_title("sector pieces and period-1 components")
    fig.savefig(os.path.join(out_dir, "table_components.png"), dpi=130)
    plt.close(fig)

    # partition of X at level 3
    pb = partitions.PartitionBuilder(rs.X)
    level = pb.levels(3)[-1]
    fig, ax = plt.subplots(figsize=(7, 7))
    for cell in level.cells:
        draw(
            ax,
            cell.vertices,
            facecolor=RED if cell.color == "red" else GREEN,
            edgecolor="#333",
            lw=0.3,
            alpha=0.85,
        )
    ax.autoscale()
    ax.set_aspect("equal")
    ax.set_title("red/green partition of X, level 3")
    fig.savefig(os.path.join(out_dir, "partition_level3.png"), dpi=130)
    plt.close(fig)

    # a stretch of the aperiodic orbit inside X
    cert = selfsim.aperiodic_point(rs.X, steps=100, nesting=6)
    pts = []
    p = cert.p_inf
    for _ in range(800):
        p, _ = rs.X.step_f(p)
        z = complex(p)
        pts.append((z.real, z.imag))
    fig, ax = plt.subplots(figsize=(7, 7))
    draw(ax, rs.X.quad.big.vertices, facecolor="none", edgecolor="#333")
    draw(ax, rs.X.quad.small.vertices, facecolor="none", edgecolor="#333")
    ax.plot([a for a, _ in pts], [b for _, b in pts], ".", ms=2, color=RED)
    ax.set_aspect("equal")
    ax.set_title("orbit of the aperiodic point (800 steps)")
    fig.savefig(os.path.join(out_dir, "aperiodic_orbit.png"), dpi=130)
    plt.close(fig)


# -- other subcommands ------------------------------------------------------------


def cmd_orbit(args):
    try:
        p = CycNum.from_token(args.point)
    except (ValueError, IndexError) as exc:
        print(f"bad point token: {exc}", file=sys.stderr)
        return 2
    t = _structure().table
    rec = t.orbit(p, args.map, args.cap)
    payload = {
        "start": p.token(),
        "map": args.map,
        "halt": list(rec.halt),
        "code": list(rec.code),
        "points": [q.token() for q, _ in rec.steps] if args.points else None,
    }
    return _emit(args, _json(payload), "json")


def cmd_periods(args):
    if args.check is not None:
        member, witnesses = periods.is_period(args.check)
        payload = {
            "value": args.check,
            "is_period": member,
            "witnesses": [{"series": s, "k": k, "l": l} for s, k, l in witnesses],
        }
        return _emit(args, _json(payload), "json")
    found = periods.enumerate_periods(args.limit)
    if args.emit == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["period", "series", "k", "l"])
        for value in sorted(found):
            for s, k, l in sorted(found[value]):
                w.writerow([value, s, k, l])
        return _emit(args, buf.getvalue(), "csv")
    payload = {
        "limit": args.limit,
        "periods": {
            str(v): [{"series": s, "k": k, "l": l} for s, k, l in sorted(ws)]
            for v, ws in found.items()
        },
    }
    return _emit(args, _json(payload), "json")


def cmd_aperiodic(args):
    rs = _structure()
    try:
        cert = selfsim.aperiodic_point(rs.X, steps=args.steps, nesting=args.nesting)
    except AssertionError as exc:
        print(f"certificate failed: {exc}", file=sys.stderr)
        return 1
    payload = {
        "p_inf": cert.p_inf.token(),
        "mu": cert.mu.token(),
        "branch_pair": list(cert.branch_pair),
        "nesting_checked": cert.nesting_checked,
        "steps_checked": cert.steps_checked,
        "checks": {"nesting": "pass", "no_return": "pass", "no_boundary": "pass"},
    }
    return _emit(args, _json(payload), "json")


def cmd_partition(args):
    rs = _structure()
    pb = partitions.PartitionBuilder(rs.X)
    level = pb.levels(args.level)[-1]
    red, green = partitions.areas(level)
    if args.emit == "svg":
        polys = [
            (c.vertices, RED if c.color == "red" else GREEN, 0.9)
            for c in level.cells
        ]
        return _emit(args, svg_document(polys), "svg")
    payload = {
        "level": level.level,
        "epsilon": pb.epsilon().token(),
        "red_area": red.token(),
        "green_area": green.token(),
        "cells": [
            {
                "color": c.color,
                "lineage": c.lineage,
                "vertices": [v.token() for v in c.vertices],
            }
            for c in level.cells
        ],
    }
    return _emit(args, _json(payload), "json")


def cmd_measure(args):
    rs = _structure()
    region = rs.X.quad if args.region == "X" else rs.betas[int(args.region[-1])]
    stats = partitions.periodic_fraction(
        rs.table, region, samples=args.samples, cap=args.cap, seed=args.seed
    )
    payload = dict(stats)
    payload["periodic_fraction"] = _frac(stats["periodic_fraction"])
    payload["observed_periods"] = {
        str(k): v for k, v in sorted(stats["observed_periods"].items())
    }
    payload["region"] = args.region
    return _emit(args, _json(payload), "json")


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="decabilliard", description="decagon outer-billiard verification harness"
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("orbit", help="iterate one exact point")
    p.add_argument("--point", required=True, help="CycNum token (n0/d0,n1/d1,n2/d2,n3/d3)")
    p.add_argument("--map", choices=["T", "Tprime"], default="T")
    p.add_argument("--cap", type=int, default=10 ** 4)
    p.add_argument("--points", action="store_true", help="include every orbit point")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("verify", help="run the lemma-check suite")
    p.add_argument("--suite", default="all", help="'all' or comma-separated check names")
    p.add_argument("--report-dir", help="write report.csv and PNG figures here")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("periods", help="enumerate or test the period set")
    p.add_argument("--limit", type=int, default=200)
    p.add_argument("--check", type=int, help="test one value for membership")
    p.add_argument("--emit", choices=["csv", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_periods)

    p = sub.add_parser("aperiodic", help="build the aperiodic-point certificate")
    p.add_argument("--steps", type=int, default=10 ** 4)
    p.add_argument("--nesting", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_aperiodic)

    p = sub.add_parser("partition", help="red/green partition of X")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--emit", choices=["svg", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("measure", help="periodic-fraction statistics")
    p.add_argument("--region", default="X", help="'X' or 'beta1'..'beta4'")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--cap", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_measure)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
