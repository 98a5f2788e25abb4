"""Command-line front end: design, analyze, table, verify.

Exit codes: 0 success, 1 verification failure, 2 usage or validation
error, 3 solver failure. All outputs (JSON documents, CSV, SVG) are
deterministic functions of the command line, so repeated runs are
byte-identical.

Angles on the command line carry an explicit unit: multiples of pi as
``0.8pi``, raw radians as ``0.8rad``. Null points are ``ANGLE:ORDER``,
e.g. ``--null 0.8pi:4``.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import document as doc_io
from .analysis import DopplerGrid, compute_metrics, doppler_factor, magnitude_db
from .analysis import composite_ambiguity, prsl_curve
from .design import (
    DesignFailure,
    design_bd,
    design_nm_drcw,
    design_ptm,
    design_uniform,
)
from .nullspec import NullSpec, max_null_violation
from .sdp import SolverFailure
from .sequences import WINDOW_KINDS, generate_golay_pair, verify_complementary, window_template

_METHOD_ALIASES = {"nm": "nm_drcw", "nm_drcw": "nm_drcw", "ptm": "ptm", "bd": "bd", "uniform": "uniform"}


def parse_angle(text: str) -> float:
    t = text.strip().lower()
    try:
        if t.endswith("pi"):
            return float(t[:-2]) * math.pi
        if t.endswith("rad"):
            return float(t[:-3])
    except ValueError:
        pass
    raise ValueError(f"angle {text!r} must be '<x>pi' or '<x>rad', e.g. 0.8pi")


def parse_null(text: str) -> tuple[float, int]:
    theta_s, sep, k_s = text.partition(":")
    if not sep:
        raise ValueError(f"null point {text!r} must be ANGLE:ORDER, e.g. 0.8pi:4")
    theta = parse_angle(theta_s)
    try:
        k = int(k_s)
    except ValueError:
        raise ValueError(f"null order in {text!r} must be an integer") from None
    return theta, k


def _add_common(
    p: argparse.ArgumentParser, *, seeded: bool = True, grid_default: int | None = 8192
) -> None:
    grid_help = "Doppler grid points (default 8192)" if grid_default else (
        "Doppler grid points (default: the document's grid)"
    )
    p.add_argument("--grid", type=int, default=grid_default, help=grid_help)
    p.add_argument(
        "--prsl-norm",
        choices=("global", "per-doppler"),
        default="global",
        help="range-sidelobe normalization reference (default global peak)",
    )
    if seeded:
        p.add_argument("--seed", type=int, default=0, help="randomization seed (default 0)")
        p.add_argument("--trials", type=int, default=1000, help="rounding trials (default 1000)")
        p.add_argument("--tol", type=float, default=1e-6, help="solver tolerance (default 1e-6)")
        p.add_argument("--max-iter", type=int, default=5000, help="solver iteration budget")
        p.add_argument(
            "--legacy-eq11",
            action="store_true",
            help="use the legacy quadratic null factor (1 - z cos t + z^2) "
            "instead of the corrected (1 - 2 z cos t + z^2)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drcw",
        description="Design and analyze Doppler-resilient complementary waveforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="design a pulse train and receive weights")
    p_design.add_argument("method", choices=sorted(_METHOD_ALIASES), help="design method")
    p_design.add_argument("--m", type=int, required=True, help="number of pulses")
    p_design.add_argument("--n", type=int, default=64, help="pair length (default 64)")
    p_design.add_argument("--k0", type=int, default=0, help="null order at zero Doppler")
    p_design.add_argument(
        "--null",
        action="append",
        default=[],
        metavar="ANGLE:ORDER",
        help="extra null point, repeatable (e.g. 0.8pi:4)",
    )
    p_design.add_argument("--window", choices=WINDOW_KINDS, default="rectangular")
    p_design.add_argument("-o", "--out", default="design.json", help="output document path")
    p_design.add_argument(
        "--trace",
        default=None,
        metavar="PATH",
        help="dump per-iteration solver objective and certified gap as CSV",
    )
    _add_common(p_design)

    p_an = sub.add_parser("analyze", help="export CSV (and optional SVG) views of a design")
    p_an.add_argument("document", help="design document (JSON)")
    p_an.add_argument("--out-dir", default=".", help="directory for exported files")
    p_an.add_argument("--svg", action="store_true", help="also render SVG plots")
    _add_common(p_an, seeded=False, grid_default=None)

    p_tab = sub.add_parser("table", help="metric table over null orders and windows")
    p_tab.add_argument("--k0", required=True, help="comma-separated null orders, e.g. 10,15,20")
    p_tab.add_argument(
        "--windows", default="hamming,rectangular", help="comma-separated window kinds"
    )
    p_tab.add_argument("--m", type=int, default=50)
    p_tab.add_argument("--n", type=int, default=64)
    p_tab.add_argument("--format", choices=("csv", "md", "json"), default="md")
    p_tab.add_argument("-o", "--out", default=None, help="output path (default stdout)")
    _add_common(p_tab)

    p_ver = sub.add_parser("verify", help="check invariants of a pair length or document")
    p_ver.add_argument("document", nargs="?", help="design document to verify")
    p_ver.add_argument("--golay", type=int, default=None, metavar="N", help="verify a generated pair")
    p_ver.add_argument("--grid", type=int, default=None, help="override re-analysis grid")
    return parser


# ---------------------------------------------------------------------------


def _design_from_args(args) -> tuple:
    method = _METHOD_ALIASES[args.method]
    nulls = tuple(parse_null(t) for t in args.null)
    spec = NullSpec(k0=args.k0, nulls=nulls)
    if method == "nm_drcw":
        window = window_template(args.window, args.m)
        design = design_nm_drcw(
            args.m,
            spec,
            window,
            trials=args.trials,
            seed=args.seed,
            tol=args.tol,
            max_iter=args.max_iter,
            legacy_quadratic=args.legacy_eq11,
            collect_solver_trace=bool(getattr(args, "trace", None)),
        )
    else:
        if args.k0 or nulls:
            raise ValueError(f"--k0/--null only apply to the nm method, not {method!r}")
        if method == "ptm":
            design = design_ptm(args.m)
        elif method == "bd":
            design = design_bd(args.m)
        else:
            design = design_uniform(args.m)
    return design


def _interval_str(iv) -> str:
    if iv.empty:
        return "empty"
    return f"[0, {iv.half_width / math.pi:.2f}pi]" if iv.center == 0.0 else (
        f"[{iv.lo / math.pi:.3f}pi, {iv.hi / math.pi:.3f}pi]"
    )


def cmd_design(args) -> int:
    design = _design_from_args(args)
    if args.trace:
        rows = design.provenance.solver_trace
        text = "iteration,objective,certified_gap,diag_deviation\n" + "".join(
            f"{it},{obj:.12g},{gap:.12g},{dev:.12g}\n" for it, obj, gap, dev in rows
        )
        Path(args.trace).write_text(text, encoding="utf-8")
    pair = generate_golay_pair(args.n)
    grid = DopplerGrid.uniform(args.grid)
    metrics = compute_metrics(design, pair, grid, prsl_normalization=args.prsl_norm)
    doc = doc_io.build_document(
        design,
        n=args.n,
        grid_points=args.grid,
        metrics=metrics,
        prsl_norm=args.prsl_norm,
        legacy_quadratic=args.legacy_eq11,
    )
    doc_io.save_document(doc, args.out)
    prov = design.provenance
    print(f"method {design.method}  m={design.m} n={args.n} window={prov.window_kind}")
    if prov.rounded_objective is not None:
        print(f"objective {prov.rounded_objective:.6f}  sdp bound {prov.sdp_bound:.6f}")
    print(
        f"NAG {metrics.nag:.2f} dB  DMBR {metrics.dmbr:.1f}%  PDSL {metrics.pdsl:.2f} dB"
    )
    for iv in metrics.rsba:
        print(f"RSBA around {iv.center / math.pi:.2f}pi: {_interval_str(iv)}")
    print(f"wrote {args.out}")
    return 0


def cmd_analyze(args) -> int:
    doc = doc_io.load_document(args.document)
    design = doc_io.document_to_design(doc)
    n = int(doc["n"])
    grid = DopplerGrid.uniform(args.grid if args.grid else int(doc["grid"]))
    pair = generate_golay_pair(n)
    caf = composite_ambiguity(design, pair, grid)
    curve = prsl_curve(caf, normalization=args.prsl_norm)
    g_db = magnitude_db(doppler_factor(design, grid))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "prsl.csv").write_text(doc_io.prsl_csv(grid, curve), encoding="utf-8")
    (out / "doppler.csv").write_text(doc_io.doppler_csv(grid, g_db), encoding="utf-8")
    (out / "caf.csv").write_text(doc_io.caf_csv(caf), encoding="utf-8")
    written = ["prsl.csv", "doppler.csv", "caf.csv"]
    if args.svg:
        (out / "prsl.svg").write_text(
            doc_io.svg_line_plot(
                grid.points, curve, "Peak range sidelobe level", "Doppler shift (rad/pulse)",
                "PRSL (dB)", y_floor=-120.0,
            ),
            encoding="utf-8",
        )
        (out / "doppler.svg").write_text(
            doc_io.svg_line_plot(
                grid.points, g_db, "Doppler profile", "Doppler shift (rad/pulse)", "|G| (dB)",
                y_floor=-120.0,
            ),
            encoding="utf-8",
        )
        (out / "caf.svg").write_text(
            doc_io.svg_heatmap(caf, "Composite ambiguity (dB)"), encoding="utf-8"
        )
        written += ["prsl.svg", "doppler.svg", "caf.svg"]
    print(f"wrote {', '.join(written)} to {out}")
    return 0


def _table_rows(args) -> list[dict]:
    k0_list = [s for s in args.k0.split(",") if s.strip()]
    if not k0_list:
        raise ValueError("--k0 list must not be empty")
    k0_values = [int(s) for s in k0_list]
    windows = [w.strip() for w in args.windows.split(",") if w.strip()]
    if not windows:
        raise ValueError("--windows list must not be empty")
    for k0 in k0_values:
        if k0 > args.m - 1:
            raise ValueError(f"k0={k0} violates k0 <= m-1 for m={args.m}")
    pair = generate_golay_pair(args.n)
    grid = DopplerGrid.uniform(args.grid)
    rows = []
    for kind in windows:
        window = window_template(kind, args.m)
        for k0 in k0_values:
            design = design_nm_drcw(
                args.m,
                NullSpec(k0=k0),
                window,
                trials=args.trials,
                seed=args.seed,
                tol=args.tol,
                max_iter=args.max_iter,
                legacy_quadratic=args.legacy_eq11,
            )
            metrics = compute_metrics(design, pair, grid, prsl_normalization=args.prsl_norm)
            rows.append(
                {
                    "window": kind,
                    "k0": k0,
                    "rsba_halfwidth_over_pi": metrics.rsba[0].half_width / math.pi,
                    "dmbr_percent": metrics.dmbr,
                    "pdsl_db": metrics.pdsl,
                    "nag_db": metrics.nag,
                }
            )
    return rows


def _format_table(rows: list[dict], fmt: str) -> str:
    if fmt == "csv":
        lines = ["window,k0,rsba_halfwidth_over_pi,dmbr_percent,pdsl_db,nag_db"]
        for r in rows:
            lines.append(
                f"{r['window']},{r['k0']},{r['rsba_halfwidth_over_pi']:.12g},"
                f"{r['dmbr_percent']:.12g},{r['pdsl_db']:.12g},{r['nag_db']:.12g}"
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        import json

        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    lines = [
        "| window | k0 | RSBA | DMBR | PDSL | NAG |",
        "|---|---|---|---|---|---|",
    ]
    for r in rows:
        lines.append(
            f"| {r['window']} | {r['k0']} | [0, {r['rsba_halfwidth_over_pi']:.2f}pi] "
            f"| {r['dmbr_percent']:.0f}% | {r['pdsl_db']:.1f} dB | {r['nag_db']:.2f} dB |"
        )
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    rows = _table_rows(args)
    text = _format_table(rows, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _verify_document(path: str, grid_override: int | None) -> int:
    doc = doc_io.load_document(path)
    failures = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        status = "ok" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        print(f"{status}: {name}{suffix}")
        if not ok:
            failures.append(name)

    try:
        design = doc_io.document_to_design(doc)
    except ValueError as exc:
        print(f"FAIL: document arrays ({exc})")
        return 1
    m = design.m
    n = int(doc["n"])

    pair = generate_golay_pair(n)
    check(f"complementary pair n={n}", verify_complementary(pair.x1, pair.x2).ok)

    energy = float(np.sum(design.y * design.y))
    check("energy |y|^2 = m", abs(energy - m) <= 1e-8 * m, f"|y|^2 = {energy:.12g}")

    spec = design.provenance.null_spec
    violation = max_null_violation(design.y, spec)
    check(
        f"null orders (k0={spec.k0}, {len(spec.nulls)} extra)",
        violation <= 1e-8 * m,
        f"worst residual {violation:.3e}",
    )

    obj = doc.get("objective")
    bound = doc.get("sdp_bound")
    if obj is not None and bound is not None:
        check(
            "rounded objective within relaxation bound",
            obj <= bound + 1e-6 * max(1.0, abs(bound)),
            f"{obj:.6f} <= {bound:.6f}",
        )

    grid = DopplerGrid.uniform(grid_override if grid_override else int(doc["grid"]))
    if grid.size == int(doc["grid"]):
        fresh = compute_metrics(
            design, pair, grid, prsl_normalization=doc.get("prsl_norm", "global")
        )
        stored = doc_io.metrics_from_dict(doc["metrics"])
        dev = max(
            abs(fresh.dmbr - stored.dmbr),
            abs(fresh.pdsl - stored.pdsl),
            abs(fresh.nag - stored.nag),
            float(np.max(np.abs(fresh.prsl_curve - stored.prsl_curve))),
            max(
                max(abs(a.lo - b.lo), abs(a.hi - b.hi))
                for a, b in zip(fresh.rsba, stored.rsba)
            ),
        )
        check("re-analysis reproduces embedded metrics", dev <= 1e-9, f"max dev {dev:.3e}")
    return 1 if failures else 0


def cmd_verify(args) -> int:
    if args.golay is None and args.document is None:
        raise ValueError("verify needs a design document or --golay N")
    code = 0
    if args.golay is not None:
        pair = generate_golay_pair(args.golay)
        report = verify_complementary(pair.x1, pair.x2)
        status = "ok" if report.ok else "FAIL"
        print(f"{status}: complementary pair n={args.golay}")
        if not report.ok:
            code = 1
    if args.document is not None:
        code = max(code, _verify_document(args.document, args.grid))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "design":
            return cmd_design(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "table":
            return cmd_table(args)
        if args.command == "verify":
            return cmd_verify(args)
        raise ValueError(f"unknown command {args.command!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverFailure, DesignFailure) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
