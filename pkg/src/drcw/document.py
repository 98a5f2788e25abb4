"""Design documents and flat-file exports.

A design document is a versioned JSON record of everything needed to
reproduce and re-verify a design: method, sizes, null specification,
window, seed, the s/w arrays, the relaxation bound, and the computed
metrics. Serialization is deterministic (sorted keys, repr floats) so
identical runs produce byte-identical files.

CSV exports use a header row, UTF-8, '.' decimal separator, and 12
significant digits. SVG rendering is presentation sugar derived from the
same numbers; nothing reads it back.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .analysis import (
    CafGrid,
    DB_FLOOR,
    DopplerGrid,
    DopplerInterval,
    MetricsReport,
    ZERO_LEVEL,
)
from .design import DesignResult, Provenance
from .nullspec import NullSpec

SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def metrics_to_dict(report: MetricsReport) -> dict:
    return {
        "rsba": [
            {"center": float(iv.center), "lo": float(iv.lo), "hi": float(iv.hi)}
            for iv in report.rsba
        ],
        "dmbr": float(report.dmbr),
        "pdsl": float(report.pdsl),
        "nag": float(report.nag),
        "prsl_curve": [float(v) for v in report.prsl_curve],
    }


def metrics_from_dict(d: dict) -> MetricsReport:
    return MetricsReport(
        rsba=tuple(
            DopplerInterval(center=iv["center"], lo=iv["lo"], hi=iv["hi"]) for iv in d["rsba"]
        ),
        dmbr=float(d["dmbr"]),
        pdsl=float(d["pdsl"]),
        nag=float(d["nag"]),
        prsl_curve=np.array(d["prsl_curve"], dtype=float),
    )


def build_document(
    design: DesignResult,
    n: int,
    grid_points: int,
    metrics: MetricsReport,
    prsl_norm: str = "global",
    legacy_quadratic: bool = False,
) -> dict:
    prov = design.provenance
    return {
        "schema_version": SCHEMA_VERSION,
        "method": design.method,
        "m": int(design.m),
        "n": int(n),
        "null_spec": {
            "k0": int(prov.null_spec.k0),
            "nulls": [[float(t), int(k)] for t, k in prov.null_spec.nulls],
        },
        "window": prov.window_kind,
        "seed": prov.seed,
        "trials": prov.trials,
        "grid": int(grid_points),
        "prsl_norm": prsl_norm,
        "legacy_quadratic": bool(legacy_quadratic),
        "s": [int(v) for v in design.transmit_order],
        "w": [float(v) for v in design.weights],
        "objective": None if prov.rounded_objective is None else float(prov.rounded_objective),
        "sdp_bound": None if prov.sdp_bound is None else float(prov.sdp_bound),
        "warnings": list(prov.warnings),
        "metrics": metrics_to_dict(metrics),
    }


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_document(doc: dict, path) -> None:
    Path(path).write_text(dumps_document(doc), encoding="utf-8")


def load_document(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read design document {path}: {exc}") from exc
    validate_document(doc)
    return doc


def validate_document(doc: dict) -> None:
    if not isinstance(doc, dict):
        raise ValueError("design document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported schema_version {doc.get('schema_version')!r}; expected {SCHEMA_VERSION}"
        )
    for key in ("method", "m", "n", "null_spec", "s", "w", "grid", "metrics"):
        if key not in doc:
            raise ValueError(f"design document is missing field {key!r}")
    m = int(doc["m"])
    if len(doc["s"]) != m or len(doc["w"]) != m:
        raise ValueError("s and w arrays must have length m")


def document_to_design(doc: dict) -> DesignResult:
    """Rebuild an in-memory design from a document (y = s o w)."""
    s = np.array(doc["s"], dtype=np.int64)
    w = np.array(doc["w"], dtype=float)
    if not np.all(np.abs(s) == 1):
        raise ValueError("document transmit order must contain only +1/-1")
    if np.any(w < 0):
        raise ValueError("document weights must be nonnegative")
    ns = doc["null_spec"]
    spec = NullSpec(k0=int(ns["k0"]), nulls=tuple((float(t), int(k)) for t, k in ns["nulls"]))
    prov = Provenance(
        seed=doc.get("seed"),
        trials=doc.get("trials"),
        rounded_objective=doc.get("objective"),
        sdp_bound=doc.get("sdp_bound"),
        null_spec=spec,
        window_kind=doc.get("window"),
        warnings=tuple(doc.get("warnings", ())),
    )
    return DesignResult(
        transmit_order=s,
        weights=w,
        y=s * w,
        method=doc["method"],
        provenance=prov,
    )


# ---------------------------------------------------------------------------
# CSV exports


def prsl_csv(grid: DopplerGrid, curve) -> str:
    lines = ["theta_rad,prsl_db"]
    for theta, val in zip(grid.points, np.asarray(curve, dtype=float)):
        lines.append(f"{_fmt(theta)},{_fmt(val)}")
    return "\n".join(lines) + "\n"


def doppler_csv(grid: DopplerGrid, g_db) -> str:
    lines = ["theta_rad,g_db"]
    for theta, val in zip(grid.points, np.asarray(g_db, dtype=float)):
        lines.append(f"{_fmt(theta)},{_fmt(val)}")
    return "\n".join(lines) + "\n"


def caf_csv(caf: CafGrid) -> str:
    """Long-form CAF export: one row per (lag, theta) with the complex value
    and its magnitude in dB relative to the global peak."""
    peak = caf.peak
    lines = ["lag,theta_rad,re,im,mag_db"]
    mags = np.abs(caf.values)
    with np.errstate(divide="ignore"):
        db = np.where(
            mags > ZERO_LEVEL * peak,
            20.0 * np.log10(np.maximum(mags, 1e-300) / peak),
            DB_FLOOR,
        )
    db = np.maximum(db, DB_FLOOR)
    for i, lag in enumerate(caf.lags):
        row = caf.values[i]
        dbr = db[i]
        for j, theta in enumerate(caf.doppler.points):
            lines.append(
                f"{int(lag)},{_fmt(theta)},{_fmt(row[j].real)},{_fmt(row[j].imag)},{_fmt(dbr[j])}"
            )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SVG rendering (derived presentation; no numeric authority)

_W, _H = 860, 520
_ML, _MR, _MT, _MB = 70, 20, 40, 50


def _svg_header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{title}</text>',
    ]


def svg_line_plot(xs, ys, title: str, xlabel: str, ylabel: str, y_floor: float | None = None) -> str:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if y_floor is not None:
        ys = np.maximum(ys, y_floor)
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(x):
        return _ML + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _MT + (y1 - y) / (y1 - y0) * ph

    parts = _svg_header(title)
    parts.append(
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>'
    )
    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = x0 + frac * (x1 - x0)
        yv = y0 + frac * (y1 - y0)
        parts.append(
            f'<text x="{px(xv):.1f}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{xv:.3g}</text>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{py(yv):.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yv:.4g}</text>'
        )
    parts.append(
        f'<text x="{_ML + pw / 2:.1f}" y="{_H - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{xlabel}</text>'
    )
    parts.append(
        f'<text x="16" y="{_MT + ph / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {_MT + ph / 2:.1f})">{ylabel}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def svg_heatmap(caf: CafGrid, title: str, db_min: float = -100.0, max_cols: int = 200) -> str:
    """Grayscale range-Doppler map of the CAF magnitude in dB.

    Doppler columns are max-pooled down to at most ``max_cols`` cells so the
    file stays manageable; the pooling preserves sidelobe peaks.
    """
    mags = np.abs(caf.values)
    peak = caf.peak
    n_lags, n_cols = mags.shape
    stride = max(1, int(math.ceil(n_cols / max_cols)))
    pooled = np.array(
        [mags[:, j : j + stride].max(axis=1) for j in range(0, n_cols, stride)]
    ).T
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(np.maximum(pooled / peak, 1e-300))
    db = np.clip(db, db_min, 0.0)
    rows, cols = db.shape
    pw, ph = _W - _ML - _MR, _H - _MT - _MB
    cw, ch = pw / cols, ph / rows
    parts = _svg_header(title)
    for i in range(rows):
        for j in range(cols):
            # 0 dB -> black, db_min -> white
            level = int(round(255 * (db[i, j] - 0.0) / (db_min - 0.0)))
            parts.append(
                f'<rect x="{_ML + j * cw:.2f}" y="{_MT + i * ch:.2f}" '
                f'width="{cw + 0.05:.2f}" height="{ch + 0.05:.2f}" '
                f'fill="rgb({level},{level},{level})"/>'
            )
    parts.append(
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>'
    )
    parts.append(
        f'<text x="{_ML + pw / 2:.1f}" y="{_H - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">Doppler shift (rad/pulse)</text>'
    )
    parts.append(
        f'<text x="16" y="{_MT + ph / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {_MT + ph / 2:.1f})">lag</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
