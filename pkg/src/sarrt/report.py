"""CSV/JSON output of convergence rows and radial SVG drawings of trees."""

from __future__ import annotations

import csv
import io
import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .montecarlo import CLT_THRESHOLDS, ConvergenceRow
from .tree_sim import CapacityExceeded, TreeDepths

RENDER_CAP = 100_000

_STAT_FIELDS = ("mean", "variance", "se", "ci_low", "ci_high", "q05", "q50", "q95", "ratio")
_CLT_FIELDS = ("mean", "variance", "skewness", "excess_kurtosis", "ks")

COLUMNS = (
    ("n", "trials", "law", "seed")
    + tuple(f"{s}_{f}" for s in ("d_last", "height", "min_depth") for f in _STAT_FIELDS)
    + tuple(f"clt_{f}" for f in _CLT_FIELDS)
    + tuple(f"clt_threshold_{f}" for f in CLT_THRESHOLDS)
    + ("renewal_upper_violations", "renewal_lower_holds_fraction", "renewal_d_hat_mean", "renewal_d_bar_mean")
    + ("path_event_estimate", "path_event_ci_low", "path_event_ci_high")
    + ("rotation_lhs", "rotation_rhs", "rotation_passed")
    + ("error",)
)
_TEXT_COLUMNS = {"law", "error"}
_INT_COLUMNS = {"n", "trials", "seed", "renewal_upper_violations"}


class ReportIOError(OSError):
    pass


def row_record(row: ConvergenceRow) -> dict:
    """Flat ``column -> value`` mapping; absent statistics map to ``None``."""
    rec = dict.fromkeys(COLUMNS)
    rec.update(n=row.n, trials=row.trials, law=row.law, seed=row.seed, error=row.error)
    for name, s in row.stats.items():
        for f in _STAT_FIELDS:
            rec[f"{name}_{f}"] = getattr(s, f)
    if row.clt is not None:
        for f in _CLT_FIELDS:
            rec[f"clt_{f}"] = getattr(row.clt, f)
        for f, v in row.clt.thresholds.items():
            rec[f"clt_threshold_{f}"] = v
    for prefix in ("renewal", "path_event", "rotation"):
        block = getattr(row, prefix)
        if block:
            for f, v in block.items():
                rec[f"{prefix}_{f}"] = v
    return rec


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def csv_text(rows: Iterable[ConvergenceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        rec = row_record(row)
        w.writerow([_cell(rec[c]) for c in COLUMNS])
    return buf.getvalue()


def _write(path, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise ReportIOError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def write_csv(rows: Iterable[ConvergenceRow], path) -> None:
    """Header plus one line per row; floats are written with 17 significant digits."""
    _write(path, csv_text(rows))


def _parse_cell(col: str, s: str):
    if s == "":
        return None
    if col in _TEXT_COLUMNS:
        return s
    if s in ("true", "false"):
        return s == "true"
    if col in _INT_COLUMNS:
        return int(s)
    return float(s)


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [{c: _parse_cell(c, v) for c, v in rec.items()} for rec in csv.DictReader(fh)]


def json_text(rows: Iterable[ConvergenceRow]) -> str:
    recs = []
    for row in rows:
        rec = row_record(row)
        for k, v in rec.items():
            if isinstance(v, float) and not math.isfinite(v):
                rec[k] = None if math.isnan(v) else ("inf" if v > 0 else "-inf")
        recs.append(rec)
    return json.dumps({"columns": list(COLUMNS), "rows": recs}, indent=1) + "\n"


def write_json(rows: Iterable[ConvergenceRow], path) -> None:
    """Same records as :func:`write_csv`, as JSON."""
    _write(path, json_text(rows))


# ---------------------------------------------------------------------------
# SVG


@dataclass(frozen=True)
class RenderSpec:
    canvas: int = 800
    node_radius: float = 2.0
    stroke: float = 0.4
    low_color: tuple = (144, 238, 144)  # light green, label 0
    high_color: tuple = (139, 0, 0)  # dark red, label n


def label_colors(n: int, spec: RenderSpec) -> list[str]:
    t = np.linspace(0.0, 1.0, n + 1) if n > 0 else np.zeros(1)
    lo = np.array(spec.low_color, dtype=float)
    hi = np.array(spec.high_color, dtype=float)
    rgb = np.rint(lo[None, :] + t[:, None] * (hi - lo)[None, :]).astype(int)
    return [f"#{r:02x}{g:02x}{b:02x}" for r, g, b in rgb]


def radial_layout(parents: np.ndarray, depths: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polar coordinates ``(radius, angle)``: radius is the depth, and every node
    splits its angular sector among its children in proportion to subtree size."""
    n = parents.shape[0] - 1
    size = _kernels.subtree_sizes(parents).astype(float)
    start = np.zeros(n + 1)
    width = np.zeros(n + 1)
    width[0] = 2.0 * math.pi
    cursor = np.zeros(n + 1)
    for i in range(1, n + 1):
        p = parents[i]
        w = width[p] * size[i] / (size[p] - 1.0)
        start[i] = start[p] + cursor[p]
        width[i] = w
        cursor[p] += w
    angle = start + 0.5 * width
    return depths.astype(float), angle


def svg_tree(t: TreeDepths, spec: RenderSpec = RenderSpec()) -> ET.Element:
    if t.parents is None:
        raise ValueError("rendering needs a TreeDepths built with keep_parents=True")
    if t.n > RENDER_CAP:
        raise CapacityExceeded(f"n = {t.n} exceeds the rendering cap {RENDER_CAP}")
    r, a = radial_layout(t.parents, t.depths)
    half = spec.canvas / 2.0
    ring = (half - 2.0 * spec.node_radius) / max(float(t.depths.max()), 1.0)
    x = half + ring * r * np.cos(a)
    y = half + ring * r * np.sin(a)
    colors = label_colors(t.n, spec)

    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg", "version": "1.1",
        "width": str(spec.canvas), "height": str(spec.canvas),
        "viewBox": f"0 0 {spec.canvas} {spec.canvas}",
    })
    ET.SubElement(root, "rect", {"width": "100%", "height": "100%", "fill": "white"})
    edges = ET.SubElement(root, "g", {"id": "edges", "stroke": "#888888", "stroke-width": f"{spec.stroke:g}"})
    for i in range(1, t.n + 1):
        p = t.parents[i]
        ET.SubElement(edges, "line", {"x1": f"{x[i]:.2f}", "y1": f"{y[i]:.2f}",
                                      "x2": f"{x[p]:.2f}", "y2": f"{y[p]:.2f}"})
    nodes = ET.SubElement(root, "g", {"id": "nodes"})
    for i in range(t.n + 1):
        ET.SubElement(nodes, "circle", {"cx": f"{x[i]:.2f}", "cy": f"{y[i]:.2f}",
                                        "r": f"{spec.node_radius:g}", "fill": colors[i]})
    return root


def render_svg(t: TreeDepths, spec: Optional[RenderSpec], path) -> None:
    """Radial drawing of ``t``: ``n`` edges and ``n + 1`` nodes colored by label."""
    root = svg_tree(t, spec or RenderSpec())
    text = '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"
    _write(path, text)
