"""Deterministic artifact emission: delimited tables, JSON, and figures.

Every delimited artifact uses a fixed column order, '.' as the decimal
separator, line-feed terminators, and floats printed at 17 significant
digits (binary64 round-trip) unless the caller lowers the precision, so
two runs on the same configuration write byte-identical files.  Grid
provenance travels in '#'-prefixed comment lines above the header row.
JSON documents are key-sorted and stamped with a "schema" version.

Figure rendering is file-only (Agg backend, PNG next to the delimited
output); the byte-identity guarantee covers the CSV/JSON artifacts.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "SCHEMA_VERSION",
    "VIOLATION_COLUMNS",
    "format_value",
    "csv_text",
    "json_text",
    "write_text",
    "violation_rows",
    "summaries_payload",
    "figure_path",
    "save_sweep_figure",
    "save_verify_figure",
    "save_conjecture_figure",
    "save_compare_figure",
    "save_limits_figure",
    "save_band_figure",
]

SCHEMA_VERSION = 1

# Fixed column order for violation rows, shared by every suite.
VIOLATION_COLUMNS = ("suite", "n", "k", "p", "lhs", "rhs", "margin")


def format_value(value, digits: int = 17) -> str:
    """One delimited cell: floats at fixed significant digits, exact
    rationals verbatim, None as the empty cell."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    if isinstance(value, (Fraction, int)):
        return str(value)
    return str(value)


def csv_text(columns: Sequence[str], rows: Sequence[Sequence], *,
             comments: Sequence[str] = (), digits: int = 17) -> str:
    """Render a delimited table with LF terminators and a comment preamble."""
    lines = [f"# {comment}" for comment in comments]
    lines.append(",".join(columns))
    for row in rows:
        cells = [format_value(cell, digits) for cell in row]
        for cell in cells:
            if "," in cell or "\n" in cell:
                raise ValueError(f"cell needs quoting, refusing: {cell!r}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def json_text(payload: dict) -> str:
    """Key-sorted JSON document with the schema stamp and a trailing LF."""
    document = {"schema": SCHEMA_VERSION}
    document.update(payload)
    return json.dumps(document, sort_keys=True, indent=2, default=str) + "\n"


def write_text(path, text: str) -> Path:
    """Write an artifact with newline translation disabled."""
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        handle.write(text)
    return path


def violation_rows(summaries: Sequence) -> list:
    """Flatten CheckSummary violations onto the fixed CSV columns."""
    rows = []
    for summary in summaries:
        for violation in summary.violations:
            n, k, p = violation.csv_fields()
            rows.append((violation.suite, n, k, p,
                         violation.lhs, violation.rhs, violation.margin))
    return rows


def summaries_payload(summaries: Sequence, *, grid: Optional[str] = None,
                      extra: Optional[dict] = None) -> dict:
    """JSON payload bundling suite summaries with grid provenance."""
    payload = {"suites": [summary.as_dict() for summary in summaries]}
    if grid is not None:
        payload["grid"] = grid
    if extra:
        payload.update(extra)
    return payload


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------


def figure_path(out_path) -> Path:
    return Path(out_path).with_suffix(".png")


def _finish(fig, path) -> Path:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_sweep_figure(points: Sequence[tuple], path, *,
                      cap: Optional[float] = None) -> Path:
    """Tail-to-pmf ratio over its lower bound, one curve per (n, p).

    ``points`` holds (n, k, p, ratio_over_L) tuples; the abscissa is
    k/n so curves from different n overlay.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    curves: dict = {}
    for n, k, p, value in points:
        curves.setdefault((n, p), []).append((k / n, value))
    for (n, p), pts in sorted(curves.items()):
        xs, ys = zip(*pts)
        ax.plot(xs, ys, marker=".", markersize=3, linewidth=1.0,
                label=f"n={n}, p={p}")
    if cap is not None:
        ax.axhline(cap, color="black", linestyle="--", linewidth=1.0,
                   label=f"cap {cap:.7f}")
    ax.set_xlabel("k / n")
    ax.set_ylabel("B / (b L)")
    ax.set_title("Tail ratio over its certified lower bound")
    ax.grid(alpha=0.3)
    if len(curves) <= 12:
        ax.legend(fontsize=8)
    return _finish(fig, path)


def save_verify_figure(summaries: Sequence, path) -> Path:
    """Per-suite outcome bars: points checked, colored by pass/fail."""
    fig, ax = plt.subplots(figsize=(7.0, 0.6 + 0.45 * max(len(summaries), 2)))
    names = [summary.suite for summary in summaries]
    counts = [summary.points_checked for summary in summaries]
    colors = ["#2a7e43" if summary.passed else "#b0322d"
              for summary in summaries]
    ys = range(len(summaries))
    ax.barh(list(ys), counts, color=colors)
    for y, summary in zip(ys, summaries):
        note = ("no violations" if summary.passed
                else f"{len(summary.violations)} violations")
        ax.text(summary.points_checked, y, f" {note}", va="center", fontsize=8)
    ax.set_yticks(list(ys))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlabel("points checked")
    ax.set_title("Certification sweep outcomes")
    ax.grid(alpha=0.3, axis="x")
    return _finish(fig, path)


def save_conjecture_figure(slice_trace: dict, witness: dict, path) -> Path:
    """Fixed-k slice of B/(bL) along p = k/n, with the scanned caps."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ns = [row["n"] for row in slice_trace["rows"]]
    ratios = [row["ratio"] for row in slice_trace["rows"]]
    ax.plot(ns, ratios, marker="o", markersize=4,
            label=f"k = {slice_trace['k']} slice, p = k/n")
    ax.axhline(slice_trace["cap"], color="black", linestyle="--",
               linewidth=1.0, label=f"scanned cap {slice_trace['cap']:.7f}")
    if witness.get("interior_cap") is not None:
        ax.axhline(witness["interior_cap"], color="gray", linestyle=":",
                   linewidth=1.0,
                   label=f"interior cap {witness['interior_cap']:.7f}")
    if witness.get("value") is not None:
        ax.plot([], [], " ",
                label=f"grid max {witness['value']:.7f} at "
                      f"{witness.get('argmax')}")
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("B / (b L)")
    ax.set_title("Ratio-cap scan evidence")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_compare_figure(rows: Sequence[tuple], f_star: float, path) -> Path:
    """Bracket widths against f = k/n with the crossover marker.

    ``rows`` holds (f, width_ours, width_chernoff_pair, width_mckay).
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    fs = [row[0] for row in rows]
    series = (("algebraic bracket", 1), ("Chernoff pair", 2),
              ("normal comparison", 3))
    for label, idx in series:
        ys = [row[idx] for row in rows]
        ax.plot(fs, ys, marker=".", markersize=3, linewidth=1.0, label=label)
    ax.axvline(f_star, color="black", linestyle="--", linewidth=1.0,
               label=f"crossover f* = {f_star:.6f}")
    ax.set_yscale("log")
    ax.set_xlabel("f = k / n")
    ax.set_ylabel("bracket width (upper / lower)")
    ax.set_title("Two-sided bound tightness comparison")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_limits_figure(tracks: dict, path) -> Path:
    """One panel per convergence track: values against the limit line."""
    names = [name for name in ("large_dev", "moderate", "clt") if name in tracks]
    fig, axes = plt.subplots(1, max(len(names), 1),
                             figsize=(3.6 * max(len(names), 1), 3.8))
    if len(names) <= 1:
        axes = [axes]
    for ax, name in zip(axes, names):
        track = tracks[name]
        ns = [row["n"] for row in track["rows"]]
        values = [row["value"] for row in track["rows"]]
        ax.plot(ns, values, marker="o", markersize=4, label="scaled tail")
        if name == "clt":
            targets = [row["target"] for row in track["rows"]]
            ax.plot(ns, targets, marker="x", markersize=4, linestyle=":",
                    label="per-point target")
        else:
            ax.axhline(track["limit"], color="black", linestyle="--",
                       linewidth=1.0, label="limit")
        ax.set_xscale("log")
        ax.set_xlabel("n")
        ax.set_title(name)
        ax.grid(alpha=0.3)
        ax.legend(fontsize=7)
    return _finish(fig, path)


def save_band_figure(xs: Sequence[float], los: Sequence[float],
                     his: Sequence[float], path, *, xlabel: str,
                     title: str) -> Path:
    """Shaded lower/upper band, used for single-family bound displays."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.fill_between(xs, los, his, alpha=0.35, label="certified band")
    ax.plot(xs, los, linewidth=1.0)
    ax.plot(xs, his, linewidth=1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("value")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig, path)
