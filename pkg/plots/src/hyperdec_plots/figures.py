"""Render threshold curves, decay curves, and component histograms.

Inputs are the sweep CSV (`# rng=...` comment line, then a fixed header)
and the per-round weights CSV (`round,mean_weight`) written by the
simulator CLI. Inputs are never modified. Rendering is deterministic:
the Agg backend, a pinned SVG hash salt, and no wall-clock metadata.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "hyperdec-plots"

import matplotlib.pyplot as plt
import numpy as np

# column order of the sweep CSV, fixed by the simulator CLI
SWEEP_FIELDS = (
    "L", "p", "q", "r_dec", "scheme", "trials", "successes",
    "logical_failures", "timeouts", "mean_rounds", "mean_max_component",
    "wall_ms", "seed",
)
WEIGHT_FIELDS = ("round", "mean_weight")

WILSON_Z = 1.96  # 95% interval; exact at zero observed failures


class SchemaError(ValueError):
    """A CSV header or a requested field does not match the schema."""


class NoDataError(ValueError):
    """A CSV contains a header but no data rows."""


@dataclass
class FigureSpec:
    """What to read and how to draw it."""

    inputs: tuple[Path, ...]
    output: Path
    x: str = "p"
    y: str = "logical_failures"
    group_by: str = "L"
    log_x: bool = True
    log_y: bool = True

    def check_fields(self, header: Sequence[str]) -> None:
        for name in (self.x, self.y, self.group_by):
            if name not in header:
                raise SchemaError(
                    f"unknown field '{name}' (have: {', '.join(header)})"
                )


@dataclass
class FigureResult:
    """Written files plus the quantities a caller may want to check."""

    paths: list[Path]
    curves: int
    ratio: float | None = None
    warnings: list[str] = field(default_factory=list)


def _read_csv(path: Path, expected: Sequence[str]) -> list[dict[str, str]]:
    """Read one CSV, skipping `#` comment lines; validate the header."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise SchemaError(f"{path}: empty file, expected header "
                          f"{','.join(expected)}")
    header = [h.strip() for h in rows[0]]
    missing = [name for name in expected if name not in header]
    if missing:
        raise SchemaError(
            f"{path}: schema mismatch: missing field(s) "
            f"{', '.join(repr(m) for m in missing)} "
            f"(have: {', '.join(header)})"
        )
    data = [dict(zip(header, r)) for r in rows[1:]]
    if not data:
        raise NoDataError(f"{path}: no data rows")
    return data


def load_sweep(paths: Sequence[Path]) -> list[dict[str, str]]:
    rows: list[dict[str, str]] = []
    for p in paths:
        rows.extend(_read_csv(Path(p), SWEEP_FIELDS))
    return rows


def load_weights(path: Path) -> tuple[np.ndarray, np.ndarray]:
    rows = _read_csv(Path(path), WEIGHT_FIELDS)
    t = np.array([float(r["round"]) for r in rows])
    w = np.array([float(r["mean_weight"]) for r in rows])
    return t, w


def _group_key(value: str):
    try:
        return (0, float(value))
    except ValueError:
        return (1, value)


def wilson_interval(k: int, n: int, z: float = WILSON_Z) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    ph = k / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = ph + z2 / (2 * n)
    half = z * ((ph * (1 - ph) + z2 / (4 * n)) / n) ** 0.5
    return (center - half) / denom, (center + half) / denom


def save_figure(fig, output: Path) -> list[Path]:
    """Write the figure as both PNG and SVG next to `output`."""
    output = Path(output)
    base = output.with_suffix("") if output.suffix in (".png", ".svg") else output
    base.parent.mkdir(parents=True, exist_ok=True)
    paths = [base.with_suffix(".png"), base.with_suffix(".svg")]
    fig.savefig(paths[0])
    # Date metadata would differ between runs
    fig.savefig(paths[1], metadata={"Date": None})
    return paths


def build_threshold(rows: list[dict[str, str]], spec: FigureSpec):
    """Assemble the rate-vs-x figure; returns (fig, ax, curve count)."""
    spec.check_fields(SWEEP_FIELDS)
    trials_max = max(int(r["trials"]) for r in rows)
    floor = 1.0 / (2.0 * trials_max)

    groups: dict[str, list[dict[str, str]]] = {}
    for r in rows:
        groups.setdefault(r[spec.group_by], []).append(r)

    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for gval in sorted(groups, key=_group_key):
        pts = sorted(groups[gval], key=lambda r: float(r[spec.x]))
        xs = np.array([float(r[spec.x]) for r in pts])
        ks = np.array([int(r[spec.y]) for r in pts])
        ns = np.array([int(r["trials"]) for r in pts])
        rates = ks / ns
        los, his = zip(*(wilson_interval(k, n) for k, n in zip(ks, ns)))
        los, his = np.array(los), np.array(his)
        if spec.log_y:
            # zero rates are invisible on a log axis; pin them to the floor
            rates = np.maximum(rates, floor)
            los = np.maximum(los, floor)
            his = np.maximum(his, rates)
        # shape (2, n) keeps a single point unambiguous for matplotlib
        yerr = np.vstack([rates - los, his - rates])
        ax.errorbar(xs, rates, yerr=yerr, marker="o", capsize=3,
                    label=f"{spec.group_by}={gval}")
    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
        ax.set_ylim(bottom=floor)
    ax.set_xlabel(spec.x)
    ax.set_ylabel(f"{spec.y} / trials")
    ax.legend()
    fig.tight_layout()
    return fig, ax, len(groups)


def plot_threshold(csv_paths: Sequence[Path], output: Path, *,
                   x: str = "p", y: str = "logical_failures",
                   group_by: str = "L", log_x: bool = True,
                   log_y: bool = True) -> FigureResult:
    """One failure-rate curve per group value, with 95% Wilson bars."""
    spec = FigureSpec(inputs=tuple(Path(p) for p in csv_paths),
                      output=Path(output), x=x, y=y, group_by=group_by,
                      log_x=log_x, log_y=log_y)
    rows = load_sweep(spec.inputs)
    fig, _, curves = build_threshold(rows, spec)
    try:
        paths = save_figure(fig, spec.output)
    finally:
        plt.close(fig)
    return FigureResult(paths=paths, curves=curves)


def fit_decay_ratio(t: np.ndarray, w: np.ndarray) -> float | None:
    """Least-squares per-round weight ratio, or None if underdetermined.

    Rows with nonpositive mean weight (rounds past convergence, padded
    with zeros) carry no decay information and are excluded.
    """
    keep = w > 0
    if keep.sum() < 2 or len(np.unique(t[keep])) < 2:
        return None
    slope = np.polyfit(t[keep], np.log2(w[keep]), 1)[0]
    return float(2.0 ** slope)


def build_decay(series: list[tuple[str, np.ndarray, np.ndarray]],
                log_y: bool = True):
    """One weight-vs-round curve per input file, with a fitted ratio."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ratios: list[float | None] = []
    notes: list[str] = []
    positive = [w[w > 0].min() for _, _, w in series if (w > 0).any()]
    floor = min(positive) / 2.0 if positive else 1.0
    for label, t, w in series:
        ratio = fit_decay_ratio(t, w)
        ratios.append(ratio)
        shown = np.maximum(w, floor) if log_y else w
        if ratio is None:
            notes.append(f"{label}: too few rounds for a decay fit")
            ax.plot(t, shown, marker="o", label=label)
        else:
            ax.plot(t, shown, marker="o",
                    label=f"{label} (ratio {ratio:.3f})")
    if log_y and positive:
        ax.set_yscale("log")
    ax.set_xlabel("round")
    ax.set_ylabel("mean syndrome weight")
    ax.legend()
    if ratios and ratios[0] is not None:
        ax.text(0.97, 0.95, f"per-round ratio {ratios[0]:.3f}",
                transform=ax.transAxes, ha="right", va="top")
    fig.tight_layout()
    return fig, ax, ratios, notes


def plot_decay(weight_paths: Sequence[Path] | Path, output: Path, *,
               log_y: bool = True) -> FigureResult:
    """Mean syndrome weight per round, annotated with the fitted ratio."""
    if isinstance(weight_paths, (str, Path)):
        weight_paths = [weight_paths]
    series = []
    for p in weight_paths:
        p = Path(p)
        t, w = load_weights(p)
        series.append((p.stem, t, w))
    fig, _, ratios, notes = build_decay(series, log_y=log_y)
    for note in notes:
        warnings.warn(note, stacklevel=2)
    try:
        paths = save_figure(fig, output)
    finally:
        plt.close(fig)
    return FigureResult(paths=paths, curves=len(series),
                        ratio=ratios[0] if ratios else None,
                        warnings=notes)


def build_components(rows: list[dict[str, str]]):
    vals = np.array([float(r["mean_max_component"]) for r in rows])
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    bins = min(20, max(3, len(vals)))
    ax.hist(vals, bins=bins, edgecolor="black")
    ax.set_xlabel("mean max component extent")
    ax.set_ylabel("grid points")
    fig.tight_layout()
    return fig, ax


def plot_components(csv_paths: Sequence[Path], output: Path) -> FigureResult:
    """Histogram of per-grid-point mean largest component extents."""
    rows = load_sweep([Path(p) for p in csv_paths])
    fig, _ = build_components(rows)
    try:
        paths = save_figure(fig, output)
    finally:
        plt.close(fig)
    return FigureResult(paths=paths, curves=1)
