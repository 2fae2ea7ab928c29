"""Figure renderers over burstqec experiment CSVs.

Each figure id maps to the CSV schema of one experiment preset; rendering is
read-only over the inputs and produces a single image file.  An empty (but
header-valid) CSV renders an empty-axes chart.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class PlotError(Exception):
    """Invalid plot request (bad figure id, missing columns, unreadable CSV)."""


@dataclass
class PlotSpec:
    csv_path: str
    figure: str
    out_path: str
    xscale: str | None = None         # override the figure's default
    yscale: str | None = None
    series_column: str | None = None  # override the default grouping column
    extra: dict = field(default_factory=dict)


def _read_rows(path: str, required: tuple[str, ...]) -> list[dict]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            rows = list(reader)
    except OSError as exc:
        raise PlotError(f"cannot read {path}: {exc}") from exc
    if header is None:
        raise PlotError(f"{path} has no header row")
    missing = [c for c in required if c not in header]
    if missing:
        raise PlotError(f"{path} lacks required columns: {', '.join(missing)}")
    return rows


def _floats(rows: list[dict], col: str) -> np.ndarray:
    return np.array([float(r[col]) for r in rows], dtype=np.float64)


def _sidecar_note(csv_path: str) -> str | None:
    side = Path(str(csv_path) + ".json")
    if not side.exists():
        return None
    try:
        meta = json.loads(side.read_text())
    except (OSError, ValueError):
        return None
    bits = []
    if "experiment" in meta:
        bits.append(str(meta["experiment"]))
    if "seed" in meta:
        bits.append(f"seed {meta['seed']}")
    return ", ".join(bits) or None


def _series(rows: list[dict], column: str):
    keys = []
    for r in rows:
        if r[column] not in keys:
            keys.append(r[column])
    return [(k, [r for r in rows if r[column] == k]) for k in keys]


def _finish(fig, ax_list, spec: PlotSpec) -> None:
    note = _sidecar_note(spec.csv_path)
    if note:
        fig.suptitle(note, fontsize=8, y=0.995)
    for ax in ax_list:
        if spec.xscale:
            ax.set_xscale(spec.xscale)
        if spec.yscale:
            ax.set_yscale(spec.yscale)
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)


def _logical_error(spec: PlotSpec) -> None:
    """Log-log p_L vs p, one error-barred series per (d, mode)."""
    rows = _read_rows(spec.csv_path, ("d", "p", "mode", "p_l", "se"))
    fig, ax = plt.subplots(figsize=(5, 4))
    group = spec.series_column or "d"
    for key, sub in _series(rows, group):
        for mode, mrows in _series(sub, "mode" if group != "mode" else "d"):
            p = _floats(mrows, "p")
            pl = _floats(mrows, "p_l")
            se = _floats(mrows, "se")
            order = np.argsort(p)
            ax.errorbar(p[order], pl[order], yerr=se[order], marker="o",
                        capsize=2, label=f"{group}={key}, {mode}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("logical error rate per cycle")
    if rows:
        ax.legend(fontsize=7)
    _finish(fig, [ax], spec)


def _detection(spec: PlotSpec) -> None:
    """Latency and position-error distributions of the detection evaluation."""
    rows = _read_rows(spec.csv_path, ("injected", "detected", "c_win",
                                      "position_error", "latency_cycles"))
    hits = [r for r in rows if r["injected"] == "1" and r["detected"] == "1"]
    lat = np.array(sorted(float(r["latency_cycles"]) for r in hits
                          if not math.isnan(float(r["latency_cycles"]))))
    err = np.array(sorted(float(r["position_error"]) for r in hits
                          if not math.isnan(float(r["position_error"]))))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.5))
    if lat.size:
        ax1.step(lat, np.arange(1, lat.size + 1) / lat.size, where="post")
        ax1.axvline(float(hits[0]["c_win"]), color="gray", linestyle="--",
                    label="c_win")
        ax1.legend(fontsize=7)
    ax1.set_xlabel("detection latency (cycles)")
    ax1.set_ylabel("empirical CDF")
    if err.size:
        ax2.step(err, np.arange(1, err.size + 1) / err.size, where="post")
    ax2.set_xlabel("position error (sites)")
    ax2.set_ylabel("empirical CDF")
    _finish(fig, [ax1, ax2], spec)


def _effective_distance(spec: PlotSpec) -> None:
    """Effective-distance reduction vs p; error bars are SE / 4."""
    rows = _read_rows(spec.csv_path, ("d", "p", "reduction", "se"))
    fig, ax = plt.subplots(figsize=(5, 4))
    group = spec.series_column or "d"
    for key, sub in _series(rows, group):
        p = _floats(sub, "p")
        red = _floats(sub, "reduction")
        se = _floats(sub, "se")
        order = np.argsort(p)
        ax.errorbar(p[order], red[order], yerr=se[order] / 4.0, marker="s",
                    capsize=2, label=f"{group}={key}")
    ax.set_xscale("log")
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("effective distance reduction")
    if rows:
        ax.legend(fontsize=7)
    _finish(fig, [ax], spec)


def _scalability(spec: PlotSpec) -> None:
    """Required qubit density vs area ratio, log-log, one series per mode."""
    rows = _read_rows(spec.csv_path, ("area_ratio", "mode", "density_ratio"))
    fig, ax = plt.subplots(figsize=(5, 4))
    group = spec.series_column or "mode"
    for key, sub in _series(rows, group):
        area = _floats(sub, "area_ratio")
        dens = _floats(sub, "density_ratio")
        keep = np.isfinite(dens)
        order = np.argsort(area[keep])
        ax.plot(area[keep][order], dens[keep][order], marker="o",
                label=f"{group}={key}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("chip area ratio")
    ax.set_ylabel("required qubit density ratio")
    if rows:
        ax.legend(fontsize=7)
    _finish(fig, [ax], spec)


def _throughput(spec: PlotSpec) -> None:
    """Instruction throughput per mode as error-barred bars."""
    rows = _read_rows(spec.csv_path, ("mode", "throughput", "se"))
    fig, ax = plt.subplots(figsize=(5, 4))
    if rows:
        modes = [r["mode"] for r in rows]
        thr = _floats(rows, "throughput")
        se = _floats(rows, "se")
        ax.bar(modes, thr, yerr=se, capsize=4)
        ax.tick_params(axis="x", labelsize=8)
    ax.set_ylabel("instructions per d cycles")
    _finish(fig, [ax], spec)


FIGURES = {
    "logical_error": _logical_error,
    "detection": _detection,
    "effective_distance": _effective_distance,
    "scalability": _scalability,
    "throughput": _throughput,
}


def render(spec: PlotSpec) -> str:
    """Render one figure; returns the output path."""
    try:
        fn = FIGURES[spec.figure]
    except KeyError:
        raise PlotError(
            f"unknown figure id {spec.figure!r}; "
            f"known: {', '.join(sorted(FIGURES))}") from None
    fn(spec)
    return spec.out_path
