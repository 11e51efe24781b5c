"""CSV, JSON and SVG emitters for paths and reports."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def path_columns(rank: int) -> list[str]:
    """Fixed CSV column order for exported paths."""
    return (["t"] + [f"theta_{i + 1}" for i in range(rank)] + [f"pi_{i + 1}" for i in range(rank)]
            + [f"Y_{i + 1}" for i in range(rank)] + ["wall_distance"])


def write_path_csv(filename, path, estimate) -> Path:
    filename = Path(filename)
    rank = path.theta.shape[1]
    table = np.column_stack([path.times, path.theta, path.pi_theta, estimate.y_curves,
                             path.wall_distance])
    with filename.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(path_columns(rank))
        writer.writerows(table.tolist())
    return filename


def read_path_csv(filename):
    data = np.loadtxt(filename, delimiter=",", skiprows=1, ndmin=2)
    with open(filename) as fh:
        header = fh.readline().strip().split(",")
    return header, data


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def write_json(filename, payload: dict, kind: str) -> Path:
    filename = Path(filename)
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, **_plain(payload)}
    filename.write_text(json.dumps(doc, indent=2, sort_keys=False))
    return filename


def write_report_csv(filename, rows: list[dict]) -> Path:
    """Flat table, one row per report, columns = union of keys in first-seen order."""
    filename = Path(filename)
    cols: list[str] = []
    for row in rows:
        cols.extend(k for k in row if k not in cols)
    with filename.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols)
        writer.writeheader()
        for row in rows:
            writer.writerow(_plain(row))
    return filename


def chamber_svg(pi_theta: np.ndarray, simple: np.ndarray, size: int = 480) -> str:
    """Polyline of a rank-2 folded path with the two chamber walls drawn as rays from 0."""
    if pi_theta.shape[1] != 2:
        raise ValueError("SVG output supports rank-2 paths only")
    reach = max(float(np.abs(pi_theta).max()), 1e-9) * 1.1
    scale = (size / 2 - 10) / reach
    cx = cy = size / 2

    def xy(p):
        return f"{cx + scale * p[0]:.2f},{cy - scale * p[1]:.2f}"

    lines = []
    for k, s in enumerate(simple):
        # wall direction: s rotated by +-90 degrees, oriented into the chamber
        d = np.array([-s[1], s[0]]) / np.linalg.norm(s)
        if d @ simple[1 - k] < 0:
            d = -d
        end = d * reach
        lines.append(f'<line class="wall" x1="{cx:.2f}" y1="{cy:.2f}" x2="{cx + scale * end[0]:.2f}" '
                     f'y2="{cy - scale * end[1]:.2f}" stroke="black" stroke-width="1.5"/>')
    step = max(1, len(pi_theta) // 5000)
    pts = " ".join(xy(p) for p in pi_theta[::step])
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        *lines,
        f'<polyline class="path" points="{pts}" fill="none" stroke="steelblue" stroke-width="0.6"/>',
        "</svg>",
    ])
