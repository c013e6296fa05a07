"""Figure and table output for a scene: plan view, elevation, metrics."""

from __future__ import annotations

import csv
import os
from collections import Counter

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Polygon

from .errors import IoFailure
from .scene import SceneDocument

_SPECIES_COLORS = {
    "octa": "#4878cf",
    "tetra_up": "#e8a33d",
    "tetra_down": "#d65f5f",
    "half_octa": "#6acc65",
}


def _cell_heights(cell) -> tuple[float, float]:
    zs = [sum(v) / 3.0 for v in cell["vertices"]]
    return min(zs), max(zs)


def _plan_xy(vertex):
    import math

    x, y, z = (float(c) for c in vertex)
    al = x - (x + y + z) / 3.0
    be = (x + y + z) / 3.0 - z
    return (
        al * math.sqrt(2) - be * math.sqrt(2) / 2,
        be * math.sqrt(6) / 2,
    )


def _convex_order(points):
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    import math

    return sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def render_plan(scene: SceneDocument, path: str):
    """Top-down view: every cell's plan footprint, colored by species."""
    fig, ax = plt.subplots(figsize=(8, 8))
    for cell in scene.cells:
        if scene.units == "feet":
            pts = [(v[0], v[1]) for v in cell["vertices"]]
        else:
            pts = [_plan_xy(v) for v in cell["vertices"]]
        hull = _convex_order(sorted(set(pts)))
        ax.add_patch(
            Polygon(
                hull,
                closed=True,
                facecolor=_SPECIES_COLORS.get(cell["species"], "#999999"),
                edgecolor="black",
                linewidth=0.4,
                alpha=0.45,
            )
        )
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.set_title("plan")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_elevation(scene: SceneDocument, path: str):
    """Side view of the frame: members projected onto the X-Z plane."""
    fig, ax = plt.subplots(figsize=(6, 9))
    nodes = scene.frame["nodes"]
    if scene.units == "feet":
        proj = [(n[0], n[2]) for n in nodes]
    else:
        proj = [(n[0] - n[1], sum(n)) for n in nodes]
    for a, b in scene.frame["members"]:
        ax.plot(
            [proj[a][0], proj[b][0]],
            [proj[a][1], proj[b][1]],
            color="#333333",
            linewidth=0.5,
        )
    ax.set_aspect("equal")
    ax.set_title("elevation")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_metrics(scene: SceneDocument, path: str):
    """Per-level cell counts plus totals, as CSV."""
    levels = {}
    for cell in scene.cells:
        lo, _ = _cell_heights(cell)
        levels.setdefault(round(lo, 6), Counter())[cell["species"]] += 1
    species = sorted({c["species"] for c in scene.cells})
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level"] + species + ["cells"])
        for level in sorted(levels):
            counts = levels[level]
            row = [level] + [counts.get(s, 0) for s in species]
            writer.writerow(row + [sum(counts.values())])
        writer.writerow(
            ["total"]
            + [sum(c.get(s, 0) for c in levels.values()) for s in species]
            + [len(scene.cells)]
        )


def generate_report(scene: SceneDocument, outdir: str) -> list[str]:
    """Render plan + elevation figures and the metrics table into outdir."""
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create {outdir}: {exc}") from exc
    outputs = []
    for name, fn in (
        ("plan.png", render_plan),
        ("elevation.png", render_elevation),
        ("metrics.csv", write_metrics),
    ):
        target = os.path.join(outdir, name)
        fn(scene, target)
        outputs.append(target)
    return outputs
