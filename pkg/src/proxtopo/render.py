"""SVG plots of region labelings and nerve complexes."""
from __future__ import annotations

import numpy as np

from .descriptive import DescriptiveSpace
from .errors import NoRealization
from .jordan import RegionLabeling
from .nerves import Cover, SimplicialComplex

REGION_FILLS = ("#f4f4f4", "#9ecae1", "#fdae6b", "#a1d99b", "#bcbddc", "#fc9272")
SIZE = 480


def _frame(xmin, ymin, xmax, ymax, body: list[str]) -> str:
    w, h = xmax - xmin, ymax - ymin
    scale = SIZE / max(w, h, 1e-9)
    # flip y so the plot reads like the plane
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * scale:.1f}" height="{h * scale:.1f}" '
        f'viewBox="{xmin:.6g} {-ymax:.6g} {w:.6g} {h:.6g}">'
    )
    return "\n".join([head, '<g transform="scale(1,-1)">', *body, "</g>", "</svg>", ""])


def labeling_svg(lab: RegionLabeling) -> str:
    """Bounded regions shaded, curve cells dark, the exact curve drawn on top."""
    cell = lab.cell_size
    x0, y0 = lab.origin
    rows, cols = lab.labels.shape
    body = []
    for r in range(rows):
        row = lab.labels[r]
        starts = np.flatnonzero(np.r_[True, row[1:] != row[:-1]])
        ends = np.r_[starts[1:], cols]
        for a, b in zip(starts, ends):
            v = int(row[a])
            fill = "#555555" if v == 0 else REGION_FILLS[(v - 1) % len(REGION_FILLS)]
            body.append(
                f'<rect x="{x0 + a * cell:.6g}" y="{y0 + r * cell:.6g}" width="{(b - a) * cell:.6g}" '
                f'height="{cell:.6g}" fill="{fill}"/>'
            )
    if lab.curve is not None:
        for ch in lab.curve.chains:
            pts = " ".join(f"{x:.6g},{y:.6g}" for x, y in ch)
            tag = "polygon" if lab.curve.closed else "polyline"
            body.append(f'<{tag} points="{pts}" fill="none" stroke="#d62728" stroke-width="{cell / 2:.6g}"/>')
    return _frame(x0, y0, x0 + cols * cell, y0 + rows * cell, body)


def _positions(cover: Cover) -> dict:
    if cover.graph is not None and cover.graph.positions:
        return dict(cover.graph.positions)
    if cover.space is not None:
        base = cover.space.base if isinstance(cover.space, DescriptiveSpace) else cover.space
        return {p.id: p.coords[:2] for p in base.points}
    raise NoRealization("cover has no coordinates to draw")


def nerve_svg(cover: Cover, k: SimplicialComplex) -> str:
    """Cover points in grey, nerve vertices at element centroids, edges and triangles between them."""
    pos = _positions(cover)
    cent = [np.mean([pos[v] for v in e], axis=0) for e in cover.elements]
    pts = np.array(list(pos.values()) + [c for c in cent])
    xmin, ymin = pts.min(axis=0) - 0.5
    xmax, ymax = pts.max(axis=0) + 0.5
    r = max(xmax - xmin, ymax - ymin) / 80
    body = []
    if cover.graph is not None:
        for u, v in cover.graph.edges:
            (x1, y1), (x2, y2) = pos[u], pos[v]
            body.append(f'<line x1="{x1:.6g}" y1="{y1:.6g}" x2="{x2:.6g}" y2="{y2:.6g}" stroke="#bbbbbb"/>')
    for x, y in pos.values():
        body.append(f'<circle cx="{x:.6g}" cy="{y:.6g}" r="{r / 2:.6g}" fill="#999999"/>')
    for s in k.faces(2):
        tri = " ".join(f"{cent[i][0]:.6g},{cent[i][1]:.6g}" for i in s)
        body.append(f'<polygon points="{tri}" fill="#1f77b4" fill-opacity="0.2"/>')
    for a, b in k.faces(1):
        body.append(
            f'<line x1="{cent[a][0]:.6g}" y1="{cent[a][1]:.6g}" x2="{cent[b][0]:.6g}" y2="{cent[b][1]:.6g}" '
            f'stroke="#1f77b4" stroke-width="{r / 2:.6g}"/>'
        )
    for x, y in cent:
        body.append(f'<circle cx="{x:.6g}" cy="{y:.6g}" r="{r:.6g}" fill="#1f77b4"/>')
    return _frame(float(xmin), float(ymin), float(xmax), float(ymax), body)
