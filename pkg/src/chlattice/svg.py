"""Static SVG diagnostics: traces of all bounding bisectors on a Giraud
chart, the ridge polygon, and marked critical points.

Purely diagnostic (float sampling of exact data); reports stay the source of
truth.  Output is deterministic for a given model.
"""

from __future__ import annotations

import os

from .bisector import SideLabel

W = H = 640
MARGIN = 60


def _path_for_zero_set(quad, box, steps=160):
    """Marching-squares segments of quad = 0 over the box."""
    x0, x1, y0, y1 = box
    vals = [
        [
            quad.approx_eval(x0 + (x1 - x0) * i / steps, y0 + (y1 - y0) * j / steps)
            for j in range(steps + 1)
        ]
        for i in range(steps + 1)
    ]
    segs = []
    for i in range(steps):
        for j in range(steps):
            corners = [
                (vals[i][j], 0, 0), (vals[i + 1][j], 1, 0),
                (vals[i + 1][j + 1], 1, 1), (vals[i][j + 1], 0, 1),
            ]
            pts = []
            for t in range(4):
                va, ax, ay = corners[t]
                vb, bx, by = corners[(t + 1) % 4]
                if va == 0 and vb == 0:
                    continue
                if (va < 0) != (vb < 0):
                    f = abs(va) / (abs(va) + abs(vb))
                    pts.append((ax + (bx - ax) * f, ay + (by - ay) * f))
            if len(pts) >= 2:
                (ua, va_), (ub, vb_) = pts[0], pts[1]
                segs.append(
                    (
                        x0 + (x1 - x0) * (i + ua) / steps,
                        y0 + (y1 - y0) * (j + va_) / steps,
                        x0 + (x1 - x0) * (i + ub) / steps,
                        y0 + (y1 - y0) * (j + vb_) / steps,
                    )
                )
    return segs


def _map(box):
    x0, x1, y0, y1 = box

    def f(x, y):
        px = MARGIN + (x - x0) / (x1 - x0) * (W - 2 * MARGIN)
        py = H - MARGIN - (y - y0) / (y1 - y0) * (H - 2 * MARGIN)
        return px, py

    return f


def emit_chart_svg(model, ridge, path: str, traces=None, critical=None) -> None:
    poly = model.ridge_polygon(ridge)
    chart = poly.chart
    coords = [(c[0].approx().real, c[1].approx().real) for c in poly.vertex_coords]
    xs = [c[0] for c in coords]
    ys = [c[1] for c in coords]
    dx = max(max(xs) - min(xs), 0.05)
    dy = max(max(ys) - min(ys), 0.05)
    box = (
        min(xs) - 0.6 * dx, max(xs) + 0.6 * dx,
        min(ys) - 0.6 * dy, max(ys) + 0.6 * dy,
    )
    m = _map(box)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
    ]
    # axes
    ox, oy = m(0, 0)
    parts.append(
        f'<line x1="{MARGIN}" y1="{oy:.1f}" x2="{W - MARGIN}" y2="{oy:.1f}" '
        'stroke="#bbb" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{ox:.1f}" y1="{MARGIN}" x2="{ox:.1f}" y2="{H - MARGIN}" '
        'stroke="#bbb" stroke-width="1"/>'
    )
    if traces is None:
        traces = {
            lab: chart.trace_of_bisector(b)
            for lab, b in model.bisectors.items()
            if lab not in ridge.pair
        }
    palette = ["#c44", "#484", "#46c", "#a60", "#a3a", "#088", "#666"]
    for t, lab in enumerate(sorted(traces, key=lambda l: l.index)):
        col = palette[t % len(palette)]
        for xA, yA, xB, yB in _path_for_zero_set(traces[lab], box):
            pa, pb = m(xA, yA), m(xB, yB)
            parts.append(
                f'<line x1="{pa[0]:.1f}" y1="{pa[1]:.1f}" x2="{pb[0]:.1f}" '
                f'y2="{pb[1]:.1f}" stroke="{col}" stroke-width="0.7"/>'
            )
    # polygon
    pts = " ".join(f"{m(x, y)[0]:.1f},{m(x, y)[1]:.1f}" for x, y in coords)
    parts.append(
        f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="2.2"/>'
    )
    for (x, y), name in zip(coords, poly.vertex_names):
        px, py = m(x, y)
        parts.append(f'<circle cx="{px:.1f}" cy="{py:.1f}" r="3" fill="black"/>')
        parts.append(
            f'<text x="{px + 5:.1f}" y="{py - 5:.1f}" font-size="10">{name}</text>'
        )
    for cp in critical or []:
        px, py = m(cp["t1"], cp["t2"])
        col = "#d00" if cp.get("inside") else "#07c"
        parts.append(
            f'<circle cx="{px:.1f}" cy="{py:.1f}" r="4" fill="none" '
            f'stroke="{col}" stroke-width="2"/>'
        )
    a, b = sorted(ridge.pair, key=lambda l: l.index)
    parts.append(
        f'<text x="{MARGIN}" y="{MARGIN - 18}" font-size="14">'
        f"p = {model.p}: chart B{a.index} &#8745; B{b.index}</text>"
    )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def emit_all_charts(model, out_dir: str, crit_by_ridge=None) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for r in model.ridges:
        if r.kind != "giraud":
            continue
        ks = sorted(lab.k % 7 for lab in r.pair)
        if min(ks) != 0:
            continue  # one representative per P-orbit
        a, b = sorted(r.pair, key=lambda l: l.index)
        name = f"B{a.index}^B{b.index}"
        path = os.path.join(out_dir, f"p{model.p}_B{a.index}_B{b.index}.svg")
        crit = (crit_by_ridge or {}).get(name)
        emit_chart_svg(model, r, path, critical=crit)
        written.append(path)
    return written
