"""Standalone SVG scatter plots of a snapshot.

Points are drawn with the global sign (-1)^t removed so consecutive
snapshots do not flip.  Even labels and odd labels get different colors.
For even n each parity class is joined by its own cyclic polyline; for
odd n a single polyline visits all labels in order.  For odd n the
predicted ellipse is overlaid as a closed path.
"""

from __future__ import annotations

import math

import numpy as np

from .asymptotics import sign_aligned
from .harness import RunRecord

SIZE = 600
EVEN_COLOR = "#d62728"
ODD_COLOR = "#2ca02c"
ELLIPSE_COLOR = "#1f77b4"


def _num(v: float) -> str:
    return f"{v:.4f}"


def _ellipse_points(record: RunRecord, t: int, logmag: float, samples: int = 240):
    model = record.model
    if model.parity != "odd" or model.d < 2:
        return None
    m = model.coeff_matrix[:2]
    biggest = float(np.max(np.abs(m)))
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if biggest == 0.0 or abs(det) <= 1e-12 * biggest ** 2:
        return None
    theta = 2.0 * np.pi * np.arange(samples) / samples
    scale = math.exp(t * math.log(model.rate) - logmag)
    return scale * (np.column_stack([np.cos(theta), np.sin(theta)]) @ m.T)


def render_svg(record: RunRecord, t: int) -> str:
    snap = record.snapshot(t)
    cfg = record.config
    n = cfg.n
    state = snap.state()
    pts = sign_aligned(state, per_label=False)
    if pts.shape[1] == 1:
        pts = np.column_stack([pts[:, 0], np.zeros(n)])
    pts = pts[:, :2]
    ellipse = _ellipse_points(record, t, snap.logmag) if math.isfinite(snap.logmag) else None

    # bounding square of the cloud with a 5% margin
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    center = (lo + hi) / 2.0
    half = max(float(np.max(hi - lo)) / 2.0, 1e-300) * 1.05

    def to_px(p):
        x = (p[..., 0] - center[0]) / half
        y = (p[..., 1] - center[1]) / half
        return (x + 1.0) * SIZE / 2.0, (1.0 - y) * SIZE / 2.0

    px, py = to_px(pts)
    title = f"n={n} d={cfg.d} t={t} seed={cfg.seed}"
    if cfg.d > 2:
        title += " (projected onto axes 0,1)"
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{SIZE}" height="{SIZE + 30}" viewBox="0 0 {SIZE} {SIZE + 30}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE + 30}" fill="white"/>',
        f'<text x="10" y="{SIZE + 20}" font-family="sans-serif" font-size="14">{title}</text>',
    ]
    if ellipse is not None:
        ex, ey = to_px(ellipse)
        d = "M " + " L ".join(f"{_num(a)} {_num(b)}" for a, b in zip(ex, ey)) + " Z"
        lines.append(f'<path class="predicted-ellipse" d="{d}" fill="none" '
                     f'stroke="{ELLIPSE_COLOR}" stroke-width="1" stroke-dasharray="4 3"/>')
    if n % 2 == 0:
        groups = [("even", np.arange(0, n, 2), EVEN_COLOR),
                  ("odd", np.arange(1, n, 2), ODD_COLOR)]
    else:
        groups = [("all", np.arange(n), "#7f7f7f")]
    for name, idx, color in groups:
        cyc = np.append(idx, idx[0])
        coords = " ".join(f"{_num(px[i])},{_num(py[i])}" for i in cyc)
        lines.append(f'<polyline class="loop-{name}" points="{coords}" fill="none" '
                     f'stroke="{color}" stroke-opacity="0.5" stroke-width="1"/>')
    for label in range(n):
        color = EVEN_COLOR if label % 2 == 0 else ODD_COLOR
        lines.append(f'<circle class="p{label % 2}" cx="{_num(px[label])}" '
                     f'cy="{_num(py[label])}" r="3" fill="{color}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(record: RunRecord, t: int, path) -> None:
    text = render_svg(record, t)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
