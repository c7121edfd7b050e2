"""Minimal SVG line chart for the solution curve (lam horizontal, u(0) vertical)."""

from __future__ import annotations

import math

WIDTH, HEIGHT = 800, 600
_ML, _MR, _MT, _MB = 80, 30, 40, 60


def _ticks(lo, hi, n=5):
    span = hi - lo
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((k * mag for k in (1, 2, 5, 10) if k * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-9 * span:
        out.append(round(t, 12))
        t += step
    return out


def curve_svg(lams, alphas, *, endpoint=None, title="") -> str:
    """Polyline chart of ``(lam, alpha)`` pairs; ``endpoint`` is ``(lam0, alpha_star)``."""
    pts = [(float(l), float(a)) for l, a in zip(lams, alphas) if math.isfinite(l) and math.isfinite(a)]
    if endpoint is not None and all(v is not None and math.isfinite(v) for v in endpoint):
        pts_all = pts + [tuple(map(float, endpoint))]
    else:
        endpoint = None
        pts_all = pts
    if not pts_all:
        pts_all = [(0.0, 0.0), (1.0, 1.0)]
    xs = [p[0] for p in pts_all]
    ys = [p[1] for p in pts_all]
    x0, x1 = min(0.0, min(xs)), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    if x1 <= x0:
        x1 = x0 + 1.0
    if y1 <= y0:
        y1 = y0 + 1.0
    x1 += 0.05 * (x1 - x0)
    y1 += 0.05 * (y1 - y0)
    pw, ph = WIDTH - _ML - _MR, HEIGHT - _MT - _MB

    def X(v):
        return _ML + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return _MT + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{X(t):.2f}" y1="{_MT + ph}" x2="{X(t):.2f}" y2="{_MT + ph + 6}" stroke="black"/>')
        out.append(f'<text x="{X(t):.2f}" y="{_MT + ph + 22}" font-size="13" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{_ML - 6}" y1="{Y(t):.2f}" x2="{_ML}" y2="{Y(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{_ML - 10}" y="{Y(t) + 4:.2f}" font-size="13" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{_ML + pw / 2}" y="{HEIGHT - 15}" font-size="15" text-anchor="middle">λ</text>')
    out.append(
        f'<text x="20" y="{_MT + ph / 2}" font-size="15" text-anchor="middle" '
        f'transform="rotate(-90 20 {_MT + ph / 2})">u(0)</text>'
    )
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="24" font-size="15" text-anchor="middle">{title}</text>')
    if pts:
        path = " ".join(f"{X(l):.2f},{Y(a):.2f}" for l, a in sorted(pts))
        out.append(f'<polyline points="{path}" fill="none" stroke="#1f4e9c" stroke-width="2"/>')
    if endpoint is not None:
        out.append(f'<circle cx="{X(endpoint[0]):.2f}" cy="{Y(endpoint[1]):.2f}" r="4" fill="#c0392b"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
