"""Serialise datasets to CSV, JSON and SVG.

All three writers are deterministic: identical datasets give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import os
from xml.sax.saxutils import escape

from .errors import DomainError, EmitError
from .experiments import Dataset

FORMATS = ("csv", "json", "svg")

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")


def _num(v: float) -> str:
    return format(v, ".17g")


def to_csv(ds: Dataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series", "x", "y"])
    for s in ds.series:
        for x, y in s.points:
            writer.writerow([s.label, _num(x), _num(y)])
    return buf.getvalue()


def to_json(ds: Dataset) -> str:
    return json.dumps(ds.to_dict(), indent=2, allow_nan=False) + "\n"


def from_json(text: str) -> Dataset:
    return Dataset.from_dict(json.loads(text))


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def to_svg(ds: Dataset, width: int = 640, height: int = 420) -> str:
    left, right, top, bottom = 80, 150, 40, 60
    plot_w = width - left - right
    plot_h = height - top - bottom
    xs = [x for s in ds.series for x in s.xs]
    ys = [y for s in ds.series for y in s.ys]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(min(ys), 0.0), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + plot_w / 2:.2f}" y="{top - 15}" text-anchor="middle" font-size="14">{escape(ds.label)}</text>',
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        out.append(
            f'<line x1="{px(t):.2f}" y1="{top + plot_h}" x2="{px(t):.2f}" y2="{top + plot_h + 5}" stroke="black"/>'
        )
        out.append(f'<text x="{px(t):.2f}" y="{top + plot_h + 18}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{left - 5}" y1="{py(t):.2f}" x2="{left}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py(t) + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    out.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{height - 15}" text-anchor="middle">{escape(ds.axes[0])}</text>'
    )
    out.append(
        f'<text x="20" y="{top + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {top + plot_h / 2:.2f})">{escape(ds.axes[1])}</text>'
    )
    for i, s in enumerate(ds.series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in s.points)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        for x, y in s.points:
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" fill="{color}"/>')
        ly = top + 10 + 18 * i
        lx = left + plot_w + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


_WRITERS = {"csv": to_csv, "json": to_json, "svg": to_svg}


def render(ds: Dataset, fmt: str) -> str:
    if fmt not in _WRITERS:
        raise DomainError(f"unknown format {fmt!r}; expected one of {list(FORMATS)}")
    return _WRITERS[fmt](ds)


def emit(ds: Dataset, fmt: str, destination) -> None:
    text = render(ds, fmt)
    try:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise EmitError(os.fspath(destination), exc.strerror or exc) from exc


def load_json(path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())


def format_from_path(path) -> str | None:
    ext = os.path.splitext(os.fspath(path))[1].lower().lstrip(".")
    return ext if ext in FORMATS else None
