"""
plot.py — Line charts for regret sweeps and traces.

Draws one polyline per series on linear or log10 axes, with a legend.
Charts are written as self-contained SVG (no external assets) and, through
Pillow, as PNG. Used by the sweep and traces commands of experiment.py.

Usage:
    python plot.py --csv output/sweep.csv --x W --output output/sweep.svg --log
"""

import argparse
import csv
import math
import os
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple
from xml.sax.saxutils import escape

from PIL import Image, ImageDraw, ImageFont

PALETTE = ("#1E5E3A", "#B8461B", "#2B4C9B", "#8E2C8E", "#777777", "#C9A227")


@dataclass
class ChartStyle:
    """Canvas size, margins and colors."""
    width: int = 800
    height: int = 500
    margin_left: int = 80
    margin_right: int = 170
    margin_top: int = 40
    margin_bottom: int = 60
    background: str = "#FFFFFF"
    axis_color: str = "#333333"
    grid_color: str = "#DDDDDD"
    palette: Tuple[str, ...] = PALETTE
    font_size: int = 13
    line_width: int = 2


@dataclass
class Series:
    name: str
    x: Sequence[float]
    y: Sequence[float]
    dashed: bool = False


@dataclass
class Chart:
    title: str
    x_label: str
    y_label: str
    series: List[Series] = field(default_factory=list)
    log_y: bool = False
    floor: float = 1e-12

    def add(self, name: str, x, y, dashed: bool = False):
        self.series.append(Series(name=name, x=list(x), y=list(y), dashed=dashed))


def hex_to_rgb(hex_color: str) -> Tuple[int, int, int]:
    """Convert hex color string to RGB tuple."""
    hex_color = hex_color.lstrip("#")
    return tuple(int(hex_color[i:i+2], 16) for i in (0, 2, 4))


def _transform(chart: Chart, y: float) -> float:
    if chart.log_y:
        return math.log10(max(y, chart.floor))
    return y


def _nice_ticks(lo: float, hi: float, count: int = 5) -> List[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    ticks = []
    value = start
    while value <= hi + 1e-12 * abs(hi):
        ticks.append(value)
        value += step
    return ticks


class ChartLayout:
    """Maps data coordinates to canvas pixels."""

    def __init__(self, chart: Chart, style: ChartStyle):
        if not chart.series:
            raise ValueError("Chart has no series")
        self.chart = chart
        self.style = style
        xs = [x for s in chart.series for x in s.x]
        ys = [_transform(chart, y) for s in chart.series for y in s.y]
        if not xs:
            raise ValueError("Chart series are empty")
        self.x_min, self.x_max = min(xs), max(xs)
        self.y_min, self.y_max = min(ys), max(ys)
        if chart.log_y:
            self.y_min, self.y_max = math.floor(self.y_min), math.ceil(self.y_max)
        if self.x_max == self.x_min:
            self.x_max = self.x_min + 1
        if self.y_max == self.y_min:
            self.y_max = self.y_min + 1
        self.left = style.margin_left
        self.right = style.width - style.margin_right
        self.top = style.margin_top
        self.bottom = style.height - style.margin_bottom

    def px(self, x: float) -> float:
        return self.left + (x - self.x_min) / (self.x_max - self.x_min) * (self.right - self.left)

    def py(self, y: float) -> float:
        v = _transform(self.chart, y)
        return self.bottom - (v - self.y_min) / (self.y_max - self.y_min) * (self.bottom - self.top)

    def y_ticks(self) -> List[Tuple[float, str]]:
        if self.chart.log_y:
            step = max(1, int(math.ceil((self.y_max - self.y_min) / 8)))
            return [(10.0 ** e, f"1e{e}") for e in range(int(self.y_min), int(self.y_max) + 1, step)]
        return [(v, f"{v:g}") for v in _nice_ticks(self.y_min, self.y_max)]

    def x_ticks(self) -> List[Tuple[float, str]]:
        return [(v, f"{v:g}") for v in _nice_ticks(self.x_min, self.x_max)]

    def color(self, index: int) -> str:
        return self.style.palette[index % len(self.style.palette)]


def render_svg(chart: Chart, style: ChartStyle = None) -> str:
    """Render the chart as a standalone SVG document."""
    style = style or ChartStyle()
    layout = ChartLayout(chart, style)
    font = f'font-family="sans-serif" font-size="{style.font_size}"'
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.width}" '
        f'height="{style.height}" viewBox="0 0 {style.width} {style.height}">',
        f'<rect width="100%" height="100%" fill="{style.background}"/>',
        f'<text x="{style.width / 2:.1f}" y="{style.margin_top / 2 + 5:.1f}" '
        f'text-anchor="middle" {font} font-weight="bold">{escape(chart.title)}</text>',
    ]

    for value, label in layout.y_ticks():
        y = layout.py(value)
        out.append(f'<line x1="{layout.left}" y1="{y:.2f}" x2="{layout.right}" y2="{y:.2f}" '
                   f'stroke="{style.grid_color}"/>')
        out.append(f'<text x="{layout.left - 6}" y="{y + 4:.2f}" text-anchor="end" {font}>'
                   f'{escape(label)}</text>')
    for value, label in layout.x_ticks():
        x = layout.px(value)
        out.append(f'<text x="{x:.2f}" y="{layout.bottom + 18}" text-anchor="middle" {font}>'
                   f'{escape(label)}</text>')

    out.append(f'<polyline points="{layout.left},{layout.top} {layout.left},{layout.bottom} '
               f'{layout.right},{layout.bottom}" fill="none" stroke="{style.axis_color}"/>')
    out.append(f'<text x="{(layout.left + layout.right) / 2:.1f}" y="{style.height - 15}" '
               f'text-anchor="middle" {font}>{escape(chart.x_label)}</text>')
    out.append(f'<text x="18" y="{(layout.top + layout.bottom) / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {(layout.top + layout.bottom) / 2:.1f})" {font}>'
               f'{escape(chart.y_label)}</text>')

    for i, s in enumerate(chart.series):
        color = layout.color(i)
        points = " ".join(f"{layout.px(x):.2f},{layout.py(y):.2f}" for x, y in zip(s.x, s.y))
        dash = ' stroke-dasharray="6 4"' if s.dashed else ""
        out.append(f'<polyline class="series" data-name="{escape(s.name)}" points="{points}" '
                   f'fill="none" stroke="{color}" stroke-width="{style.line_width}"{dash}/>')
        ly = layout.top + 10 + 20 * i
        out.append(f'<line x1="{layout.right + 15}" y1="{ly}" x2="{layout.right + 40}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="{style.line_width}"{dash}/>')
        out.append(f'<text x="{layout.right + 46}" y="{ly + 4}" {font}>{escape(s.name)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _load_font(size: int):
    try:
        return ImageFont.truetype("DejaVuSans.ttf", size)
    except (OSError, IOError):
        return ImageFont.load_default()


def render_png(chart: Chart, style: ChartStyle = None) -> Image.Image:
    """Render the chart as an RGB Pillow image."""
    style = style or ChartStyle()
    layout = ChartLayout(chart, style)
    img = Image.new("RGB", (style.width, style.height), hex_to_rgb(style.background))
    draw = ImageDraw.Draw(img)
    font = _load_font(style.font_size)
    axis = hex_to_rgb(style.axis_color)

    for value, label in layout.y_ticks():
        y = layout.py(value)
        draw.line([(layout.left, y), (layout.right, y)], fill=hex_to_rgb(style.grid_color))
        w = draw.textlength(label, font=font)
        draw.text((layout.left - 6 - w, y - style.font_size / 2), label, fill=axis, font=font)
    for value, label in layout.x_ticks():
        x = layout.px(value)
        w = draw.textlength(label, font=font)
        draw.text((x - w / 2, layout.bottom + 6), label, fill=axis, font=font)

    draw.line([(layout.left, layout.top), (layout.left, layout.bottom),
               (layout.right, layout.bottom)], fill=axis, width=1)
    title_w = draw.textlength(chart.title, font=font)
    draw.text(((style.width - title_w) / 2, 8), chart.title, fill=axis, font=font)
    label_w = draw.textlength(chart.x_label, font=font)
    draw.text(((layout.left + layout.right - label_w) / 2, style.height - 25),
              chart.x_label, fill=axis, font=font)

    for i, s in enumerate(chart.series):
        color = hex_to_rgb(layout.color(i))
        points = [(layout.px(x), layout.py(y)) for x, y in zip(s.x, s.y)]
        if len(points) > 1:
            draw.line(points, fill=color, width=style.line_width)
        else:
            (x, y), = points
            draw.ellipse([x - 3, y - 3, x + 3, y + 3], fill=color)
        ly = layout.top + 10 + 20 * i
        draw.line([(layout.right + 15, ly), (layout.right + 40, ly)], fill=color,
                  width=style.line_width)
        draw.text((layout.right + 46, ly - style.font_size / 2), s.name, fill=axis, font=font)

    return img


def save_chart(chart: Chart, output_path: str, style: ChartStyle = None) -> str:
    """Write SVG or PNG depending on the file extension."""
    os.makedirs(os.path.dirname(output_path) or ".", exist_ok=True)
    ext = os.path.splitext(output_path)[1].lower()
    if ext == ".svg":
        with open(output_path, "w") as f:
            f.write(render_svg(chart, style))
    elif ext == ".png":
        render_png(chart, style).save(output_path)
    else:
        raise ValueError(f"Unsupported chart format {ext!r}, use .svg or .png")
    return output_path


def chart_from_csv(csv_path: str, x_column: str, log_y: bool = False,
                   title: str = "") -> Chart:
    """One series per numeric column other than x_column; empty cells are skipped."""
    if not os.path.exists(csv_path):
        raise FileNotFoundError(f"CSV file not found: {csv_path}")
    with open(csv_path) as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise ValueError(f"CSV file is empty: {csv_path}")
    if x_column not in rows[0]:
        raise ValueError(f"CSV file missing column {x_column!r}")
    chart = Chart(title=title or os.path.basename(csv_path), x_label=x_column,
                  y_label="value", log_y=log_y)
    for column in rows[0]:
        if column == x_column:
            continue
        pairs = [(float(r[x_column]), float(r[column])) for r in rows if r[column] not in ("", None)]
        if pairs:
            xs, ys = zip(*pairs)
            chart.add(column, xs, ys, dashed=column.endswith("_bound"))
    return chart


def main():
    parser = argparse.ArgumentParser(description="Chart the columns of a CSV file")
    parser.add_argument("--csv", required=True, help="Input CSV")
    parser.add_argument("--x", default="W", help="Column for the horizontal axis")
    parser.add_argument("--output", required=True, help="Output .svg or .png")
    parser.add_argument("--log", action="store_true", help="log10 vertical axis")
    args = parser.parse_args()

    chart = chart_from_csv(args.csv, args.x, log_y=args.log)
    save_chart(chart, args.output)
    print(f"Chart written to {args.output} ({len(chart.series)} series)")


if __name__ == "__main__":
    main()
