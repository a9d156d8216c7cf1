"""SVG drawings of PIC instances.

An axis row numbered 1..N (or segment labels once N exceeds the configured
cutoff), then one row per pack. Intervals are bars, singletons are dots;
witness choices are drawn in the highlight colour. Overlapping intervals of
the same pack are stacked in lanes.
"""
import logging
from bisect import bisect_right
from typing import List, Optional, Tuple

from config import Config
from pic_core import Interval, PicInstance, Selection, compress

logger = logging.getLogger(__name__)

# Geometry and colours; changing any of these changes every golden SVG.
STYLE = {
    'cell': 28,            # px per axis column
    'lane': 14,            # px per lane inside a pack row
    'row_gap': 8,          # px between pack rows
    'left_margin': 64,     # room for pack labels
    'top_margin': 16,
    'axis_height': 40,
    'bar_height': 8,
    'dot_radius': 4,
    'font_size': 11,
    'font_family': 'monospace',
    'target_color': '#1f4e9c',
    'interval_color': '#f28e2b',
    'chosen_color': '#2ca02c',
    'grid_color': '#d0d0d0',
    'text_color': '#222222',
    'background': '#ffffff',
}


class SvgCanvas:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts: List[str] = []

    def rect(self, x: float, y: float, width: float, height: float, fill: str):
        self.parts.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{width:.1f}" height="{height:.1f}" fill="{fill}"/>')

    def circle(self, cx: float, cy: float, r: float, fill: str):
        self.parts.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{r:.1f}" fill="{fill}"/>')

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str):
        self.parts.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="{stroke}" stroke-dasharray="2,2"/>')

    def text(self, x: float, y: float, content: str, anchor: str = 'middle'):
        self.parts.append(
            f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="{anchor}" font-family="{STYLE["font_family"]}" '
            f'font-size="{STYLE["font_size"]}" fill="{STYLE["text_color"]}">{content}</text>')

    def render(self) -> str:
        header = (
            '<?xml version="1.0" standalone="no"?>\n'
            '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n'
            f'<svg version="1.1" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}" xmlns="http://www.w3.org/2000/svg">\n'
        )
        return header + "\n".join(self.parts) + "\n</svg>\n"


def _columns(instance: PicInstance) -> Tuple[List[Interval], bool]:
    """Axis columns in original coordinates, and whether they are compressed segments."""
    if instance.n_bound <= Config.RENDER_AXIS_CUTOFF:
        return [Interval(p, p) for p in range(1, instance.n_bound + 1)], False
    return list(compress(instance).segments), True


def _lanes(intervals: Tuple[Interval, ...]) -> List[int]:
    """Greedy lane per interval so that overlapping intervals never share a lane."""
    ends: List[int] = []
    lanes = []
    for interval in intervals:
        lane = next((i for i, end in enumerate(ends) if end < interval.lo), None)
        if lane is None:
            lane = len(ends)
            ends.append(interval.hi)
        else:
            ends[lane] = interval.hi
        lanes.append(lane)
    return lanes


def render_svg(instance: PicInstance, selection: Optional[Selection] = None) -> str:
    columns, compressed = _columns(instance)
    starts = [column.lo for column in columns]
    chosen = set()
    if selection is not None:
        selection.check(instance)
        chosen = {(k, choice) for k, choice in enumerate(selection.choices, 1)}

    def column_of(point: int) -> int:
        return bisect_right(starts, point) - 1

    def x_of(column: int) -> float:
        return STYLE['left_margin'] + column * STYLE['cell']

    lane_sets = [_lanes(pack.intervals) for pack in instance.packs]
    row_heights = [max(lanes, default=0) * STYLE['lane'] + STYLE['lane'] + STYLE['row_gap'] for lanes in lane_sets]
    width = STYLE['left_margin'] + len(columns) * STYLE['cell'] + STYLE['cell']
    height = STYLE['top_margin'] + STYLE['axis_height'] + sum(row_heights) + STYLE['row_gap']
    canvas = SvgCanvas(width, height)
    canvas.rect(0, 0, width, height, STYLE['background'])

    # Axis: target interval bar plus one label per column.
    axis_y = STYLE['top_margin']
    canvas.rect(x_of(0), axis_y, len(columns) * STYLE['cell'], STYLE['bar_height'], STYLE['target_color'])
    for c, column in enumerate(columns):
        label = str(column.lo) if not compressed or column.is_singleton else f"{column.lo}-{column.hi}"
        canvas.text(x_of(c) + STYLE['cell'] / 2, axis_y + STYLE['bar_height'] + 16, label)
        canvas.line(x_of(c), axis_y + STYLE['axis_height'] - 8, x_of(c), height - STYLE['row_gap'], STYLE['grid_color'])
    canvas.line(x_of(len(columns)), axis_y + STYLE['axis_height'] - 8, x_of(len(columns)),
                height - STYLE['row_gap'], STYLE['grid_color'])

    y = STYLE['top_margin'] + STYLE['axis_height']
    for k, (pack, lanes, row_height) in enumerate(zip(instance.packs, lane_sets, row_heights), 1):
        canvas.text(STYLE['left_margin'] - 8, y + STYLE['lane'] - 4, f"P{k}", anchor='end')
        for index, (interval, lane) in enumerate(zip(pack.intervals, lanes), 1):
            color = STYLE['chosen_color'] if (k, index) in chosen else STYLE['interval_color']
            top = y + lane * STYLE['lane']
            first, last = column_of(interval.lo), column_of(interval.hi)
            if interval.is_singleton:
                canvas.circle(x_of(first) + STYLE['cell'] / 2, top + STYLE['lane'] / 2, STYLE['dot_radius'], color)
            else:
                canvas.rect(x_of(first) + 2, top + (STYLE['lane'] - STYLE['bar_height']) / 2,
                            (last - first + 1) * STYLE['cell'] - 4, STYLE['bar_height'], color)
        y += row_height

    logger.debug(f"Rendered {instance.pack_count} pack rows over {len(columns)} columns")
    return canvas.render()
