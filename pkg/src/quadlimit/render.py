"""SVG and ASCII views of delimitation results.

Constituency boundaries are traced along cell edges: every unit edge between
a constituency cell and a cell outside the constituency (or the grid
exterior) is kept, edges interior to the constituency cancel out, and the
survivors are chained into closed loops. Merged, non-rectangular
constituencies therefore render as a single outline with no interior lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .popgrid import DotGrid
from .quadtree import Constituency, DelimitationResult, paint_cells

SVG_NS = "http://www.w3.org/2000/svg"

# Screen coordinates, y down: right, down, left, up.
_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class RenderStyle:
    cell_size_px: int = 24
    constituency_color: str = "black"
    constituency_width: int = 2
    state_color: str = "blue"
    state_width: int = 3
    dot_radius_px: int = 3
    draw_dots: bool = True
    background: str = "white"

    def __post_init__(self):
        if self.cell_size_px < 1:
            raise ValueError("cell_size_px must be >= 1")
        if self.constituency_width < 1 or self.state_width < 1:
            raise ValueError("stroke widths must be >= 1")


def boundary_loops(cells: set[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Chain the outer edges of a cell set into closed vertex loops.

    Edges are oriented so the interior stays on the right of the walking
    direction; loops come out clockwise in image coordinates, collinear runs
    collapsed, ordered by their topmost-leftmost vertex.
    """
    # vertex -> outgoing (to-vertex, direction index)
    outgoing: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}

    def add(frm, to, d):
        outgoing.setdefault(frm, []).append((to, d))

    for (x, y) in cells:
        if (x, y - 1) not in cells:
            add((x, y), (x + 1, y), 0)
        if (x + 1, y) not in cells:
            add((x + 1, y), (x + 1, y + 1), 1)
        if (x, y + 1) not in cells:
            add((x + 1, y + 1), (x, y + 1), 2)
        if (x - 1, y) not in cells:
            add((x, y + 1), (x, y), 3)

    loops = []
    while outgoing:
        start = min(outgoing, key=lambda v: (v[1], v[0]))
        loop = [start]
        vertex = start
        incoming = None
        while True:
            options = outgoing[vertex]
            if incoming is None or len(options) == 1:
                nxt, d = options[0]
            else:
                # Pinch vertex: take the sharpest turn toward the interior
                # (right turn first) to keep each loop simple.
                nxt, d = min(options, key=lambda o: (o[1] - incoming) % 4 or 4)
            options.remove((nxt, d))
            if not options:
                del outgoing[vertex]
            if nxt == start:
                break
            loop.append(nxt)
            vertex, incoming = nxt, d
        loops.append(_collapse_collinear(loop))
    return loops


def _collapse_collinear(loop: list[tuple[int, int]]) -> list[tuple[int, int]]:
    def direction(a, b):
        return ((b[0] > a[0]) - (b[0] < a[0]), (b[1] > a[1]) - (b[1] < a[1]))

    out = []
    n = len(loop)
    for i, v in enumerate(loop):
        if direction(loop[i - 1], v) != direction(v, loop[(i + 1) % n]):
            out.append(v)
    # Rotate so the topmost-leftmost corner leads.
    lead = out.index(min(out, key=lambda v: (v[1], v[0])))
    return out[lead:] + out[:lead]


def constituency_cells(c: Constituency) -> set[tuple[int, int]]:
    return {cell for r in c.shape for cell in r.cells()}


def _loops_to_path(loops: list[list[tuple[int, int]]], scale: int) -> str:
    parts = []
    for loop in loops:
        coords = [f"{x * scale} {y * scale}" for x, y in loop]
        parts.append("M " + " L ".join(coords) + " Z")
    return " ".join(parts)


def render_svg(result: DelimitationResult, grid: DotGrid,
               style: RenderStyle = RenderStyle()) -> str:
    """Standalone SVG map: dots, one outline path per constituency, state
    boundaries on top. Byte-identical output for identical inputs."""
    if (grid.width, grid.height) != (result.width, result.height):
        raise ValueError(
            f"result {result.width}x{result.height} does not match "
            f"grid {grid.width}x{grid.height}"
        )
    cell = style.cell_size_px
    w_px, h_px = grid.width * cell, grid.height * cell
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="{SVG_NS}" width="{w_px}" height="{h_px}" '
        f'viewBox="0 0 {w_px} {h_px}">',
        f'  <rect width="{w_px}" height="{h_px}" fill="{style.background}"/>',
    ]

    if style.draw_dots:
        lines.append('  <g id="dots" fill="black">')
        for y in range(grid.height):
            for x in range(grid.width):
                k = int(grid.counts[y, x])
                if k == 0:
                    continue
                side = math.isqrt(k - 1) + 1  # ceil(sqrt(k))
                for p in range(k):
                    cx = (x + (p % side + 0.5) / side) * cell
                    cy = (y + (p // side + 0.5) / side) * cell
                    lines.append(f'    <circle cx="{cx:.2f}" cy="{cy:.2f}" '
                                 f'r="{style.dot_radius_px}"/>')
        lines.append("  </g>")

    lines.append(f'  <g id="constituencies" fill="none" '
                 f'stroke="{style.constituency_color}" '
                 f'stroke-width="{style.constituency_width}">')
    for c in result.constituencies:
        path = _loops_to_path(boundary_loops(constituency_cells(c)), cell)
        lines.append(f'    <path id="c{c.id}" d="{path}"/>')
    lines.append("  </g>")

    if result.state_labels is not None:
        lines.append(f'  <g id="states" fill="none" stroke="{style.state_color}" '
                     f'stroke-width="{style.state_width}">')
        labels = result.state_labels
        for state in sorted({lab for row in labels for lab in row}):
            cells = {(x, y)
                     for y in range(result.height)
                     for x in range(result.width) if labels[y][x] == state}
            path = _loops_to_path(boundary_loops(cells), cell)
            lines.append(f'    <path id="state-{state}" d="{path}"/>')
        lines.append("  </g>")

    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_ascii_grid(result: DelimitationResult) -> str:
    """One constituency-id token per cell, row per line; '.' marks cells the
    result does not own (possible only for malformed inputs)."""
    owner = paint_cells(result)
    width = max(len(str(result.count)), 1)
    rows = []
    for y in range(result.height):
        rows.append(" ".join(
            (str(int(v)) if v else ".").rjust(width) for v in owner[y]
        ))
    return "\n".join(rows) + "\n"
