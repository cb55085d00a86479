"""Incidence images as binary PPM (P6).

Rows are objectives (top to bottom), columns are theories (left to right).
Colour scale: white for zero, blue for positive and red for negative speed-up
(darker means larger |delta|, clamped at 1), grey for undefined cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .experiment import Cell, SpeedupMatrix

WHITE = (255, 255, 255)
GREY = (128, 128, 128)


@dataclass(frozen=True)
class RenderSpec:
    cell: int = 8
    grayscale: bool = False
    panels: int = 1

    def __post_init__(self):
        if self.cell < 1 or self.panels < 1:
            raise ValueError("cell size and panel count must be positive")


def _shade(v: Fraction) -> int:
    return int(200 * (1 - min(abs(v), Fraction(1))))


def color(cell: Cell, grayscale: bool = False) -> tuple[int, int, int]:
    v = cell.value
    if v is None:
        return GREY
    if v == 0:
        return WHITE
    if grayscale:
        if v < 0:
            return WHITE
        g = int(230 * (1 - min(v, Fraction(1))))
        return (g, g, g)
    s = _shade(v)
    return (s, s, 255) if v > 0 else (255, s, s)


def panel_ranges(ncols: int, panels: int) -> list[range]:
    panels = min(panels, ncols)
    base, extra = divmod(ncols, panels)
    out, start = [], 0
    for k in range(panels):
        width = base + (1 if k < extra else 0)
        out.append(range(start, start + width))
        start += width
    return out


def _ppm(rows: list[list[tuple[int, int, int]]], cell: int) -> bytes:
    height = len(rows) * cell
    width = len(rows[0]) * cell
    body = bytearray()
    for row in rows:
        line = b"".join(bytes(c) * cell for c in row)
        body += line * cell
    return f"P6\n{width} {height}\n255\n".encode() + bytes(body)


def render_incidence(matrix: SpeedupMatrix, spec: RenderSpec = RenderSpec()) -> list[bytes]:
    """One PPM image per panel."""
    nrows, ncols = matrix.shape
    if nrows == 0 or ncols == 0:
        raise ValueError("cannot render an empty matrix")
    colors = [[color(c, spec.grayscale) for c in row] for row in matrix.cells]
    return [
        _ppm([[row[c] for c in cols] for row in colors], spec.cell)
        for cols in panel_ranges(ncols, spec.panels)
    ]


def read_ppm(data: bytes) -> tuple[int, int, bytes]:
    """Width, height and raw RGB bytes of a P6 image written by this module."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h = (int(x) for x in parts[1].split())
    return w, h, parts[3]
