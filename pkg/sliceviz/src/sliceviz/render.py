"""Deterministic region-figure rendering for slice CSVs.

Every grid node becomes one cell whose fill is a pure function of its labels:
non-states stay blank, states are green, the PPT sub-region blue, and each
witness tints its negative region toward its line color (red, then gold, then
the rest of the palette).  Witness zero-lines are drawn straight from the
affine fit of the witness column; the alpha = beta diagonal is dashed.  The
SVG output is built from fixed-format strings only, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .data import SliceData, affine_fit, load_slice_csv

STATE_COLOR = (116, 196, 118)      # green
PPT_COLOR = (107, 174, 214)        # blue
WITNESS_PALETTE = (
    (214, 39, 40),                 # red
    (184, 134, 11),                # brown/gold
    (148, 103, 189),
    (140, 86, 75),
)
ENCLOSURE_COLOR = (68, 68, 68)
TINT = 0.45

CELL = 4                           # pixels per grid cell
MARGIN_LEFT, MARGIN_RIGHT = 46, 14
MARGIN_TOP, MARGIN_BOTTOM = 30, 40


@dataclass(frozen=True)
class SliceFigureSpec:
    csv_path: str
    out_path: str
    witnesses: tuple = ()          # column names to overlay; () = all in header
    isotropic: bool = True
    enclosure: bool = True
    title: str = ""


def witness_color(index: int) -> tuple:
    return WITNESS_PALETTE[index % len(WITNESS_PALETTE)]


def _blend(base: tuple, over: tuple, frac: float = TINT) -> tuple:
    return tuple(round(b + (o - b) * frac) for b, o in zip(base, over))


def cell_color(is_state: bool, is_ppt: bool, negatives: tuple) -> tuple | None:
    """Fill color for one cell; None = blank (outside the state region).

    `negatives[k]` says whether overlay witness k is negative at this cell;
    tints stack in witness order.
    """
    if not is_state:
        return None
    color = PPT_COLOR if is_ppt else STATE_COLOR
    for k, neg in enumerate(negatives):
        if neg:
            color = _blend(color, witness_color(k))
    return color


def _hex(color: tuple) -> str:
    return "#%02x%02x%02x" % color


def _clip_line_to_rect(c0, ca, cb, x0, x1, y0, y1):
    """Intersection segment of c0 + ca*x + cb*y = 0 with a rectangle, or None."""
    pts = []
    if abs(cb) > 1e-300:
        for x in (x0, x1):
            y = -(c0 + ca * x) / cb
            if y0 - 1e-12 <= y <= y1 + 1e-12:
                pts.append((x, y))
    if abs(ca) > 1e-300:
        for y in (y0, y1):
            x = -(c0 + cb * y) / ca
            if x0 - 1e-12 <= x <= x1 + 1e-12:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    uniq.sort()
    return uniq[0], uniq[-1]


class _Geometry:
    """Maps grid coordinates (alpha, beta) to pixel coordinates (x right, y up)."""

    def __init__(self, data: SliceData):
        self.data = data
        self.plot_w = data.na * CELL
        self.plot_h = data.nb * CELL
        self.width = MARGIN_LEFT + self.plot_w + MARGIN_RIGHT
        self.height = MARGIN_TOP + self.plot_h + MARGIN_BOTTOM
        a, b = data.alphas, data.betas
        self.da = (a[-1] - a[0]) / (len(a) - 1) if len(a) > 1 else 1.0
        self.db = (b[-1] - b[0]) / (len(b) - 1) if len(b) > 1 else 1.0

    def cell_rect(self, i: int, j: int) -> tuple:
        x = MARGIN_LEFT + i * CELL
        y = MARGIN_TOP + self.plot_h - (j + 1) * CELL
        return x, y, CELL, CELL

    def to_px(self, alpha: float, beta: float) -> tuple:
        fx = (alpha - self.data.alphas[0]) / self.da + 0.5
        fy = (beta - self.data.betas[0]) / self.db + 0.5
        return MARGIN_LEFT + fx * CELL, MARGIN_TOP + self.plot_h - fy * CELL

    def bounds(self) -> tuple:
        a, b = self.data.alphas, self.data.betas
        return a[0], a[-1], b[0], b[-1]


def _negatives_grid(data: SliceData, witnesses: tuple) -> list:
    return [[tuple(data.witness_values[w][i][j] < 0.0 for w in witnesses)
             for j in range(data.nb)] for i in range(data.na)]


def build_svg(data: SliceData, spec: SliceFigureSpec) -> str:
    witnesses = tuple(spec.witnesses) or data.witness_names
    for w in witnesses:
        if w not in data.witness_names:
            raise ValueError(f"witness column {w!r} not in CSV header "
                             f"{data.witness_names}")
    geo = _Geometry(data)
    neg = _negatives_grid(data, witnesses)
    out = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d" data-cols="%d" data-rows="%d" data-cell="%d" '
        'data-x0="%d" data-y0="%d" data-plot-h="%d">'
        % (geo.width, geo.height, geo.width, geo.height, data.na, data.nb,
           CELL, MARGIN_LEFT, MARGIN_TOP, geo.plot_h))
    out.append('<rect x="0" y="0" width="%d" height="%d" fill="#ffffff"/>'
               % (geo.width, geo.height))

    # cells, run-length merged along beta within each alpha column
    for i in range(data.na):
        j = 0
        while j < data.nb:
            color = cell_color(data.is_state[i][j], data.is_ppt[i][j], neg[i][j])
            run = 1
            while j + run < data.nb and cell_color(
                    data.is_state[i][j + run], data.is_ppt[i][j + run],
                    neg[i][j + run]) == color:
                run += 1
            if color is not None:
                x = MARGIN_LEFT + i * CELL
                y = MARGIN_TOP + geo.plot_h - (j + run) * CELL
                out.append('<rect x="%d" y="%d" width="%d" height="%d" '
                           'fill="%s" data-i="%d" data-j="%d" data-run="%d"/>'
                           % (x, y, CELL, run * CELL, _hex(color), i, j, run))
            j += run

    x0, x1, y0, y1 = geo.bounds()

    # enclosure boundary: edges between enclosure and non-enclosure cells
    if spec.enclosure:
        segs = []
        for i in range(data.na):
            for j in range(data.nb):
                if not data.in_enclosure[i][j]:
                    continue
                x, y, w, h = geo.cell_rect(i, j)
                if i + 1 >= data.na or not data.in_enclosure[i + 1][j]:
                    segs.append((x + w, y, x + w, y + h))
                if i == 0 or not data.in_enclosure[i - 1][j]:
                    segs.append((x, y, x, y + h))
                if j + 1 >= data.nb or not data.in_enclosure[i][j + 1]:
                    segs.append((x, y, x + w, y))
                if j == 0 or not data.in_enclosure[i][j - 1]:
                    segs.append((x, y + h, x + w, y + h))
        for sx, sy, ex, ey in segs:
            out.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="%s" '
                       'stroke-width="0.8"/>' % (sx, sy, ex, ey,
                                                 _hex(ENCLOSURE_COLOR)))

    # witness zero-lines from the affine fit
    for k, w in enumerate(witnesses):
        c0, ca, cb = affine_fit(data, w)
        seg = _clip_line_to_rect(c0, ca, cb, x0, x1, y0, y1)
        if seg is None:
            continue
        (ax, ay), (bx, by) = seg
        px0, py0 = geo.to_px(ax, ay)
        px1, py1 = geo.to_px(bx, by)
        out.append('<line x1="%.4f" y1="%.4f" x2="%.4f" y2="%.4f" stroke="%s" '
                   'stroke-width="2" data-witness="%s" data-line="%.12e,%.12e,%.12e"/>'
                   % (px0, py0, px1, py1, _hex(witness_color(k)), w, c0, ca, cb))

    # isotropic diagonal alpha = beta
    if spec.isotropic:
        lo = max(x0, y0)
        hi = min(x1, y1)
        if hi > lo:
            px0, py0 = geo.to_px(lo, lo)
            px1, py1 = geo.to_px(hi, hi)
            out.append('<line x1="%.4f" y1="%.4f" x2="%.4f" y2="%.4f" '
                       'stroke="#000000" stroke-width="1.2" '
                       'stroke-dasharray="4,3" data-isotropic="1"/>'
                       % (px0, py0, px1, py1))

    # frame, labels, title (fixed font for reproducibility)
    out.append('<rect x="%d" y="%d" width="%d" height="%d" fill="none" '
               'stroke="#000000" stroke-width="1"/>'
               % (MARGIN_LEFT, MARGIN_TOP, geo.plot_w, geo.plot_h))
    font = 'font-family="monospace" font-size="10" fill="#000000"'
    out.append('<text x="%d" y="%d" %s>alpha</text>'
               % (MARGIN_LEFT + geo.plot_w // 2 - 15, geo.height - 8, font))
    out.append('<text x="10" y="%d" %s transform="rotate(-90 10 %d)">beta</text>'
               % (MARGIN_TOP + geo.plot_h // 2 + 12, font,
                  MARGIN_TOP + geo.plot_h // 2 + 12))
    out.append('<text x="%d" y="%d" %s>%.3g</text>'
               % (MARGIN_LEFT - 4, geo.height - MARGIN_BOTTOM + 12, font, x0))
    out.append('<text x="%d" y="%d" %s>%.3g</text>'
               % (MARGIN_LEFT + geo.plot_w - 12, geo.height - MARGIN_BOTTOM + 12,
                  font, x1))
    out.append('<text x="%d" y="%d" %s>%.3g</text>'
               % (MARGIN_LEFT - 34, MARGIN_TOP + geo.plot_h, font, y0))
    out.append('<text x="%d" y="%d" %s>%.3g</text>'
               % (MARGIN_LEFT - 34, MARGIN_TOP + 8, font, y1))
    if spec.title:
        out.append('<text x="%d" y="18" %s>%s</text>'
                   % (MARGIN_LEFT, font, spec.title))
    legend_x = MARGIN_LEFT
    for k, w in enumerate(witnesses):
        out.append('<rect x="%d" y="%d" width="8" height="8" fill="%s"/>'
                   % (legend_x, geo.height - 26, _hex(witness_color(k))))
        out.append('<text x="%d" y="%d" %s>%s&lt;0</text>'
                   % (legend_x + 11, geo.height - 18, font, w))
        legend_x += 11 + 7 * (len(w) + 2) + 12
    out.append("</svg>")
    return "\n".join(out) + "\n"


def build_png(data: SliceData, spec: SliceFigureSpec):
    """Raster variant of the same figure (one cell = CELL x CELL pixel block)."""
    from PIL import Image, ImageDraw

    witnesses = tuple(spec.witnesses) or data.witness_names
    for w in witnesses:
        if w not in data.witness_names:
            raise ValueError(f"witness column {w!r} not in CSV header")
    geo = _Geometry(data)
    neg = _negatives_grid(data, witnesses)
    img = Image.new("RGB", (geo.width, geo.height), (255, 255, 255))
    draw = ImageDraw.Draw(img)
    for i in range(data.na):
        for j in range(data.nb):
            color = cell_color(data.is_state[i][j], data.is_ppt[i][j], neg[i][j])
            if color is None:
                continue
            x, y, w, h = geo.cell_rect(i, j)
            draw.rectangle([x, y, x + w - 1, y + h - 1], fill=color)
    x0, x1, y0, y1 = geo.bounds()
    for k, w in enumerate(witnesses):
        seg = _clip_line_to_rect(*affine_fit(data, w), x0, x1, y0, y1)
        if seg:
            draw.line([geo.to_px(*seg[0]), geo.to_px(*seg[1])],
                      fill=witness_color(k), width=2)
    if spec.isotropic:
        lo, hi = max(x0, y0), min(x1, y1)
        if hi > lo:
            draw.line([geo.to_px(lo, lo), geo.to_px(hi, hi)], fill=(0, 0, 0))
    draw.rectangle([MARGIN_LEFT, MARGIN_TOP, MARGIN_LEFT + geo.plot_w,
                    MARGIN_TOP + geo.plot_h], outline=(0, 0, 0))
    return img


def render(spec: SliceFigureSpec) -> str:
    """Render the CSV referenced by the spec; the suffix of out_path picks the
    format (.svg or .png).  Raises before writing anything on malformed input."""
    data = load_slice_csv(spec.csv_path)
    out = Path(spec.out_path)
    if out.suffix == ".svg":
        text = build_svg(data, spec)
        out.write_text(text)
    elif out.suffix == ".png":
        img = build_png(data, spec)
        img.save(out, format="PNG")
    else:
        raise ValueError(f"unsupported output format {out.suffix!r} "
                         "(use .svg or .png)")
    return str(out)
