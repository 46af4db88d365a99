"""Region-figure renderer for magic-simplex slice CSVs."""

from .data import SliceData, affine_fit, load_slice_csv
from .render import (SliceFigureSpec, build_png, build_svg, cell_color, render,
                     witness_color)

__version__ = "0.1.0"
