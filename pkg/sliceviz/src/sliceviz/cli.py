"""slice-viz command line: render slice CSVs to SVG/PNG region figures."""

from __future__ import annotations

import argparse
import sys

from .render import SliceFigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slice-viz",
                                 description="Render slice CSVs as region figures.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one CSV to an image")
    p.add_argument("--csv", required=True)
    p.add_argument("--witness", action="append", default=[],
                   help="witness column to overlay (repeatable; default: all)")
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="")
    p.add_argument("--no-isotropic", action="store_true")
    p.add_argument("--no-enclosure", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = SliceFigureSpec(
        csv_path=args.csv,
        out_path=args.out,
        witnesses=tuple(args.witness),
        isotropic=not args.no_isotropic,
        enclosure=not args.no_enclosure,
        title=args.title,
    )
    try:
        path = render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
