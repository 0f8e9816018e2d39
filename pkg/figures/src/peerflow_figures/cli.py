"""Render figures and sensitivity tables from a peerflow run directory.

    peerflow-figures render FIGID --in DIR [--out DIR]
    peerflow-figures tables SUMMARY_CSV... --out DIR
"""

from __future__ import annotations

import argparse
import sys

from .render import RenderError, render
from .tables import TableError, render_tables


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="peerflow-figures", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    render_p = sub.add_parser("render", help="render one figure id to PNG")
    render_p.add_argument("figure")
    render_p.add_argument("--in", dest="input_dir", required=True,
                          help="directory holding fig<N>.csv (peerflow figdata output)")
    render_p.add_argument("--out", help="image directory (default: the input directory)")

    tables_p = sub.add_parser("tables", help="format sweep summaries into tables")
    tables_p.add_argument("summaries", nargs="+", help="table_summary.csv paths")
    tables_p.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "render":
            path = render(args.figure, args.input_dir, args.out or args.input_dir)
            print(f"wrote {path}")
        else:
            for path in render_tables(args.summaries, args.out):
                print(f"wrote {path}")
    except (RenderError, TableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
