"""Figure CLI: `hyperdec-plots {threshold,decay,components}`.

Each subcommand reads simulator output files and writes one figure as
both PNG and SVG. Exit codes: 0 written, 2 bad input or schema.
"""

from __future__ import annotations

import argparse
import sys

from .figures import (
    NoDataError,
    SchemaError,
    plot_components,
    plot_decay,
    plot_threshold,
)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperdec-plots",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p_th = sub.add_parser("threshold", help="failure rate vs p, one curve "
                                            "per group value")
    p_th.add_argument("inputs", nargs="+", metavar="CSV")
    p_th.add_argument("--out", required=True, metavar="IMAGE")
    p_th.add_argument("--x", default="p", help="x-axis field")
    p_th.add_argument("--y", default="logical_failures",
                      help="count field divided by trials")
    p_th.add_argument("--group-by", default="L", help="one curve per value")
    p_th.add_argument("--log-x", default=True,
                      action=argparse.BooleanOptionalAction)
    p_th.add_argument("--log-y", default=True,
                      action=argparse.BooleanOptionalAction)

    p_de = sub.add_parser("decay", help="mean syndrome weight vs round")
    p_de.add_argument("inputs", nargs="+", metavar="WEIGHTS_CSV")
    p_de.add_argument("--out", required=True, metavar="IMAGE")
    p_de.add_argument("--log-y", default=True,
                      action=argparse.BooleanOptionalAction)

    p_co = sub.add_parser("components", help="histogram of mean max "
                                             "component extents")
    p_co.add_argument("inputs", nargs="+", metavar="CSV")
    p_co.add_argument("--out", required=True, metavar="IMAGE")

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "threshold":
            res = plot_threshold(args.inputs, args.out, x=args.x, y=args.y,
                                 group_by=args.group_by, log_x=args.log_x,
                                 log_y=args.log_y)
        elif args.command == "decay":
            res = plot_decay(args.inputs, args.out, log_y=args.log_y)
        else:
            res = plot_components(args.inputs, args.out)
    except (SchemaError, NoDataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    written = " ".join(str(p) for p in res.paths)
    print(f"wrote {written} ({res.curves} curve(s))")
    return 0


if __name__ == "__main__":
    sys.exit(main())
