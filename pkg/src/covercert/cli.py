"""Command line front end.

One subcommand per pipeline.  Every subcommand reads an optional config
file (key = value lines) plus repeatable --set overrides, runs the
pipeline, and writes the certificate bundle to --out or stdout.

Exit codes: 0 when every claim was verified (or a search came back empty
or context was recorded), 1 when some claim was refuted at its level,
2 for configuration or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .certify import PIPELINES, ConfigError, bundle_exit_code, load_config, render_bundle

_HELP = {
    "dihedral": "involution pair over Q: commutator order and invariant subfields",
    "quaternionic": "staged run: algebra, torsion, surjectivity, intersection index, discreteness",
    "sl2z": "integral-matrix conjugation: intersection indices and an elliptic word search",
    "hilbert": "Hilbert symbol table for one pair of rationals",
    "units": "dump a norm-one unit slice of a quaternion order",
    "intersect": "intersection index for one conjugator",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covercert",
        description="verify cover-intersection claims and emit certificate bundles",
    )
    sub = parser.add_subparsers(dest="pipeline", required=True, metavar="PIPELINE")
    for name in PIPELINES:
        p = sub.add_parser(name, help=_HELP[name])
        p.add_argument("--config", metavar="PATH", default=None, help="config file of key = value lines")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one config key (repeatable)",
        )
        p.add_argument("--out", metavar="PATH", default=None, help="write the bundle here instead of stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
        if args.out is not None:
            cfg = replace(cfg, out=args.out)
        bundle = PIPELINES[args.pipeline](cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    text = render_bundle(bundle)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return bundle_exit_code(bundle)


if __name__ == "__main__":
    sys.exit(main())
