"""Shared helpers: dataclass configs become command-line flags, results go out as CSV."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import sys


def parse_config(cls, argv=None):
    """Build an instance of dataclass ``cls`` from ``--field value`` flags."""
    parser = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        if isinstance(default, tuple):
            kind = type(default[0]) if default else float
            parser.add_argument(f"--{f.name.replace('_', '-')}", type=kind, nargs="+", default=default)
        else:
            parser.add_argument(f"--{f.name.replace('_', '-')}", type=type(default), default=default)
    parser.add_argument("--out", help="CSV path (default: stdout)")
    ns = vars(parser.parse_args(argv))
    out = ns.pop("out")
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in ns.items()}), out


def write_rows(header, rows, out=None) -> None:
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if out:
            fh.close()
