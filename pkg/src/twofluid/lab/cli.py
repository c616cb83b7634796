"""Command line entry point: ``run`` and ``sweep``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from ..errors import AdmissibilityError
from .config import ConfigError, load_config
from .runner import StepError, run

SWEEP_HEADER = ("value", "steps_taken", "wall_seconds", "t_final", "final_l1_error")


def _parser():
    p = argparse.ArgumentParser(prog="twofluid-lab", description="Two-fluid plasma experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one configuration")
    r.add_argument("--config", required=True, type=Path)
    r.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")

    s = sub.add_parser("sweep", help="repeat a run over values of one key")
    s.add_argument("--config", required=True, type=Path)
    s.add_argument("--key", required=True)
    s.add_argument("--values", required=True, help="comma separated")
    s.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    return p


def _fmt_report(rep):
    l1 = "" if rep.final_l1_error is None else f" l1_error={rep.final_l1_error:.6e}"
    return f"{rep.scenario}: steps={rep.steps_taken} t={rep.t_final:.6g} wall={rep.wall_seconds:.2f}s{l1}"


def _run(args):
    cfg = load_config(args.config).with_overrides(args.override)
    rep = run(cfg)
    print(_fmt_report(rep))


def _sweep(args):
    base = load_config(args.config).with_overrides(args.override)
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("--values is empty")
    root = Path(base.output_dir) if base.output_dir else Path(".")
    root.mkdir(parents=True, exist_ok=True)
    with (root / "sweep.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow((args.key,) + SWEEP_HEADER[1:])
        for value in values:
            over = {args.key: value}
            if base.output_dir:
                over["output_dir"] = str(root / f"{args.key}_{value}")
            rep = run(base.with_overrides(over))
            l1 = "" if rep.final_l1_error is None else repr(rep.final_l1_error)
            w.writerow((value, rep.steps_taken, repr(rep.wall_seconds), repr(rep.t_final), l1))
            fh.flush()
            print(f"{args.key}={value} " + _fmt_report(rep))


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "run":
            _run(args)
        else:
            _sweep(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StepError, AdmissibilityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
