"""Command-line entry point: ``hstbeam run`` and ``hstbeam compare``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from .config import ScenarioConfig, dbm_to_watts, load_config
from .errors import ConfigError, InfeasibleError
from .sim import RunMode, compare, parse_modes, run, write_compare_csv, write_trace_csv

EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


def _common(parser):
    parser.add_argument("--config", help="key=value scenario file (defaults if omitted)")
    parser.add_argument("--out", required=True, help="output CSV path ('-' for stdout)")
    parser.add_argument("--dt", type=float, help="time step in seconds")
    parser.add_argument("--power-dbm", type=float, help="total transmit power in dBm")
    parser.add_argument("--ns", type=int, help="beams per carriage")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hstbeam",
        description="Location-aware multi-beam downlink simulation for a high-speed train.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one traversal")
    _common(p_run)
    p_run.add_argument("--mode", choices=("bf", "nobf"), default="bf")
    p_run.add_argument("--alloc", choices=("waterfill", "equal"), default="waterfill")
    p_run.add_argument("--interference", choices=("on", "off"), default="on",
                       help="inter-beam interference elimination")
    p_run.add_argument("--link", choices=("sinr", "snr"), default="sinr",
                       help="charge shared beams as interference (sinr) or ignore them (snr)")

    p_cmp = sub.add_parser("compare", help="simulate several modes on one time grid")
    _common(p_cmp)
    p_cmp.add_argument("--modes", required=True,
                       help="comma-separated labels such as bf-waterfill-on,nobf "
                            "or presets bf-gain, alloc-gain, elimination")
    return parser


def _scenario(args) -> ScenarioConfig:
    config = load_config(args.config) if args.config else ScenarioConfig()
    overrides = {}
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.power_dbm is not None:
        overrides["total_power"] = dbm_to_watts(args.power_dbm)
    if args.ns is not None:
        overrides["beams_per_carriage"] = args.ns
    return dataclasses.replace(config, **overrides) if overrides else config


def _open_out(path):
    return sys.stdout if path == "-" else path


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log = logging.getLogger("hstbeam")
    try:
        config = _scenario(args)
        if args.command == "run":
            if args.mode == "nobf" and args.alloc == "waterfill":
                log.info("omnidirectional baseline always splits power equally")
            mode = RunMode(
                beamforming=args.mode == "bf",
                allocation=args.alloc,
                interference_elimination=args.interference == "on",
                interference_model=args.link,
            )
            write_trace_csv(run(config, mode), _open_out(args.out))
        else:
            modes = parse_modes(args.modes)
            if args.ns is not None:
                modes = [dataclasses.replace(m, beams_per_carriage=None) if m.beamforming else m
                         for m in modes]
            write_compare_csv(compare(config, modes), _open_out(args.out))
    except ConfigError as exc:
        print(f"hstbeam: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        print(f"hstbeam: infeasible scenario: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BrokenPipeError:
        # downstream reader (e.g. head) closed early
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return 0


if __name__ == "__main__":
    sys.exit(main())
