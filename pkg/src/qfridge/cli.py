"""Command line entry point.

    qfridge run <config> [--out PATH] [--jobs N] [--plot]
    qfridge validate <config>
    qfridge list-figures

``<config>`` is a YAML file or the name of a bundled configuration such as
``fig3``.  Exit status: 0 success, 1 invalid configuration, 2 some sweep
points failed, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

from qfridge.sweep import ConfigError, emit_csv, load_config, run_sweep

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARTIAL = 2
EXIT_IO = 3

log = logging.getLogger("qfridge")


def bundled_configs() -> dict:
    """Map of bundled configuration name to its path."""
    root = resources.files("qfridge") / "configs"
    return {p.name[: -len(".yaml")]: Path(str(p)) for p in root.iterdir() if p.name.endswith(".yaml")}


def resolve_config(name_or_path: str) -> Path:
    path = Path(name_or_path)
    if path.exists():
        return path
    known = bundled_configs()
    if name_or_path in known:
        return known[name_or_path]
    return path  # let the caller hit the I/O error


def _load(arg: str):
    path = resolve_config(arg)
    try:
        return load_config(path), None
    except OSError as exc:
        log.error("cannot read %s: %s", path, exc)
        return None, EXIT_IO
    except ConfigError as exc:
        log.error("invalid configuration %s: %s", path, exc)
        return None, EXIT_INVALID


def cmd_run(args) -> int:
    cfg, status = _load(args.config)
    if cfg is None:
        return status
    out = cfg.output_path(args.out)
    result = run_sweep(cfg, jobs=args.jobs)
    try:
        if out.parent != Path(""):
            out.parent.mkdir(parents=True, exist_ok=True)
        emit_csv(result, out)
        print(out)
        if args.plot:
            from qfridge.plotting import plot_sweep

            png = plot_sweep(result, out.with_suffix(".png"), title=cfg.name)
            print(png)
    except OSError as exc:
        log.error("cannot write output: %s", exc)
        return EXIT_IO
    failed = result.failures
    if failed:
        log.error("%d of %d points failed", len(failed), len(result.rows))
        for row in failed:
            log.error("  %s=%g: %s", result.axis, row[result.axis], row["error"])
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg, status = _load(args.config)
    if cfg is None:
        return status
    n = cfg.sweep.steps * cfg.n_series
    print(f"{cfg.name}: ok ({cfg.solver}, {n} points)")
    return EXIT_OK


def cmd_list(args) -> int:
    for name, path in sorted(bundled_configs().items()):
        with open(path, encoding="utf-8") as fh:
            first = fh.readline().lstrip("# ").strip()
        print(f"{name:12s} {first}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfridge", description="Absorption-refrigerator sweeps.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a sweep and write CSV")
    run.add_argument("config", help="YAML file or bundled name (see list-figures)")
    run.add_argument("--out", help="CSV path (default: the config's output field)")
    run.add_argument("--jobs", type=int, default=1, help="worker processes")
    run.add_argument("--plot", action="store_true", help="also write a PNG next to the CSV")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check a configuration without solving")
    val.add_argument("config")
    val.set_defaults(func=cmd_validate)

    lst = sub.add_parser("list-figures", help="list bundled reference configurations")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "jobs", 1) is not None and getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
