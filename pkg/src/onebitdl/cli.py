"""Command-line front end.

    onebitdl run --experiment sync-rmse --out rmse.csv [--scenario f.toml]
                 [--seed 7] [--threads 4] [--full-scale]
    onebitdl validate --scenario f.toml [--full-scale]
    onebitdl dump-metric --out trace.csv [--scenario f.toml] [--seed 7]

Precedence, lowest to highest: desk-scale defaults, --full-scale preset,
scenario file, command-line flags. Configuration problems exit with status 2
and a one-line diagnostic on stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import ExperimentSpec, SystemConfig, desk_scale, load_scenario, full_scale
from .errors import ConfigError
from .experiments import (run_ber_curve, run_sindr_sweep, run_sync_rmse,
                          sync_metric_trace, write_csv)

_RUNNERS = {
    "sindr-sweep": run_sindr_sweep,
    "sync-rmse": run_sync_rmse,
    "ber-curve": run_ber_curve,
}

# Grids used when the scenario file does not provide an [experiment] table.
_DEFAULT_SPECS = {
    "sindr-sweep": dict(dtau_values=tuple(range(-32, 33, 4)),
                        deps_for_dtau=(0.0, 0.001, 0.01),
                        deps_values=(1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1),
                        dtau_for_deps=(0, 4, 12)),
    "sync-rmse": dict(snr_db=(-16.0, -12.0, -8.0, -4.0, 0.0, 4.0, 8.0, 12.0, 16.0)),
    "ber-curve": dict(snr_db=(-8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0, 12.0, 16.0)),
}


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="onebitdl",
                                  description="Quantized multi-user OFDM downlink simulator")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, out_required):
        p.add_argument("--scenario", help="scenario file (TOML)")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--full-scale", action="store_true",
                       help="start from the full-scale dimension preset")
        if out_required:
            p.add_argument("--out", required=True, help="output CSV path")

    run = sub.add_parser("run", help="run an experiment and write its CSV")
    run.add_argument("--experiment", choices=sorted(_RUNNERS),
                     help="experiment kind (required unless the scenario defines one)")
    run.add_argument("--threads", type=int, default=1,
                     help="worker processes for trial-level parallelism")
    common(run, out_required=True)

    val = sub.add_parser("validate", help="parse and validate a scenario file")
    common(val, out_required=False)

    dump = sub.add_parser("dump-metric", help="write one trial's sync metric trace")
    common(dump, out_required=True)
    return top


def _configure(args) -> tuple:
    """Resolve (spec-or-None, config) honoring the precedence order."""
    base = full_scale() if args.full_scale else desk_scale()
    if args.scenario:
        spec, cfg = load_scenario(args.scenario, base=base)
    else:
        spec, cfg = None, base
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
        cfg.validate()
    return spec, cfg


def _resolve_spec(args, spec) -> ExperimentSpec:
    kind = getattr(args, "experiment", None)
    if spec is not None:
        if kind is not None and kind != spec.kind:
            raise ConfigError(f"--experiment {kind} conflicts with the scenario's "
                              f"experiment kind {spec.kind!r}; drop one of the two")
        return spec
    if kind is None:
        raise ConfigError("no experiment selected: pass --experiment or use a "
                          "scenario file with an [experiment] table")
    return ExperimentSpec(kind=kind, **_DEFAULT_SPECS[kind])


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec, cfg = _configure(args)
        if args.command == "validate":
            what = args.scenario if args.scenario else "built-in defaults"
            print(f"ok: {what} (B={cfg.num_antennas}, U={cfg.num_ues}, "
                  f"N={cfg.fft_size}, S={len(cfg.used_subcarriers)}, "
                  f"G={cfg.cp_len}, L={cfg.num_taps})"
                  + (f", experiment={spec.kind}" if spec else ""))
            return 0
        if args.command == "dump-metric":
            header, rows = sync_metric_trace(cfg)
            write_csv(args.out, header, rows)
            print(f"wrote {args.out} ({len(rows)} rows)")
            return 0
        spec = _resolve_spec(args, spec)
        header, rows = _RUNNERS[spec.kind](spec, cfg, threads=args.threads)
        write_csv(args.out, header, rows)
        print(f"wrote {args.out} ({len(rows)} rows)")
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
