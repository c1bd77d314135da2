"""Command-line front end for the experiment harness.

Each subcommand maps to one experiment kind.  Settings come from an optional
YAML config file (flat keys matching ExperimentConfig fields, documented in
the README); --seed, --out and --threads override the file.  Results land in
the fixed-schema CSV; the loopback additionally writes the packet I/Q file.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import yaml

from .experiments import (
    ExperimentConfig,
    loopback_rows,
    run_experiment,
    run_loopback,
    write_csv,
)

_LIST_FIELDS = ("ebn0_db", "estimator_bins", "ofdm_schemes", "asymmetry")

COMMANDS = {
    "ber-seq": "ber_sequence",
    "ber-ofdm": "ber_ofdm",
    "rotation-mse": "rotation_mse",
    "design-curves": "design_curves",
    "papr-table": "papr_table",
    "stability": "stability_report",
    "loopback": "loopback",
}

# reference defaults per experiment kind
KIND_DEFAULTS = {
    "ber_sequence": dict(num_zeros=64, channel="fading", channel_taps=5,
                         ebn0_db=(0.0, 4.0, 8.0, 12.0, 16.0), trials=20000),
    "ber_ofdm": dict(num_zeros=32, ebn0_db=(8.0, 12.0, 16.0, 20.0), trials=1000),
    "rotation_mse": dict(num_zeros=31, ebn0_db=(0.0, 4.0, 8.0, 12.0, 16.0),
                         trials=10000, estimator_bins=(64, 1024)),
    "design_curves": dict(num_zeros=8),
    "papr_table": dict(),
    "stability_report": dict(num_zeros=8, radius=1.176, asymmetry=1.0),
    "loopback": dict(),
}

ENERGY_NOTE = (
    "Eb counts total transmitted energy (codeword, or packet incl. CP and "
    "preambles) per payload information bit"
)


def load_config(kind: str, path: str = None, overrides: dict = None) -> ExperimentConfig:
    """Merge kind defaults, a YAML config file, and CLI overrides."""
    settings = dict(KIND_DEFAULTS[kind])
    if path:
        with open(path) as fh:
            loaded = yaml.safe_load(fh) or {}
        if not isinstance(loaded, dict):
            raise ValueError(f"config file {path} must hold a key-value mapping")
        loaded.pop("kind", None)
        settings.update(loaded)
    for key, value in (overrides or {}).items():
        if value is not None:
            settings[key] = value
    field_names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(settings) - field_names
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key in _LIST_FIELDS:
        if key in settings and isinstance(settings[key], list):
            settings[key] = tuple(settings[key])
    return ExperimentConfig(kind=kind, **settings)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jbmocz",
        description="Zero-constellation modulation experiments (CSV output)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=f"run the {name} experiment")
        cmd.add_argument("--config", help="YAML config file")
        cmd.add_argument("--seed", type=int, help="master seed")
        cmd.add_argument("--out", help="output CSV path")
        cmd.add_argument("--threads", type=int, help="worker threads")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    kind = COMMANDS[args.command]
    overrides = {"seed": args.seed, "out": args.out, "threads": args.threads}
    config = load_config(kind, args.config, overrides)

    if kind == "loopback":
        iq_path = (config.out or "loopback") + ".iq"
        report = run_loopback(config, iq_path=iq_path)
        rows = loopback_rows(report, config)
        print(f"loopback: header errors {report.header_errors}/{report.header_bits}, "
              f"payload errors {report.payload_errors}/{report.payload_bits}, "
              f"payload papr {report.payload_papr_db:.2f} dB, "
              f"template papr {report.template_papr_db:.2f} dB")
        print(f"I/Q packet written to {iq_path}")
    else:
        rows = run_experiment(config)

    out = config.out or f"{args.command}.csv"
    write_csv(rows, out, header_note=ENERGY_NOTE)
    print(f"{len(rows)} rows -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
