"""Command-line front end: BER sweeps, channel dumps, complexity, plot scripts.

Configs are flat ``key = value`` text files (``#`` starts a comment); every
value can also be overridden on the command line as trailing ``key=value``
arguments.  Each command writes its outputs plus a ``run_manifest.json``
sidecar that records the resolved configuration and master seed, which is
enough to reproduce the run bit-exactly.

Exit codes: 0 on success, 1 on validation errors, 2 on runtime errors.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .channel import format_channel_dump, random_diffuse_ir
from .errors import ConfigError, FramingError
from .modem import SCHEMES, OfdmConfig, complexity_report
from .sim import CHANNEL_DIFFUSED, CHANNEL_LOS, CHANNEL_MODES, SweepConfig, SweepResult, run_ber_sweep

CSV_HEADER = "scheme,channel_mode,snr_db,bits,errors,ber,stderr"

# Desk-scale diffused-room defaults: N=256 QPSK at Ts=0.75 ns with a 65-sample
# cyclic prefix covering a 64-tap channel of 8 ns RMS delay spread.
DEFAULT_CONFIG: dict[str, str] = {
    "n": "256",
    "qam_order": "4",
    "sample_time_ns": "0.75",
    "cp_len": "65",
    "channel_mode": CHANNEL_DIFFUSED,
    "rms_delay_ns": "8.0",
    "tap_spacing_ns": "0.75",
    "taps": "64",
    "schemes": "aco,flip",
    "snr_db": "8,14,20,26,33,40",
    "min_bit_errors": "300",
    "max_bits": "8000000",
    "seed": "1",
    "batch_windows": "512",
}

_CHANNEL_ALIASES = {"los": CHANNEL_LOS, CHANNEL_LOS: CHANNEL_LOS, CHANNEL_DIFFUSED: CHANNEL_DIFFUSED}


def parse_config_file(path: str) -> dict[str, tuple[str, str]]:
    """Read a flat key=value file into {key: (value, "path:line")}."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    entries: dict[str, tuple[str, str]] = {}
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{lineno}: missing key before '='")
        if key in entries:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        entries[key.lower()] = (value, f"{path}:{lineno}")
    return entries


def _resolve(args) -> dict[str, tuple[str, str]]:
    """Defaults <- config file <- key=value overrides <- dedicated flags."""
    resolved = {k: (v, "default") for k, v in DEFAULT_CONFIG.items()}
    if args.config:
        resolved.update(parse_config_file(args.config))
    for kv in getattr(args, "overrides", []) or []:
        if "=" not in kv:
            raise ConfigError(f"override {kv!r}: expected key=value")
        key, value = (part.strip() for part in kv.split("=", 1))
        resolved[key.lower()] = (value, f"override {kv!r}")
    if getattr(args, "channel", None):
        resolved["channel_mode"] = (args.channel, "--channel")
    if args.seed is not None:
        resolved["seed"] = (str(args.seed), "--seed")
    unknown = set(resolved) - set(DEFAULT_CONFIG)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{resolved[key][1]}: unknown key {key!r}")
    return resolved


def _convert(resolved, key, kind):
    value, source = resolved[key]
    try:
        if kind is int:
            return int(value)
        if kind is float:
            return float(value)
        if kind == "floats":
            return tuple(float(part) for part in value.split(",") if part.strip())
        if kind == "schemes":
            schemes = tuple(part.strip() for part in value.split(",") if part.strip())
            for s in schemes:
                if s not in SCHEMES:
                    raise ValueError(f"unknown scheme {s!r}")
            return schemes
        if kind == "channel_mode":
            mode = _CHANNEL_ALIASES.get(value.strip().lower())
            if mode is None:
                raise ValueError(f"expected one of {sorted(set(_CHANNEL_ALIASES))}")
            return mode
    except ValueError as exc:
        raise ConfigError(f"{source}: key {key!r}: invalid value {value!r} ({exc})") from exc
    raise AssertionError(kind)


def build_sweep_config(resolved: dict[str, tuple[str, str]]) -> SweepConfig:
    ofdm = OfdmConfig(
        n=_convert(resolved, "n", int),
        cp_len=_convert(resolved, "cp_len", int),
        m=_convert(resolved, "qam_order", int),
        sample_time=_convert(resolved, "sample_time_ns", float) * 1e-9,
    )
    return SweepConfig(
        ofdm=ofdm,
        snr_grid_db=_convert(resolved, "snr_db", "floats"),
        schemes=_convert(resolved, "schemes", "schemes"),
        channel_mode=_convert(resolved, "channel_mode", "channel_mode"),
        min_bit_errors=_convert(resolved, "min_bit_errors", int),
        max_bits=_convert(resolved, "max_bits", int),
        master_seed=_convert(resolved, "seed", int),
        rms_delay_spread=_convert(resolved, "rms_delay_ns", float) * 1e-9,
        tap_spacing=_convert(resolved, "tap_spacing_ns", float) * 1e-9,
        tap_count=_convert(resolved, "taps", int),
        batch_windows=_convert(resolved, "batch_windows", int),
    )


def render_csv(result: SweepResult) -> str:
    """Deterministic CSV body: schemes in config order, grid order per scheme."""
    lines = [CSV_HEADER]
    mode = result.config.channel_mode
    for scheme in result.config.schemes:
        for point in result.points[scheme]:
            lines.append(
                f"{scheme},{mode},{point.snr_db!r},{point.bits},{point.bit_errors},"
                f"{point.ber!r},{point.stderr!r}"
            )
    return "\n".join(lines) + "\n"


def _write_manifest(out_dir: str, command: str, resolved: dict[str, tuple[str, str]], args) -> str:
    manifest = {
        "tool": "optofdm",
        "tool_version": __version__,
        "command": command,
        "config_path": args.config,
        "overrides": list(getattr(args, "overrides", []) or []),
        "resolved_config": {k: resolved[k][0] for k in sorted(resolved)},
        "master_seed": int(resolved["seed"][0]),
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    path = os.path.join(out_dir, "run_manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _ensure_out(args) -> str:
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def cmd_ber_sweep(args) -> int:
    resolved = _resolve(args)
    cfg = build_sweep_config(resolved)
    out_dir = _ensure_out(args)
    result = run_ber_sweep(cfg)
    csv_path = os.path.join(out_dir, "ber.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_csv(result))
    manifest_path = _write_manifest(out_dir, "ber-sweep", resolved, args)
    print(f"wrote {csv_path}")
    print(f"wrote {manifest_path}")
    return 0


def cmd_channel_gen(args) -> int:
    resolved = _resolve(args)
    d = _convert(resolved, "rms_delay_ns", float) * 1e-9
    dtau = _convert(resolved, "tap_spacing_ns", float) * 1e-9
    taps = _convert(resolved, "taps", int)
    seed = _convert(resolved, "seed", int)
    if d <= 0:
        raise ConfigError(f"rms_delay_ns must be positive, got {d * 1e9}")
    out_dir = _ensure_out(args)
    h = random_diffuse_ir(d, dtau, taps, np.random.default_rng(seed))
    path = os.path.join(out_dir, "channel.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_channel_dump(h, d, seed))
    manifest_path = _write_manifest(out_dir, "channel-gen", resolved, args)
    print(f"sum_h_squared = {h.energy():.12g}")
    print(f"realized_rms_delay_ns = {h.rms_delay_spread() * 1e9:.6g}")
    print(f"wrote {path}")
    print(f"wrote {manifest_path}")
    return 0


def cmd_complexity(args) -> int:
    resolved = _resolve(args)
    cfg = OfdmConfig(
        n=_convert(resolved, "n", int),
        cp_len=_convert(resolved, "cp_len", int),
        m=_convert(resolved, "qam_order", int),
        sample_time=_convert(resolved, "sample_time_ns", float) * 1e-9,
    )
    report = complexity_report(cfg, args.frames)
    sys.stdout.write(report.as_text())
    return 0


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""BER-vs-SNR plot generated by optofdm {version}; expects matplotlib."""
{warning}import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), {csv_rel!r})
OUT_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "ber.png")

curves = {{}}
with open(CSV_PATH, newline="") as fh:
    for row in csv.DictReader(fh):
        key = (row["scheme"], row["channel_mode"])
        curves.setdefault(key, []).append((float(row["snr_db"]), float(row["ber"])))

fig, ax = plt.subplots(figsize=(7, 5))
for (scheme, mode), pts in sorted(curves.items()):
    pts.sort()
    ax.semilogy([p[0] for p in pts], [p[1] for p in pts], marker="o",
                label=f"{{scheme}} / {{mode}}")
ax.set_xlabel("electrical SNR (dB)")
ax.set_ylabel("bit error rate")
ax.grid(True, which="both", alpha=0.4)
if curves:
    ax.legend()
else:
    ax.set_title("no data rows in CSV")
fig.tight_layout()
fig.savefig(OUT_PATH, dpi=150)
print(f"wrote {{OUT_PATH}}")
'''


def cmd_plot_script(args) -> int:
    csv_path = args.csv
    try:
        with open(csv_path, "r", encoding="utf-8") as fh:
            lines = [line.rstrip("\n") for line in fh]
    except OSError as exc:
        raise ConfigError(f"cannot read CSV {csv_path}: {exc}") from exc
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigError(f"{csv_path}:1: expected header {CSV_HEADER!r}")
    n_rows = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.count(",") != CSV_HEADER.count(","):
            raise ConfigError(f"{csv_path}:{lineno}: expected {CSV_HEADER.count(',') + 1} columns")
        n_rows += 1
    out_dir = args.out or (os.path.dirname(os.path.abspath(csv_path)) or ".")
    os.makedirs(out_dir, exist_ok=True)
    warning = "" if n_rows else "# WARNING: the CSV has no data rows; the plot will be empty.\n"
    script = _PLOT_TEMPLATE.format(
        version=__version__,
        warning=warning,
        csv_rel=os.path.relpath(os.path.abspath(csv_path), os.path.abspath(out_dir)),
    )
    path = os.path.join(out_dir, "plot_ber.py")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(script)
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, metavar="U64", help="master RNG seed")
    common.add_argument("--config", default=None, metavar="PATH", help="flat key=value config file")
    common.add_argument("--out", default=None, metavar="DIR", help="output directory (default: .)")

    parser = argparse.ArgumentParser(prog="optofdm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"optofdm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ber-sweep", parents=[common], help="run a Monte Carlo BER sweep")
    p.add_argument("--channel", choices=("los", "diffused"), default=None,
                   help="channel mode shorthand (los maps to los_awgn)")
    p.add_argument("overrides", nargs="*", metavar="key=value", help="config overrides")
    p.set_defaults(func=cmd_ber_sweep)

    p = sub.add_parser("channel-gen", parents=[common], help="dump one diffuse channel realization")
    p.add_argument("overrides", nargs="*", metavar="key=value", help="config overrides")
    p.set_defaults(func=cmd_channel_gen)

    p = sub.add_parser("complexity", parents=[common], help="print the transform budget report")
    p.add_argument("--frames", type=int, default=1000, help="frame-pair windows for the totals")
    p.add_argument("overrides", nargs="*", metavar="key=value", help="config overrides")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("plot-script", parents=[common], help="emit a matplotlib plotting script")
    p.add_argument("csv", help="path to a ber.csv produced by ber-sweep")
    p.set_defaults(func=cmd_plot_script)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FramingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - map any runtime failure to exit 2
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
