"""``stc`` command-line front end.

Every subcommand reads one JSON config and writes a table as CSV (17
significant digits) or JSON. Exit codes: 0 success, 1 config error,
2 physics-domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import replace

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .constants import constants_table
from .dynamics import SWEEP_AXES, fidelity_map, grid_points, leakage_trace
from .effective import gamma_parallel, gamma_perp, j_of_phi
from .errors import ConfigError, PhysicsDomainError
from .hubbard import VARIANTS, exchange_couplings, sw_verify
from .linalg import eigh
from .spin import build_h_spin

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS = 0, 1, 2


class Table:
    def __init__(self, columns: list[str], rows: list[list]):
        self.columns = columns
        self.rows = rows


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return str(x)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _json_value(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def to_json(table: Table) -> str:
    rows = [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows]
    return json.dumps(rows, indent=2) + "\n"


def _require_axes(cfg: RunConfig, allowed, command: str, required=None) -> dict:
    axes = cfg.axes()
    for name in axes:
        if name not in allowed:
            raise ConfigError(f"{command}: sweep axis {name!r} is not one of {sorted(allowed)}")
    for name in required or ():
        if name not in axes:
            raise ConfigError(f"{command}: sweep axis {name!r} is required")
    return axes


def _require_hubbard(cfg: RunConfig, command: str):
    if cfg.hubbard is None:
        raise ConfigError(f"{command} needs a 'hubbard' section")
    return cfg.hubbard


def cmd_couplings(cfg: RunConfig, args) -> Table:
    p = _require_hubbard(cfg, "couplings")
    rows = [[v, *exchange_couplings(p, v)] for v in VARIANTS]
    return Table(["variant", "j1_ueV", "j2_ueV", "jsc_ueV"], rows)


def cmd_gammas(cfg: RunConfig, args) -> Table:
    axes = _require_axes(cfg, {"phi", "theta"}, "gammas", ("phi", "theta"))
    rows = []
    for pt in grid_points(axes, ("phi", "theta")):
        gperp = complex(gamma_perp(pt["phi"], pt["theta"]))
        rows.append([pt["phi"], pt["theta"], float(gamma_parallel(pt["phi"], pt["theta"])), gperp.real, gperp.imag])
    return Table(["phi", "theta", "gamma_par", "gamma_perp_re", "gamma_perp_im"], rows)


def cmd_spectrum(cfg: RunConfig, args) -> Table:
    axes = _require_axes(cfg, set(SWEEP_AXES), "spectrum", ("hbar",))
    rows = []
    for pt in grid_points(axes):
        values = eigh(build_h_spin(replace(cfg.spin, **pt).spin_params())).values
        rows.append([*pt.values(), *values])
    return Table([*axes, *(f"e{k}_ueV" for k in range(16))], rows)


def cmd_leakage(cfg: RunConfig, args) -> Table:
    axes = _require_axes(cfg, {"t"}, "leakage", ("t",))
    trace = leakage_trace(cfg.spin.spin_params(), axes["t"], cfg.leakage.mode, cfg.leakage.state)
    return Table(["t_ns", "leakage"], [[t, v] for t, v in zip(trace.times, trace.values)])


def cmd_jphi(cfg: RunConfig, args) -> Table:
    axes = _require_axes(cfg, {"phase"}, "jphi", ("phase",))
    return Table(["phi", "j_eff_ueV"], [[phi, float(j_of_phi(cfg.spin.jsc, phi))] for phi in axes["phase"]])


def cmd_fidelity(cfg: RunConfig, args) -> Table:
    axes = _require_axes(cfg, set(SWEEP_AXES), "fidelity")
    workers = args.workers or cfg.workers
    rows = []
    for row in fidelity_map(cfg.spin, axes, workers=workers):
        rep = row.report
        vals = [rep.t_gate, 1 - rep.fidelity_raw, rep.infidelity, rep.leakage_max] if rep else [None] * 4
        rows.append([*row.point.values(), *vals, row.error])
    return Table([*axes, "t_gate_ns", "infidelity_raw", "infidelity_opt", "leakage_max", "error"], rows)


def cmd_sw_verify(cfg: RunConfig, args) -> Table:
    p = _require_hubbard(cfg, "sw-verify")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        report = sw_verify(p, levels=args.levels)
    rows = []
    for lv in report.levels:
        rows.append(["sw2_mismatch_relative", lv.scale, lv.sw2_relative])
        rows.append(["exact_mismatch_absolute", lv.scale, lv.exact_absolute])
        rows.append(["exact_mismatch_relative", lv.scale, lv.exact_relative])
    rows.append(["fitted_order", None, report.fitted_order])
    for variant, score in report.arbitration.items():
        rows.append([f"arbitration_{variant}_relative", None, score])
    rows.append(["arbitration_winner", None, report.winner])
    return Table(["quantity", "scale", "value"], rows)


COMMANDS = {
    "couplings": cmd_couplings,
    "gammas": cmd_gammas,
    "spectrum": cmd_spectrum,
    "leakage": cmd_leakage,
    "jphi": cmd_jphi,
    "fidelity": cmd_fidelity,
    "sw-verify": cmd_sw_verify,
}


class _Parser(argparse.ArgumentParser):
    # usage mistakes are config errors; exit code 2 is reserved for physics
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


class _VersionAction(argparse.Action):
    def __init__(self, option_strings, dest, **kw):
        super().__init__(option_strings, dest, nargs=0, help="print version and constants table")

    def __call__(self, parser, namespace, values, option_string=None):
        lines = [f"stc {__version__}"] + [f"{k} = {v}" for k, v in constants_table().items()]
        print("\n".join(lines))
        parser.exit()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stc", description="Superconductor-coupled singlet-triplet qubit tools")
    parser.add_argument("--version", action=_VersionAction)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", help="output file (default: config output.path or stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--workers", type=int)
        if name == "sw-verify":
            sp.add_argument("--levels", type=int, default=3, help="number of tunneling halvings + 1")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.workers is not None and args.workers < 1:
            raise ConfigError("--workers must be positive")
        if args.command == "sw-verify" and args.levels < 1:
            raise ConfigError("--levels must be positive")
        cfg = load_config(args.config)
        table = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsDomainError as exc:
        print(f"physics error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    fmt = args.format or cfg.output.format
    text = to_json(table) if fmt == "json" else to_csv(table)
    out = args.out or cfg.output.path
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
