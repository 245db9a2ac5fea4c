"""Command-line front end: figure data, bound comparisons and the oracle suites.

Options come from three layers: built-in defaults, a ``key=value`` config
file (``--config``, ``#`` starts a comment) and command-line flags, each
overriding the previous one.  Config keys are the long flag names with
either dashes or underscores.

Exit codes: 0 success, 1 configuration error, 2 numerical convergence
failure, 3 oracle assertion failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .bounds import ObjectivityParams, optimize_d, pureloss_envelope, qr_compare
from .discord import convergence_profile
from .errors import ConvergenceFailure, OracleAssertionError
from .oracle.suite import run_suites
from .pureloss import lower_bound
from .report import SweepReport
from .spectra import Spectrum, parse_spectrum

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_ORACLE = 0, 1, 2, 3

COMMON_DEFAULTS = {"format": "csv", "out": None, "seed": 0}
COMMAND_DEFAULTS = {
    "figure1": {"E": 1.0, "delta": 0.01, "n_min": 1e3, "n_max": 1e15, "points": 25},
    "figure2": {"E": 1.0, "delta": 0.01, "n_min": 1e3, "n_max": 1e15, "points": 25},
    "compare-qr": {"D": "2", "delta": "0.1", "n_min": 1e3, "n_max": 1e15, "points": 25},
    "pureloss": {"E": 1.0, "n_min": 2.0, "n_max": 1e6, "points": 25},
    "discord-slack": {
        "spectrum": "harmonic",
        "spectrum_a": "harmonic",
        "E": 1.0,
        "E_A": 2.0,
        "n_min": 1e3,
        "n_max": 1e30,
        "points": 28,
    },
    "oracle": {"format": "json"},
}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _float(text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def _int(text):
    value = _float(text)
    if value != int(value):
        raise ConfigError(f"not an integer: {text!r}")
    return int(value)


CONVERTERS = {
    "E": _float,
    "E_A": _float,
    "delta": str,
    "n_min": _float,
    "n_max": _float,
    "points": _int,
    "D": str,
    "seed": _int,
    "format": str,
    "out": str,
    "spectrum": str,
    "spectrum_a": str,
}


def read_config(path: str) -> dict:
    """Parse a ``key=value`` file; blank lines and ``#`` comments are skipped."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="objectivity", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key=value file with defaults for any flag")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--seed")

    def grid(p):
        p.add_argument("--n-min", dest="n_min")
        p.add_argument("--n-max", dest="n_max")
        p.add_argument("--points")

    for name, what in (("figure1", "particle in a box"), ("figure2", "harmonic oscillator")):
        p = sub.add_parser(name, help=f"optimised bound vs N for the {what}")
        common(p)
        grid(p)
        p.add_argument("--E")
        p.add_argument("--delta")

    p = sub.add_parser("compare-qr", help="finite-dimensional bound against the Qi-Ranard bounds")
    common(p)
    grid(p)
    p.add_argument("--D", help="comma-separated dimensions")
    p.add_argument("--delta", help="comma-separated failure fractions")

    p = sub.add_parser("pureloss", help="pure-loss lower bound and upper envelope")
    common(p)
    grid(p)
    p.add_argument("--E", help="energy cap for the envelope (raised to 2/N where smaller)")

    p = sub.add_parser("discord-slack", help="discord-bound slack with delta = sqrt(zeta)")
    common(p)
    grid(p)
    p.add_argument("--spectrum", help="fragment-side spectrum, e.g. harmonic, box, bridge:D=3,omega=1")
    p.add_argument("--spectrum-a", dest="spectrum_a", help="system-side spectrum")
    p.add_argument("--E", help="fragment-side energy cap")
    p.add_argument("--E-A", dest="E_A", help="system-side energy cap")

    p = sub.add_parser("oracle", help="run the finite-dimensional oracle suites")
    common(p)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags into one typed config dict."""
    cfg = dict(COMMON_DEFAULTS)
    cfg.update(COMMAND_DEFAULTS[args.command])
    allowed = set(cfg)
    if args.config:
        for key, value in read_config(args.config).items():
            if key not in allowed:
                raise ConfigError(f"key {key!r} does not apply to {args.command}")
            cfg[key] = value
    for key, value in vars(args).items():
        if key in allowed and value is not None:
            cfg[key] = value
    typed = {key: (CONVERTERS[key](value) if isinstance(value, str) else value) for key, value in cfg.items()}
    typed["command"] = args.command
    if "n_min" in typed:
        if not 0 < typed["n_min"] < typed["n_max"]:
            raise ConfigError("need 0 < n_min < n_max")
        if typed["points"] < 2:
            raise ConfigError("points must be at least 2")
    if typed["format"] not in ("csv", "json"):
        raise ConfigError(f"unknown format {typed['format']!r}")
    return typed


def n_grid(cfg) -> np.ndarray:
    return np.logspace(math.log10(cfg["n_min"]), math.log10(cfg["n_max"]), cfg["points"])


def _header(cfg) -> dict:
    return {"command": cfg["command"], "version": __version__, "seed": cfg["seed"], "config": {k: v for k, v in cfg.items() if k != "command"}}


def _figure(cfg, target) -> SweepReport:
    report = SweepReport(_header(cfg), ("N", "d_opt", "zeta", "bound", "trivial"))
    for N in n_grid(cfg):
        best = optimize_d(target, ObjectivityParams(cfg["E"], float(cfg["delta"]), float(N)))
        report.rows.append({"N": float(N), "d_opt": best.d, "zeta": best.zeta, "bound": best.bound, "trivial": best.trivial})
    return report


def _split(text, conv):
    try:
        return [conv(x) for x in str(text).split(",") if x.strip()]
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _compare_qr(cfg) -> SweepReport:
    cols = ("D", "delta", "N", "b", "b1", "b2", "threshold", "b_nontrivial", "b_beats_b1", "b_beats_b2")
    report = SweepReport(_header(cfg), cols)
    for D in _split(cfg["D"], _int):
        for delta in _split(cfg["delta"], _float):
            for N in n_grid(cfg):
                row = qr_compare(D, delta, float(N))
                report.rows.append({c: getattr(row, c) for c in cols})
    return report


def _pureloss(cfg) -> SweepReport:
    report = SweepReport(_header(cfg), ("N", "E", "lower_bound", "envelope", "ratio"))
    for N in sorted({max(2, int(round(x))) for x in n_grid(cfg)}):
        E = max(cfg["E"], 2.0 / N)
        low = lower_bound(N).value
        env = pureloss_envelope(E, N)
        report.rows.append({"N": N, "E": E, "lower_bound": low, "envelope": env, "ratio": env / low})
    return report


def _discord(cfg) -> SweepReport:
    report = convergence_profile(
        parse_spectrum(cfg["spectrum"]),
        parse_spectrum(cfg["spectrum_a"]),
        cfg["E_A"],
        cfg["E"],
        n_grid(cfg),
    )
    report.header = {**_header(cfg), **report.header}
    return report


def _oracle(cfg) -> tuple[str, int]:
    results = run_suites(cfg["seed"])
    payload = [r.as_dict() for r in results]
    code = EXIT_OK if all(r.ok for r in results) else EXIT_ORACLE
    if cfg["format"] == "csv":
        report = SweepReport(_header(cfg), tuple(payload[0]), payload)
        return report.to_csv(), code
    return json.dumps({"header": _header(cfg), "suites": payload}, indent=2) + "\n", code


def run(cfg: dict) -> tuple[str, int]:
    """Execute a resolved config; returns ``(output text, exit code)``."""
    command = cfg["command"]
    if command == "oracle":
        return _oracle(cfg)
    if command == "figure1":
        report = _figure(cfg, Spectrum.box())
    elif command == "figure2":
        report = _figure(cfg, "harmonic")
    elif command == "compare-qr":
        report = _compare_qr(cfg)
    elif command == "pureloss":
        report = _pureloss(cfg)
    else:
        report = _discord(cfg)
    text = report.to_csv() if cfg["format"] == "csv" else report.to_json()
    return text, EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = resolve(build_parser().parse_args(argv))
        text, code = run(cfg)
    except ConfigError as exc:
        print(f"objectivity: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceFailure as exc:
        print(f"objectivity: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OracleAssertionError as exc:
        print(f"objectivity: oracle assertion failed: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except ValueError as exc:
        print(f"objectivity: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
