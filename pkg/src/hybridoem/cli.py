"""Command-line interface.

Subcommands: ``steady``, ``spectrum``, ``power-sweep``, ``delay``,
``classify``.  Each reads a TOML run configuration and writes CSV or JSON.

Exit codes: 0 success, 1 parse/validation error, 2 solver error, 3 I/O
error.  A dynamically unstable operating point prints a warning to stderr
but does not change the exit code.
"""

import argparse
import sys
from dataclasses import replace

from .config import RunConfig, parse_config
from .errors import ConfigError, HybridOEMError, ValidationError
from .model import validate_params
from .output import ResultEnvelope, emit_results
from .response import group_delay, probe_transmission
from .sweeps import classify_regime, power_sweep, spectrum_sweep
from .stability import assess_stability
from .steady import solve_steady_state

__all__ = ["run_command", "main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_IO = 3


def _steady_columns(ss, report):
    return {
        "n_o": [float(ss.n_o)],
        "n_e": [float(ss.n_e)],
        "Q_s": [float(ss.Q_s)],
        "a_s_re": [float(ss.a_s.real)], "a_s_im": [float(ss.a_s.imag)],
        "b_s_re": [float(ss.b_s.real)], "b_s_im": [float(ss.b_s.imag)],
        "Delta_o_eff_rad_s": [float(ss.Delta_o_eff)],
        "Delta_e_eff_rad_s": [float(ss.Delta_e_eff)],
        "residual": [float(ss.residual)],
        "multistable": [bool(ss.multistable)],
        "margin_rad_s": [float(report.margin)],
        "stable": [bool(report.stable)],
    }


def _run_steady(cfg, warnings):
    ss = solve_steady_state(cfg.system, cfg.drive)
    report = assess_stability(cfg.system, ss)
    if not report.stable:
        warnings.append("operating point is dynamically unstable")
    return _steady_columns(ss, report), {}


def _run_spectrum(cfg, warnings):
    spec = spectrum_sweep(cfg.system, cfg.drive, cfg.axis)
    if not spec.stability.stable:
        warnings.append("operating point is dynamically unstable")
    cols = {
        "delta_p_rad_s": [float(p.Delta_p) for p in spec.points],
        "delta_rad_s": [float(p.delta) for p in spec.points],
        "t_re": [float(p.t.real) for p in spec.points],
        "t_im": [float(p.t.imag) for p in spec.points],
        "t_sq": [float(p.t_sq) for p in spec.points],
        "phase_rad": [float(p.phase) for p in spec.points],
        "stable": [bool(p.stable) for p in spec.points],
    }
    return cols, {}


def _run_power_sweep(cfg, warnings):
    scan = power_sweep(cfg.system, cfg.drive, cfg.powers)
    if scan.failures:
        details = "; ".join(f"P_o={scan.powers[i]!r} W: {msg}"
                            for i, msg in scan.failures.items())
        raise HybridOEMError(f"solver failed at {len(scan.failures)} scan point(s): {details}")
    cols = {
        "P_o_W": [float(p) for p in scan.powers],
        "t_sq_peak": [float(v) for v in scan.t_sq_peak],
        "margin_rad_s": [float(m) for m in scan.margins],
    }
    scalars = {}
    if scan.threshold is not None:
        scalars["threshold_W"] = float(scan.threshold)
    if (scan.margins > 0).any():
        warnings.append("scan includes dynamically unstable points")
    return cols, scalars


def _run_delay(cfg, warnings):
    ss = solve_steady_state(cfg.system, cfg.drive)
    report = assess_stability(cfg.system, ss)
    if not report.stable:
        warnings.append("operating point is dynamically unstable")
    analytic = group_delay(cfg.system, cfg.drive, ss, method="analytic",
                           step=cfg.delay_step)
    fd = group_delay(cfg.system, cfg.drive, ss, method="finite-difference",
                     step=cfg.delay_step)
    cols = {
        "tau_g_analytic_s": [float(analytic.tau_g)],
        "tau_g_fd_s": [float(fd.tau_g)],
        "step_rad_s": [float(fd.step)],
        "stable": [bool(report.stable)],
    }
    return cols, {}


def _run_classify(cfg, warnings):
    spec = spectrum_sweep(cfg.system, cfg.drive, cfg.axis)
    if not spec.stability.stable:
        warnings.append("operating point is dynamically unstable")
    label = classify_regime(spec)
    cols = {
        "label": [label.label],
        "center_t_sq": [float(label.center_t_sq)],
        "bare_reference": [float(label.bare_reference)],
        "max_t_sq": [float(label.max_t_sq)],
        "width_rad_s": [float(label.width)],
        "stable": [bool(spec.stability.stable)],
    }
    return cols, {}


_RUNNERS = {
    "steady": _run_steady,
    "spectrum": _run_spectrum,
    "power-sweep": _run_power_sweep,
    "delay": _run_delay,
    "classify": _run_classify,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hybridoem",
        description="Mechanically mediated probe response of a hybrid "
                    "optical/microwave cavity system.")
    sub = parser.add_subparsers(dest="task", required=True)
    for task in _RUNNERS:
        p = sub.add_parser(task, help=f"run the {task} task")
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out", default=None, help="output path (default: config 'out' or stdout)")
        p.add_argument("--format", default=None, choices=("csv", "json"),
                       help="output format (overrides config)")
        p.add_argument("--convention", default=None,
                       choices=("standard", "paper-literal"),
                       help="drive-amplitude convention (overrides config)")
        p.add_argument("--quiet", action="store_true", help="suppress informational output")
    return parser


def run_command(argv):
    """Run one CLI invocation; returns the process exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK

    def info(msg):
        if not args.quiet:
            print(msg, file=sys.stderr)

    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"hybridoem: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        print(f"hybridoem: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if cfg.task != args.task:
        print(f"hybridoem: config task {cfg.task!r} does not match "
              f"subcommand {args.task!r}", file=sys.stderr)
        return EXIT_CONFIG

    if args.convention is not None and args.convention != cfg.drive.convention:
        cfg = replace(cfg, drive=replace(cfg.drive, convention=args.convention))
    if args.format is not None:
        cfg = replace(cfg, format=args.format)
    out_path = args.out if args.out is not None else cfg.out

    warnings = list(validate_params(cfg.system, cfg.drive).warnings)
    try:
        columns, scalars = _RUNNERS[cfg.task](cfg, warnings)
    except ValidationError as exc:
        print(f"hybridoem: validation error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HybridOEMError as exc:
        print(f"hybridoem: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    env = ResultEnvelope(task=cfg.task, config=cfg.to_dict(), columns=columns,
                         scalars=scalars, warnings=warnings,
                         convention=cfg.drive.convention)
    data = emit_results(env, cfg.format)
    for w in warnings:
        info(f"hybridoem: warning: {w}")
    if out_path is None:
        sys.stdout.write(data.decode())
    else:
        try:
            with open(out_path, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            print(f"hybridoem: cannot write output: {exc}", file=sys.stderr)
            return EXIT_IO
        info(f"hybridoem: wrote {out_path}")
    return EXIT_OK


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
