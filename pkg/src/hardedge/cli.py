"""Command-line front end: ``hardedge <subcommand> [flags]``.

Exit status is 0 on success, 1 when an experiment's verdict is ``fail`` and 2
on usage errors, out-of-domain parameters or I/O failures.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import harness
from .errors import HardEdgeError
from .harness import ExperimentReport
from .io import read_report, render_report
from .oracle import N_GUIDELINE, oracle_counts
from .sde import IntegratorConfig, ModelParams, bess_counts, riccati_counts, sine_counts
from .special import ellip_E, ellip_K, rate_bess, script_H

# keys that never enter the embedded configuration
_VOLATILE = ("output", "config")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_common(p, seed=True):
    if seed:
        p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="output file (default: stdout)")
    p.add_argument("--config", default=None, help="key=value file merged beneath flags")


def _add_integrator(p):
    d = IntegratorConfig()
    p.add_argument("--base-step", type=float, default=d.base_step)
    p.add_argument("--tolerance", type=float, default=d.tolerance)
    p.add_argument("--settle-window", type=float, default=d.settle_window)
    p.add_argument("--delta", type=float, default=d.delta)


def _add_model(p, lam=True):
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--a", type=float, default=0.0)
    if lam:
        p.add_argument("--lambda", dest="lam", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hardedge", description="Hard-edge point process simulation and rate functions.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ratefn", help="tabulate K, E, H, gamma and the rate function over a density grid")
    p.add_argument("--rho-min", type=float, default=0.0)
    p.add_argument("--rho-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=5)
    _add_common(p, seed=False)

    p = sub.add_parser("sample", help="raw counting-function samples")
    _add_model(p)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--route", choices=("sde", "riccati", "oracle", "bulk"), default="sde")
    p.add_argument("--n-matrix", type=int, default=400)
    _add_integrator(p)
    _add_common(p)

    p = sub.add_parser("clt", help="mean and variance growth of the count")
    _add_model(p, lam=False)
    p.add_argument("--lambdas", type=_floats, default=[50.0, 100.0, 200.0])
    p.add_argument("--samples", type=int, default=2000)
    _add_integrator(p)
    _add_common(p)

    p = sub.add_parser("transition", help="hard-edge increments against bulk counts")
    _add_model(p)
    p.set_defaults(a=1.0, lam=200.0)
    p.add_argument("--xs", type=_floats, default=[8 * math.pi])
    p.add_argument("--samples", type=int, default=2000)
    _add_integrator(p)
    _add_common(p)

    p = sub.add_parser("ldp", help="rate-function curve and zero-count frequencies")
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--rhos", type=_floats, default=None, help="explicit grid (overrides --rho-min/--rho-max/--steps)")
    p.add_argument("--rho-min", type=float, default=0.0)
    p.add_argument("--rho-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--scales", type=_floats, default=None, help="eigenvalue scales for the Riccati zero-count overlay")
    p.add_argument("--samples", type=int, default=100_000)
    _add_integrator(p)
    _add_common(p)

    p = sub.add_parser("osc", help="decay of the running oscillatory integral")
    _add_model(p, lam=False)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--lambdas", type=_floats, default=[10.0, 100.0, 1000.0])
    p.add_argument("--samples", type=int, default=200)
    _add_integrator(p)
    _add_common(p)

    p = sub.add_parser("oracle-compare", help="phase, Riccati and matrix-oracle counts side by side")
    _add_model(p)
    p.set_defaults(lam=3.0)
    p.add_argument("--n-matrix", type=int, default=400)
    p.add_argument("--samples", type=int, default=500)
    _add_integrator(p)
    _add_common(p)

    p = sub.add_parser("replay", help="re-run the configuration embedded in a report file")
    p.add_argument("source")
    p.add_argument("--output", default=None)
    return parser


# --------------------------------------------------------------------------
# handlers: resolved config dict -> ExperimentReport


def _integrator(cfg):
    return IntegratorConfig(base_step=cfg["base_step"], tolerance=cfg["tolerance"],
                            settle_window=cfg["settle_window"], delta=cfg["delta"])


def _grid(lo, hi, steps):
    if steps < 0:
        raise HardEdgeError("steps must be nonnegative")
    if steps == 1:
        return [float(lo)]
    return [float(v) for v in np.linspace(lo, hi, steps)] if steps else []


def _ratefn(cfg):
    grid = _grid(cfg["rho_min"], cfg["rho_max"], cfg["steps"])
    rep = ExperimentReport("ratefn", {"grid": grid})
    rep.columns = ["rho", "nu", "K", "E", "H", "gamma", "I_bess", "I_sine", "error_bound"]
    for rho in grid:
        ev = rate_bess(rho)
        nu = ev.nu
        rep.rows.append({"rho": rho, "nu": nu, "K": ellip_K(nu) if nu < 1 else math.inf, "E": ellip_E(nu),
                         "H": script_H(nu), "gamma": ev.gamma_at_nu, "I_bess": ev.I_bess, "I_sine": ev.I_sine,
                         "error_bound": ev.quadrature_error_bound})
    return rep


def _sample(cfg):
    beta, a, lam, n, seed = cfg["beta"], cfg["a"], cfg["lam"], cfg["samples"], cfg["seed"]
    ModelParams(beta, a, lam)
    if n < 0:
        raise HardEdgeError("samples must be nonnegative")
    route = cfg["route"]
    rep = ExperimentReport("sample", {"route": route})
    rep.columns = ["stream_index", "value", "process", "provenance", "route", "lambda", "converged", "warning"]
    warning = ""
    if route == "sde":
        res = bess_counts(beta, a, [lam], n, seed, _integrator(cfg))
        values, conv, process = res.values[0], res.converged[0], "bess"
    elif route == "riccati":
        res = riccati_counts(beta, a, [lam * lam], n, seed, _integrator(cfg))
        values, conv, process = res.values[0], res.converged[0], "bess"
    elif route == "bulk":
        res = sine_counts(beta, [lam], n, seed, _integrator(cfg))
        values, conv, process = res.values[0], res.converged[0], "sine"
    else:
        values = oracle_counts(cfg["n_matrix"], beta, a, [lam], n, seed)[0]
        conv, process = np.ones(n, dtype=bool), "bess"
        if cfg["n_matrix"] < N_GUIDELINE * lam * lam:
            warning = "n below 40 lambda^2"
    provenance = "matrix_oracle" if route == "oracle" else "sde"
    for i in range(n):
        rep.rows.append({"stream_index": i, "value": int(values[i]),
                         "process": process, "provenance": provenance, "route": route, "lambda": lam,
                         "converged": bool(conv[i]), "warning": warning})
    return rep


def _clt(cfg):
    return harness.clt_experiment(cfg["beta"], cfg["a"], cfg["lambdas"], cfg["samples"], cfg["seed"], _integrator(cfg))


def _transition(cfg):
    return harness.transition_experiment(cfg["beta"], cfg["a"], cfg["lam"], cfg["xs"], cfg["samples"], cfg["seed"],
                                         _integrator(cfg))


def _ldp(cfg):
    grid = cfg["rhos"] if cfg["rhos"] is not None else _grid(cfg["rho_min"], cfg["rho_max"], cfg["steps"])
    return harness.ldp_curve(grid, cfg["beta"], seed=cfg["seed"], scales=cfg["scales"], n_samples=cfg["samples"],
                             a=cfg["a"], cfg=_integrator(cfg))


def _osc(cfg):
    return harness.oscillation_experiment(cfg["beta"], cfg["a"], cfg["c"], cfg["T"], cfg["lambdas"], cfg["samples"],
                                          cfg["seed"], _integrator(cfg))


def _oracle_compare(cfg):
    return harness.oracle_compare(cfg["beta"], cfg["a"], cfg["lam"], cfg["n_matrix"], cfg["samples"], cfg["seed"],
                                  _integrator(cfg))


HANDLERS = {"ratefn": _ratefn, "sample": _sample, "clt": _clt, "transition": _transition, "ldp": _ldp,
            "osc": _osc, "oracle-compare": _oracle_compare}


def run_config(cfg: dict) -> ExperimentReport:
    """Execute a resolved configuration (as embedded in report files)."""
    return HANDLERS[cfg["command"]](cfg)


# --------------------------------------------------------------------------
# argument handling


def _read_config_file(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{n}: expected key=value")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _subparser(parser, name):
    for action in parser._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name]
    raise UsageError(f"unknown command {name!r}")


def _with_config_file(parser, argv, ns):
    """Re-parse with values from ``--config`` installed as defaults beneath explicit flags."""
    values = _read_config_file(ns.config)
    sp = _subparser(parser, ns.command)
    known = {a.dest: a for a in sp._actions}
    if "lambda" in values:
        values["lam"] = values.pop("lambda")
    for key in values:
        if key not in known or key in _VOLATILE or key == "help":
            raise UsageError(f"unknown config key {key!r}")
    sp.set_defaults(**values)
    return parser.parse_args(argv)


def resolve(argv):
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        raise UsageError("a subcommand is required")
    if getattr(ns, "config", None):
        ns = _with_config_file(parser, argv, ns)
    cfg = {k: v for k, v in vars(ns).items() if k not in _VOLATILE}
    return cfg, ns.output


def _check_output(path):
    if path in (None, "-"):
        return
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK) or (os.path.isdir(path)):
        raise OSError(f"cannot write to {path}")


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg, output = resolve(argv)
        if cfg["command"] == "replay":
            doc = read_report(cfg["source"])
            cfg = doc["config"]
            if cfg.get("command") not in HANDLERS:
                raise UsageError("report carries no replayable configuration")
        _check_output(output)
        report = run_config(cfg)
        _emit(render_report(report, cfg, cfg.get("format", "csv")), output)
    except UsageError as exc:
        print(f"hardedge: error: {exc}", file=sys.stderr)
        return 2
    except (HardEdgeError, ValueError, KeyError) as exc:
        print(f"hardedge: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"hardedge: error: {exc}", file=sys.stderr)
        return 2
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
