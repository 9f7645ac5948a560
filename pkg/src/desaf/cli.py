"""Command line entry point: ``desaf run|compare|sweep``.

A JSON config file (``--config``) holds a flat object whose keys are the
long flag names with dashes or underscores; flags given on the command line
override it.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .de_core import DeConfig
from .de_nsaf import DeNsafConfig
from .harness import (
    ALGORITHMS,
    Comparison,
    Entry,
    ExperimentConfig,
    compare,
    run_experiment,
    sweep,
    benchmark_configs,
)

DEFAULTS = {
    "algo": "nsaf",
    "taps": 32,
    "subbands": 4,
    "snr_db": 20.0,
    "trials": 20,
    "blocks": 2000,
    "seed": 0,
    "mu": None,
    "delta": 1e-2,
    "gamma_scale": math.sqrt(5.0),
    "ps": 20,
    "cr": 0.8,
    "k": 0.5,
    "gmax": 3000,
    "gens_per_block": 10,
    "cost_window": 16,
    "generation_budget": None,
    "steady_start": None,
    "prototype_len": None,
    "out": None,
    "param": None,
    "values": None,
}


def _add_common(p):
    p.add_argument("--config", type=Path, help="JSON file of flag values")
    p.add_argument("--taps", type=int, help="adaptive filter length M")
    p.add_argument("--subbands", type=int, help="number of subbands N")
    p.add_argument("--snr-db", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--blocks", type=int, help="decimated blocks per trial")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--mu", type=float, help="step size (NSAF 0.1, SM-NSAF 1 by default)")
    p.add_argument("--delta", type=float, help="NSAF regularization")
    p.add_argument("--gamma-scale", type=float, help="SM-NSAF bound in units of sigma_v")
    p.add_argument("--ps", type=int, help="DE population size")
    p.add_argument("--cr", type=float, help="DE crossover probability")
    p.add_argument("--k", type=float, help="DE mutation scale factor")
    p.add_argument("--gmax", type=int, help="DE generations allowed per block")
    p.add_argument("--gens-per-block", type=int)
    p.add_argument("--cost-window", type=int, help="blocks summed into the DE cost")
    p.add_argument("--generation-budget", type=int, help="total DE generations (default unlimited)")
    p.add_argument("--steady-start", type=int, help="first block of the steady-state window")
    p.add_argument("--prototype-len", type=int)
    p.add_argument("--out", type=Path, help="directory for curves.csv and summary.csv")


def build_parser():
    parser = argparse.ArgumentParser(prog="desaf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="one algorithm over many trials")
    p.add_argument("--algo", choices=ALGORITHMS)
    _add_common(p)

    p = sub.add_parser("compare", help="NSAF(mu=0.1), NSAF(mu=1), SM-NSAF and DE-NSAF on shared scenarios")
    _add_common(p)

    p = sub.add_parser("sweep", help="DE-NSAF over several PS or Cr values")
    p.add_argument("--param", choices=("PS", "Cr"), required=False)
    p.add_argument("--values", type=float, nargs="+")
    _add_common(p)
    return parser


def resolve_options(args):
    """Merge defaults, the config file and explicit flags, in that order."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None) is not None:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise SystemExit("config file must hold a JSON object")
        for key, value in data.items():
            key = key.replace("-", "_")
            if key not in opts:
                raise SystemExit(f"unknown config key {key!r}")
            opts[key] = value
    for key, value in vars(args).items():
        if key in opts and value is not None:
            opts[key] = value
    return opts


def experiment_config(opts, algo=None):
    de = DeNsafConfig(
        de=DeConfig(PS=int(opts["ps"]), Cr=float(opts["cr"]), K=float(opts["k"]), Gmax=int(opts["gmax"])),
        generations_per_block=int(opts["gens_per_block"]),
        cost_window=int(opts["cost_window"]),
        generation_budget=opts["generation_budget"],
    )
    return ExperimentConfig(
        algo=algo or opts["algo"],
        M=int(opts["taps"]),
        N=int(opts["subbands"]),
        snr_db=float(opts["snr_db"]),
        trials=int(opts["trials"]),
        seed=int(opts["seed"]),
        blocks=int(opts["blocks"]),
        mu=opts["mu"],
        delta=float(opts["delta"]),
        gamma_scale=float(opts["gamma_scale"]),
        de=de,
        steady_state_start=opts["steady_start"],
        prototype_len=opts["prototype_len"],
    )


def _report(comparison, out, stdout):
    print(comparison.table(), file=stdout)
    if out is not None:
        curves, summary = comparison.write(out)
        print(f"wrote {curves} and {summary}", file=stdout)


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    opts = resolve_options(args)

    if args.command == "run":
        cfg = experiment_config(opts)
        _, result = run_experiment(cfg)
        _report(Comparison([Entry(cfg.key, cfg.label, result)]), opts["out"], stdout)
    elif args.command == "compare":
        base = experiment_config(opts)
        common = {
            f: getattr(base, f)
            for f in ("M", "N", "snr_db", "trials", "seed", "blocks", "delta", "gamma_scale",
                      "steady_state_start", "prototype_len")
        }
        _report(compare(benchmark_configs(de=base.de, **common)), opts["out"], stdout)
    else:
        if not opts["param"] or not opts["values"]:
            raise SystemExit("sweep needs --param and --values")
        base = experiment_config(opts, algo="de_nsaf")
        results = sweep(opts["param"], opts["values"], base)
        param = opts["param"]
        entries = [
            Entry(f"de_nsaf_{param}{value:g}", f"DE-NSAF({param}={value:g})", res)
            for value, res in results.items()
        ]
        _report(Comparison(entries), opts["out"], stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
