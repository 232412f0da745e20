"""Command-line front end.

Subcommands
-----------
simulate   run one scenario and write its trace (and alarms, given thresholds)
calibrate  derive residue thresholds from three or more fault-free scenarios
report     sensitivity tables, signature matrices and isolability analysis
batch      run several scenarios in parallel and write a summary

Exit codes: 0 success, 2 configuration error, 3 numerical failure. The
output directory is taken from ``--out``, else ``TANKFDI_OUT_DIR``, else
the scenario file.
"""
import argparse
import csv
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import load_scenario
from .errors import ConfigError, DomainError, IntegrationError
from .experiment import calibrate, run_scenario
from .fdi import (analyze, augment, build_signature_matrix, independence,
                  load_thresholds, save_thresholds, sensitivity_matrix)
from .fdi.sensitivity import DEFAULT_EQUILIBRIUM
from .io import write_signature, write_table, write_trace
from .plant import PlantParams

logger = logging.getLogger("tankfdi")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
OUT_ENV = "TANKFDI_OUT_DIR"
_FLAT = {"z1": ("Z1",), "z2": ("Z2",), "both": ("Z1", "Z2")}


def _out_dir(args, scenario=None):
    d = args.out or os.environ.get(OUT_ENV) or (scenario.out_dir if scenario else "out")
    os.makedirs(d, exist_ok=True)
    return d


def _load(path, args):
    sc = load_scenario(path)
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["noise"] = sc.noise.__class__(sc.noise.sigma, args.seed)
    if getattr(args, "flat_output", None):
        changes["flat_outputs"] = _FLAT[args.flat_output]
    return sc.with_(**changes) if changes else sc


def _simulate_one(sc, out_dir):
    th = load_thresholds(sc.threshold_file) if sc.threshold_file else None
    res = run_scenario(sc, th)
    extra = {}
    for k, ch in enumerate(res.channels):
        extra[ch] = res.stacked[:, k]
    for fo in sc.flat_outputs:
        extra[f"{fo}:held"] = res.residues[fo][1].astype(float)
    if res.alarms is not None:
        for k, ch in enumerate(res.channels):
            extra[f"alarm:{ch}"] = res.alarms[:, k].astype(float)
    path = os.path.join(out_dir, f"{sc.name}_trace.csv")
    write_trace(path, res.trace, extra)
    summary = {
        "scenario": sc.name,
        "fault": sc.fault.target if sc.fault else "none",
        "trace": path,
        "clamp_events": len(res.trace.clamp_events),
    }
    err = np.abs(res.trace.x[-1] - res.trace.x_ref[-1])
    summary["terminal_error"] = " ".join(f"{v:.3g}" for v in err)
    if res.pattern is not None:
        summary["pattern"] = "".join("1" if b else "0" for b in res.pattern)
        summary["isolated"] = "{" + ", ".join(sorted(res.isolation)) + "}"
    return summary


def _print_summary(summary):
    for key, value in summary.items():
        print(f"{key}: {value}")


def cmd_simulate(args):
    sc = _load(args.config, args)
    _print_summary(_simulate_one(sc, _out_dir(args, sc)))
    return EXIT_OK


def cmd_calibrate(args):
    if len(args.config) < 3:
        raise ConfigError(f"calibration needs at least 3 nominal scenarios, got {len(args.config)}")
    scs = [_load(p, args) for p in args.config]
    th = calibrate(scs)
    path = os.path.join(_out_dir(args, scs[0]), "thresholds.csv")
    save_thresholds(th, path)
    for c, v in zip(th.channels, th.values):
        print(f"{c}: {v:.6g}")
    print(f"thresholds written to {path}")
    return EXIT_OK


def _format_matrix(S):
    lines = ["    " + " ".join(f"{c:>3}" for c in S.columns)]
    for name, row in zip(S.rows, S.as_int()):
        lines.append(f"{name:<10} " + " ".join(f"{v:>3d}" for v in row))
    return lines


def _format_report(name, rep):
    return [f"{name}: mu = {rep.mu}",
            f"  detectable: {sorted(rep.detectable)}",
            f"  isolable:   {sorted(rep.isolable)}",
            f"  classes:    {[list(c) for c in rep.signature_classes]}"]


def cmd_report(args):
    eq = tuple(float(v) for v in args.eq.split(","))
    if len(eq) != 3:
        raise ConfigError("--eq needs three levels x1,x2,x3")
    th = math.inf if args.th.lower() in ("inf", "infinity") else float(args.th)
    params = PlantParams()
    fos = _FLAT[args.flat_output or "both"]
    out = _out_dir(args)
    lines = [f"equilibrium: x1={eq[0]:g} x2={eq[1]:g} x3={eq[2]:g}", f"sensitivity threshold: {th:g}", ""]
    mats = []
    for fo in fos:
        table = sensitivity_matrix(eq, fo, params)
        write_table(os.path.join(out, f"sensitivity_{fo}.csv"), table)
        S = build_signature_matrix(table, th)
        write_signature(os.path.join(out, f"signature_{fo}.csv"), S)
        mats.append(S)
        lines.append(f"sensitivity {fo}")
        lines.append("  " + " ".join(f"{c:>10}" for c in table.columns))
        for r, row in zip(table.rows, table.values):
            lines.append(f"  {r:<5}" + " ".join(f"{v:10.4g}" for v in row))
        lines.append(f"signature {fo}")
        lines += _format_matrix(S)
        lines += _format_report(f"{fo}", analyze(S))
        lines.append("")
    if len(mats) == 2:
        St = augment(mats)
        write_signature(os.path.join(out, "signature_stacked.csv"), St)
        lines.append("augmented signature")
        lines += _format_matrix(St)
        lines += _format_report("stacked", analyze(St))
        lines.append(f"independence: {str(independence(*mats)).lower()}")
    text = "\n".join(lines) + "\n"
    with open(os.path.join(out, "report.txt"), "w") as fh:
        fh.write(text)
    print(text, end="")
    return EXIT_OK


def _batch_worker(job):
    path, seed, flat, out = job
    ns = argparse.Namespace(seed=seed, flat_output=flat)
    try:
        sc = _load(path, ns)
        return _simulate_one(sc, out)
    except ConfigError as exc:
        return {"scenario": path, "error": f"config: {exc}"}
    except (IntegrationError, DomainError, FloatingPointError) as exc:
        return {"scenario": path, "error": f"numerical: {exc}"}


def cmd_batch(args):
    # validate everything up front so a typo fails before any work starts
    for p in args.config:
        _load(p, args)
    out = _out_dir(args)
    jobs = [(p, args.seed, args.flat_output, out) for p in args.config]
    if args.jobs == 1:
        results = [_batch_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_batch_worker, jobs))
    keys = []
    for r in results:
        keys += [k for k in r if k not in keys]
    path = os.path.join(out, "summary.csv")
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys)
        w.writeheader()
        for r in results:
            w.writerow(r)
    for r in results:
        print(" | ".join(f"{k}={v}" for k, v in r.items() if k != "trace"))
    print(f"summary written to {path}")
    failed = [r for r in results if "error" in r]
    if any(r["error"].startswith("numerical") for r in failed):
        return EXIT_NUMERIC
    return EXIT_CONFIG if failed else EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="tankfdi", description="Three-tank simulation and flatness-based FDI.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, many=False):
        if many:
            p.add_argument("--config", action="append", required=True, metavar="PATH",
                           help="scenario file (repeatable)")
        else:
            p.add_argument("--config", required=True, metavar="PATH", help="scenario file")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--seed", type=int, help="override the noise seed")
        p.add_argument("--flat-output", choices=sorted(_FLAT), help="flat outputs to use")

    p = sub.add_parser("simulate", help="run one scenario")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="thresholds from nominal scenarios")
    common(p, many=True)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("report", help="sensitivity and signature analysis")
    p.add_argument("--eq", default=",".join(str(v) for v in DEFAULT_EQUILIBRIUM),
                   help="equilibrium levels x1,x2,x3 (default %(default)s)")
    p.add_argument("--th", default="0.5", help="sensitivity threshold, or 'inf'")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--flat-output", choices=sorted(_FLAT), help="flat outputs to analyse")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("batch", help="run several scenarios in parallel")
    common(p, many=True)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_batch)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        # a singular operating point in the report is a configuration problem
        if args.command == "report":
            print(f"configuration error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (IntegrationError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
