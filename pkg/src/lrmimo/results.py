"""CSV persistence of runs and the design-decision metadata file.

All numeric fields are written with 17 significant digits so that
re-parsing reproduces the float64 values exactly.
"""

import csv
import json
import os
from dataclasses import asdict

import numpy as np

from .harness import PointSummary, RunSummary, TrialRecord

TRIAL_COLUMNS = ["trial_id", "rho", "snr_db", "rate_bits", "outcome", "flops",
                 "kappa", "lll_cycles", "seed"]
SUMMARY_COLUMNS = ["rho", "snr_db", "rate_bits", "q", "trials", "errors",
                   "halts", "error_rate", "max_flops", "mean_flops"]

FLOP_CONVENTION = ("1 flop per real multiply, multiply-accumulate, add, "
                   "divide, square root, or logarithm; comparisons free")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def emit_results(summary, records, outdir, cfg=None, exponents=None):
    """Write trials.csv, summary.csv, exponents.csv, plotdata.csv, metadata.json."""
    os.makedirs(outdir, exist_ok=True)

    with open(os.path.join(outdir, "trials.csv"), "w", newline="",
              encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(TRIAL_COLUMNS)
        for rec in records or []:
            w.writerow([_fmt(rec.trial_id), _fmt(rec.rho), _fmt(rec.snr_db),
                        _fmt(rec.rate_bits), rec.outcome, _fmt(rec.flops),
                        _fmt(rec.kappa), _fmt(rec.lll_cycles), _fmt(rec.seed)])

    with open(os.path.join(outdir, "summary.csv"), "w", newline="",
              encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_COLUMNS)
        for pt in summary.points:
            w.writerow([_fmt(pt.rho), _fmt(pt.snr_db), _fmt(pt.rate_bits),
                        _fmt(pt.q), _fmt(pt.trials), _fmt(pt.errors),
                        _fmt(pt.halts), _fmt(pt.error_rate),
                        _fmt(pt.max_flops), _fmt(pt.mean_flops)])

    with open(os.path.join(outdir, "exponents.csv"), "w", newline="",
              encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "value", "stderr", "points", "note"])
        for row in exponents or []:
            w.writerow([row[0], _fmt(row[1]), _fmt(row[2]), _fmt(row[3]),
                        row[4] if len(row) > 4 else ""])

    with open(os.path.join(outdir, "plotdata.csv"), "w", newline="",
              encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["log10_rho", "log10_error_rate", "log10_max_flops",
                    "log10_halt_rate"])
        for pt in summary.points:
            perr = np.log10(pt.error_rate) if pt.errors + pt.halts > 0 else None
            phalt = np.log10(pt.halts / pt.trials) if pt.halts > 0 else None
            w.writerow([_fmt(np.log10(pt.rho)), _fmt(perr),
                        _fmt(np.log10(pt.max_flops)), _fmt(phalt)])

    meta = {
        "master_seed": summary.master_seed,
        "decoder": summary.decoder,
        "policy_kind": summary.policy_kind,
        "beta": "rho / nt (per-antenna power split)",
        "noise": "unit variance per real dimension",
        "t_reg": "alpha * I in symbol space, alpha = nt / rho",
        "kappa_matrix": "regularized composite generator (augmented basis)",
        "d_ml_source": "optimal DMT curve, piecewise linear through (k, (nt-k)(nr-k))",
        "policy_r_fixed_rate": "multiplexing gain 0 for fixed-rate schedules",
        "delta": 0.75 if cfg is None else cfg.delta,
        "epsilon": 0.5 if cfg is None else cfg.epsilon,
        "flop_convention": FLOP_CONVENTION,
        "lll_cycle": "one Lovasz-failure (swap) of the main loop",
        "rng": "Philox keyed by (master_seed, point, chunk); Box-Muller Gaussians",
        "degrade_model": "ideal transceiver stub: flops 1 + ceil(rho^c), "
                         "forced flip with probability rho^-d",
        "enumeration_order": "mixed radix over symbol components, component 0 "
                             "most significant, re before im",
    }
    if cfg is not None:
        meta["config"] = {
            "code": cfg.code, "nt": cfg.nt, "nr": cfg.nr, "T": cfg.T,
            "rate_mode": cfg.rate_mode, "r": cfg.r, "fixed_rate": cfg.fixed_rate,
            "snr_db": list(cfg.snr_db), "trials": cfg.trials,
            "decoder": cfg.decoder, "policy_kind": cfg.policy_kind,
            "epsilon": cfg.epsilon, "target_d": cfg.target_d,
            "target_c": cfg.target_c, "budget_exponent": cfg.budget_exponent,
            "delta": cfg.delta, "seed": cfg.seed, "enum_cap": cfg.enum_cap,
            "threads": cfg.threads,
        }
    with open(os.path.join(outdir, "metadata.json"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")

    return [os.path.join(outdir, f) for f in
            ("trials.csv", "summary.csv", "exponents.csv", "plotdata.csv",
             "metadata.json")]


def read_summary(outdir):
    """Re-parse summary.csv into a RunSummary (exponent recomputation)."""
    meta_path = os.path.join(outdir, "metadata.json")
    master, decoder, policy_kind = 0, "", ""
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)
        master = meta.get("master_seed", 0)
        decoder = meta.get("decoder", "")
        policy_kind = meta.get("policy_kind", "")
    points = []
    with open(os.path.join(outdir, "summary.csv"), newline="",
              encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            points.append(PointSummary(
                rho=float(row["rho"]), snr_db=float(row["snr_db"]),
                rate_bits=float(row["rate_bits"]), q=int(row["q"]),
                trials=int(row["trials"]), errors=int(row["errors"]),
                halts=int(row["halts"]), max_flops=int(row["max_flops"]),
                mean_flops=float(row["mean_flops"])))
    return RunSummary(points=points, master_seed=master, decoder=decoder,
                      policy_kind=policy_kind)


def read_trials(outdir):
    """Re-parse trials.csv into TrialRecord objects."""
    out = []
    with open(os.path.join(outdir, "trials.csv"), newline="",
              encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(TrialRecord(
                trial_id=int(row["trial_id"]), rho=float(row["rho"]),
                snr_db=float(row["snr_db"]), rate_bits=float(row["rate_bits"]),
                outcome=row["outcome"], flops=int(row["flops"]),
                kappa=float(row["kappa"]) if row["kappa"] else None,
                lll_cycles=int(row["lll_cycles"]) if row["lll_cycles"] else None,
                seed=int(row["seed"])))
    return out
