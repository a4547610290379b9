"""Command-line entry point: run, analyze, and region subcommands."""

import argparse
import dataclasses
import sys

import numpy as np

from .config import load_config
from .errors import InsufficientData, LrmimoError
from .harness import (UtilityLimit, complexity_estimate, diversity_estimate,
                      effective_complexity_exponent, estimate_exponent,
                      halting_estimate, run_grid, utility_limit)
from .results import emit_results, read_summary, read_trials


def _progress(pt):
    print(f"  {pt.snr_db:6.1f} dB  rho={pt.rho:10.1f}  q={pt.q:<4d} "
          f"P={pt.error_rate:.3e}  halts={pt.halts}  maxN={pt.max_flops}")


def _exponent_rows(summary, records=None, gamma=None):
    rows = []
    try:
        d = diversity_estimate(summary)
        rows.append(("diversity", d.value, d.stderr, len(d.grid), ""))
    except InsufficientData as e:
        d = None
        rows.append(("diversity", float("nan"), float("nan"), 0, str(e)))
    c = complexity_estimate(summary)
    rows.append(("complexity_maxflops", c.value, c.stderr, len(c.grid), ""))
    try:
        h = halting_estimate(summary)
        rows.append(("halting", h.value, h.stderr, len(h.grid), ""))
    except InsufficientData:
        rows.append(("halting", float("nan"), float("nan"), 0,
                     "no halting events"))
    if records:
        d_target = d.value if d is not None else 0.0
        ce = effective_complexity_exponent(records, d_target)
        rows.append(("complexity_effective", ce, 0.0, len(summary.points),
                     f"d_target={d_target:.4g}"))
    if gamma is not None and d is not None:
        val = utility_limit(d.value, max(c.value, 0.0), UtilityLimit(gamma=gamma))
        rows.append((f"utility_homogeneous_gamma={gamma:g}", val, 0.0,
                     len(summary.points), "d - gamma*c"))
    return rows


def cmd_run(args):
    cfg = load_config(args.config)
    out = args.out or cfg.out
    if not out:
        raise LrmimoError("no output directory: pass --out or set 'out' in the config")
    print(f"running {cfg.decoder} / {cfg.policy_kind} over {len(cfg.snr_db)} "
          f"SNR points, {cfg.trials} trials each")
    summary, records = run_grid(cfg, collect_records=True, progress=_progress)
    rows = _exponent_rows(summary, records)
    files = emit_results(summary, records, out, cfg=cfg, exponents=rows)
    for f in files:
        print(f"wrote {f}")
    return 0


def cmd_analyze(args):
    summary = read_summary(args.indir)
    records = read_trials(args.indir)
    rows = _exponent_rows(summary, records, gamma=args.gamma)
    print(f"{'kind':<36} {'value':>12} {'stderr':>12}  note")
    for kind, value, stderr, n, note in rows:
        print(f"{kind:<36} {value:>12.5g} {stderr:>12.3g}  {note}")
    emit_results(summary, records, args.indir, exponents=rows)
    print(f"updated {args.indir}/exponents.csv")
    return 0


def cmd_region(args):
    cfg = load_config(args.config)
    out = args.out or cfg.out
    if not out:
        raise LrmimoError("no output directory: pass --out or set 'out' in the config")
    import csv
    import os
    os.makedirs(out, exist_ok=True)
    rows = []
    for td in cfg.region_d:
        for tc in cfg.region_c:
            sub = dataclasses.replace(cfg, decoder="lrr", policy_kind="degrade",
                                      target_d=td, target_c=tc)
            summary, _ = run_grid(sub, collect_records=False)
            d = diversity_estimate(summary).value
            c = complexity_estimate(summary).value
            rows.append((td, tc, d, c))
            print(f"target (d={td:g}, c={tc:g}) -> measured "
                  f"(d={d:.3f}, c={c:.3f})")
    path = os.path.join(out, "region.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["target_d", "target_c", "measured_d", "measured_c"])
        for row in rows:
            w.writerow([format(v, ".17g") for v in row])
    print(f"wrote {path}")
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="lrmimo",
        description="Monte Carlo rate-reliability-complexity simulator for "
                    "lattice-reduction-aided MIMO decoding")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an SNR grid and persist CSVs")
    p_run.add_argument("--config", required=True, help="JSON experiment config")
    p_run.add_argument("--out", help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_an = sub.add_parser("analyze",
                          help="recompute exponents/utilities from stored CSVs")
    p_an.add_argument("--in", dest="indir", required=True,
                      help="directory holding trials.csv and summary.csv")
    p_an.add_argument("--gamma", type=float, default=0.5,
                      help="homogeneous utility weighting (default 0.5)")
    p_an.set_defaults(func=cmd_analyze)

    p_rg = sub.add_parser("region",
                          help="sweep degrade policies over a (d, c) lattice")
    p_rg.add_argument("--config", required=True, help="JSON experiment config")
    p_rg.add_argument("--out", help="output directory")
    p_rg.set_defaults(func=cmd_region)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except LrmimoError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
