#!/usr/bin/env python3
"""Partial-sum experiment: estimate the summand's natural moment function,
build the Rosenthal-scaled envelopes (uniform over the number of summands),
and compare them with the simulated tails of normalized partial sums, along
with marginal normality checks.

Usage:
    python scripts/clt_experiment.py --paths 5000 --n 1 4 64
"""

import argparse
import sys
from pathlib import Path

import numpy as np
from scipy.stats import anderson

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from skorotail.bounds import clt_bounds
from skorotail.simulate import (
    ProcessSpec,
    SimConfig,
    domination_report,
    empirical_tail,
    estimate_triple_moments,
    fit_g_envelope,
    generate_paths,
    partial_sum_paths,
    quantile_u_grid,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paths", type=int, default=5_000)
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--rate", type=float, default=5.0)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--n", type=int, nargs="+", default=[1, 4, 64])
    ap.add_argument("--h", type=float, default=0.05)
    ns = ap.parse_args()

    spec = ProcessSpec("compound-poisson", rate=ns.rate, jump_scale=1.0,
                       grid_size=ns.grid)
    config = SimConfig(n_paths=ns.paths, seed=ns.seed)
    rng = np.random.default_rng(ns.seed)

    base = generate_paths(spec, config, rng=rng)
    table = estimate_triple_moments(base, config.p_grid)
    envelope = fit_g_envelope(table.pair_times, table.pair_norms)
    print("summand moment function: "
          + ", ".join(f"nu({p:g})={v:.3f}" for p, v in zip(table.p_grid, table.values)))

    bundles = {n: partial_sum_paths(spec, n, config, rng=rng) for n in ns.n}
    stats = {n: b.global_stats() for n, b in bundles.items()}
    u_grid = quantile_u_grid(np.concatenate(list(stats.values())), 20)
    gcurve, mcurve = clt_bounds(table, envelope, ns.h, u_grid)

    failures = 0
    for n, b in bundles.items():
        est = empirical_tail(b, u_grid, config.confidence, "delta", stats=stats[n])
        rep = domination_report(gcurve, est, label=f"n={n}")
        est_k = empirical_tail(b, u_grid, config.confidence, "kappa", h=ns.h)
        rep_k = domination_report(mcurve, est_k, label=f"n={n} module")
        ok = rep.overall_pass and rep_k.overall_pass
        failures += not ok
        print(f"n={n:>3}: max global stat {stats[n].max():.3f}; "
              f"domination {'PASS' if ok else 'FAIL'}")

    n_big = max(ns.n)
    vb = bundles[n_big]
    for tm in (0.25, 0.5, 0.75):
        col = int(np.searchsorted(vb.times, tm, side="right")) - 1
        res = anderson(vb.values[:, col], dist="norm")
        verdict = "ok" if res.statistic < res.critical_values[-1] else "rejected"
        print(f"normality of the n={n_big} marginal at t={tm}: "
              f"statistic {res.statistic:.3f} vs 1% critical "
              f"{res.critical_values[-1]:.3f} ({verdict})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
