#!/usr/bin/env python3
"""Domination experiment: simulate a jump process, estimate its natural
moment function and increment envelope, evaluate the moment tail bounds for
the global statistic and the span-constrained module, and check them against
exact-binomial upper confidence envelopes of the simulated tails.

Usage:
    python scripts/verify_pipeline.py --paths 20000 --grid 64 --seed 7
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from skorotail.bounds import moment_global_bound, moment_module_bound
from skorotail.simulate import (
    ProcessSpec,
    SimConfig,
    domination_report,
    empirical_tail,
    estimate_triple_moments,
    fit_g_envelope,
    generate_paths,
    quantile_u_grid,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paths", type=int, default=20_000)
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--rate", type=float, default=5.0)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--h", type=float, nargs="+", default=[0.05, 0.1])
    ap.add_argument("--u-points", type=int, default=20)
    ap.add_argument("--strict", action="store_true",
                    help="fail thresholds with zero exceedances too")
    ns = ap.parse_args()

    spec = ProcessSpec("compound-poisson", rate=ns.rate, jump_scale=1.0,
                       grid_size=ns.grid)
    config = SimConfig(n_paths=ns.paths, seed=ns.seed, h_grid=tuple(ns.h))

    t0 = time.time()
    bundle = generate_paths(spec, config)
    stats = bundle.global_stats()
    print(f"simulated {ns.paths} paths on {ns.grid} points "
          f"({time.time() - t0:.1f}s); global stat: median "
          f"{np.median(stats):.3f}, max {stats.max():.3f}")

    t0 = time.time()
    table = estimate_triple_moments(bundle, config.p_grid)
    envelope = fit_g_envelope(table.pair_times, table.pair_norms)
    print(f"moment estimation ({time.time() - t0:.1f}s): "
          + ", ".join(f"nu({p:g})={v:.3f}" for p, v in zip(table.p_grid, table.values))
          + f"; envelope total {envelope.total:.3f}")

    u_grid = quantile_u_grid(stats, ns.u_points)
    failures = 0
    est = empirical_tail(bundle, u_grid, config.confidence, "delta", stats=stats)
    rep = domination_report(moment_global_bound(table, envelope, u_grid), est,
                            strict=ns.strict, label="global")
    print(f"global statistic: {'PASS' if rep.overall_pass else 'FAIL'}")
    failures += not rep.overall_pass
    for h in config.h_grid:
        est_k = empirical_tail(bundle, u_grid, config.confidence, "kappa", h=h)
        bound_k = moment_module_bound(table, envelope, h, u_grid)
        rep_k = domination_report(bound_k, est_k, strict=ns.strict,
                                  label=f"module h={h:g}")
        print(f"module at span {h:g}: {'PASS' if rep_k.overall_pass else 'FAIL'}")
        for f in rep_k.failures:
            print(f"  u={f['u']:.4f} bound={f['bound']:.3e} "
                  f"upper={f['upper_confidence']:.3e}")
        failures += not rep_k.overall_pass
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
