"""Query-complexity sweep at n = 1000, theta2 = 4, theta1 = 11..19.

Writes the per-trial CSV, a summary table on stdout, and one SVG.
"""

import argparse
import time

import numpy as np

from gbm_active import harness


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--theta2", type=float, default=4.0)
    p.add_argument("--theta1", type=float, nargs="+", default=list(np.arange(11.0, 20.0)))
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="fig4.csv")
    p.add_argument("--plot", default="fig4.svg")
    args = p.parse_args()

    spec = harness.SweepSpec(args.n, args.theta2, args.theta1, trials=args.trials, algorithms=("alg1", "alg2"))
    t0 = time.perf_counter()
    recs = harness.run_sweep(spec, jobs=args.jobs)
    harness.emit_csv(recs, args.out)
    harness.emit_plot(recs, args.plot)
    print(f"{'theta1':>7} {'alg':>5} {'mean Q':>8} {'mean lognQ':>11} {'exact':>6}")
    for r in harness.summarize(recs):
        print(f"{r['theta1']:7.2f} {r['algorithm']:>5} {r['mean_queries']:8.1f} {r['mean_lognQ']:11.3f} {r['exact_rate']:6.2f}")
    print(f"elapsed {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
