"""Command-line entry point: ``gbm-active {gen,thresholds,run,sweep,real}``."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys

import numpy as np

from gbm_active import harness
from gbm_active import thresholds as th
from gbm_active.active import Oracle, RealPipelineParams, algorithm1, algorithm2, real_pipeline, s2_run, EXHAUSTIVE
from gbm_active.errors import BudgetExhausted, ParameterError, ParseError, PipelineError
from gbm_active.evaluation import accuracy_up_to_permutation, interval_baseline, spectral_baseline
from gbm_active.graph_model import GbmParams, sample_gbm


def _writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def cmd_gen(args):
    lg = sample_gbm(GbmParams(args.n, args.theta1, args.theta2, args.seed))
    present = np.flatnonzero(lg.graph.degrees() > 0)
    if len(present) < lg.n:
        # an edge list cannot carry isolated nodes, so their labels are left out too
        logging.warning("%d isolated node(s) omitted from both files", lg.n - len(present))
    harness.write_edge_list(lg.graph, args.edges)
    harness.write_labels(lg.sigma[present], args.labels, ids=present)
    if args.features:
        np.savetxt(args.features, lg.features, fmt="%.17g")
    print(f"n={lg.n} edges={lg.graph.edge_count}", file=sys.stderr)


def cmd_thresholds(args):
    w = _writer()
    if args.theta1 is not None and args.theta2 is not None:
        ts = th.compute_threshold_set(args.theta1, args.theta2, args.n)
        w.writerow(["field", "value"])
        for k, v in ts.as_dict().items():
            w.writerow([k, "infeasible" if v is None else v])
        w.writerow([])
    w.writerow(["theta2", "min_theta1_unsupervised"])
    w.writerows(harness.table1_rows())
    w.writerow([])
    w.writerow(["b_over_2", "min_a_over_2"])
    w.writerows(harness.table2_rows())
    w.writerow([])
    w.writerow(["theta2", "min_theta1_active", "min_theta1_unsupervised"])
    w.writerows(harness.frontier_rows())


def cmd_run(args):
    el = harness.ingest_edge_list(args.edges)
    truth = harness.ingest_labels(args.labels, el.id_map)
    g = el.graph
    oracle = Oracle(truth, budget=args.budget)
    rng = np.random.default_rng(args.seed)
    alg = args.algorithm
    removed = comps = 0
    if alg in ("alg1", "alg2", "gmps18") and args.theta2 is None:
        raise ParameterError(f"{alg} needs --theta2")
    if alg == "alg1":
        if args.E_T is None and args.theta1 is None:
            raise ParameterError("alg1 needs --theta1/--theta2 or --E-T")
        r = algorithm1(g, oracle, args.theta1, args.theta2, E_T=args.E_T, rng=rng)
        pred, removed, comps = r.predicted, r.phase1_removed, r.components_after_prune
    elif alg == "alg2":
        r = algorithm2(g, oracle, args.theta1, args.theta2)
        pred, removed, comps = r.predicted, r.phase1_removed, r.components_after_prune
    elif alg == "s2":
        r = s2_run(g, oracle, rng, EXHAUSTIVE)
        pred, comps = r.predicted, r.components
    elif alg == "gmps18":
        pred, removed, comps = interval_baseline(g, args.theta1, args.theta2)
    else:
        pred = spectral_baseline(g).labels
    acc = accuracy_up_to_permutation(pred, truth).accuracy
    q = oracle.queries_used
    w = _writer()
    w.writerow(["algorithm", "n", "edges", "queries", "accuracy", "phase1_removed", "components", "lognQ"])
    w.writerow([alg, g.node_count, g.edge_count, q, repr(acc), removed, comps,
                repr(math.log(max(q, 1)) / math.log(g.node_count))])
    if args.predictions:
        harness.write_labels(pred, args.predictions, ids=el.ids)


def _theta1_grid(args):
    if args.theta1:
        return args.theta1
    lo, hi, count = args.grid
    count = int(count)
    if count < 1:
        raise ParameterError("grid count must be >= 1")
    return list(np.linspace(lo, hi, count)) if count > 1 else [lo]


def cmd_sweep(args):
    spec = harness.SweepSpec(
        n=args.n,
        theta2=args.theta2,
        theta1_values=_theta1_grid(args),
        trials=args.trials,
        algorithms=args.algorithms,
        base_seed=args.base_seed,
    )
    records = harness.run_sweep(spec, jobs=args.jobs)
    harness.emit_csv(records, args.out)
    if args.plot:
        for p in harness.emit_plot(records, args.plot):
            print(f"wrote {p}", file=sys.stderr)
    w = _writer()
    rows = harness.summarize(records)
    if rows:
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow(list(r.values()))


def cmd_real(args):
    el = harness.ingest_edge_list(args.edges)
    truth = harness.ingest_labels(args.labels, el.id_map)
    params = RealPipelineParams(T1=args.t1, budget=args.budget)
    w = _writer()
    w.writerow(["run", "n", "queries", "query_fraction", "accuracy", "v0_size", "terminated_by"])
    accs, fracs = [], []
    for run in range(args.runs):
        rng = np.random.default_rng(np.random.SeedSequence([args.seed, run]))
        oracle = Oracle(truth)
        r = real_pipeline(el.graph, oracle, params, rng)
        acc = accuracy_up_to_permutation(r.predicted, truth).accuracy
        frac = r.queries / el.graph.node_count
        accs.append(acc)
        fracs.append(frac)
        w.writerow([run, el.graph.node_count, r.queries, repr(frac), repr(acc),
                    r.diagnostics["v0_size"], r.terminated_by])
    print(f"mean_accuracy={np.mean(accs):.4f} mean_query_fraction={np.mean(fracs):.4f}", file=sys.stderr)


def build_parser():
    p = argparse.ArgumentParser(prog="gbm-active", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample a GBM graph to edge-list and label files")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--theta1", type=float, required=True)
    g.add_argument("--theta2", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--edges", required=True)
    g.add_argument("--labels", required=True)
    g.add_argument("--features")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("thresholds", help="print a threshold set and the frontier tables as CSV")
    t.add_argument("--theta1", type=float)
    t.add_argument("--theta2", type=float)
    t.add_argument("--n", type=int, default=1000)
    t.set_defaults(func=cmd_thresholds)

    r = sub.add_parser("run", help="run one algorithm on one graph with its labels as oracle")
    r.add_argument("--edges", required=True)
    r.add_argument("--labels", required=True)
    r.add_argument("--algorithm", choices=["alg1", "alg2", "s2", "gmps18", "spectral"], default="alg2")
    r.add_argument("--theta1", type=float)
    r.add_argument("--theta2", type=float)
    r.add_argument("--E-T", dest="E_T", type=float, help="Phase 1 threshold for alg1 (overrides theta)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--budget", type=int)
    r.add_argument("--predictions", help="write predicted labels here")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="Monte-Carlo sweep over a theta1 grid")
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--theta2", type=float, required=True)
    grid = s.add_mutually_exclusive_group(required=True)
    grid.add_argument("--theta1", type=float, nargs="+")
    grid.add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "COUNT"))
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--algorithms", nargs="+", choices=harness.ALGORITHMS, default=["alg1", "alg2"])
    s.add_argument("--base-seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--plot")
    s.set_defaults(func=cmd_sweep)

    x = sub.add_parser("real", help="three-phase pipeline on a real edge list")
    x.add_argument("--edges", required=True)
    x.add_argument("--labels", required=True)
    x.add_argument("--t1", type=int, required=True)
    x.add_argument("--runs", type=int, default=20)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--budget", type=int)
    x.set_defaults(func=cmd_real)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (ParameterError, ParseError, PipelineError, BudgetExhausted, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
