"""Seeded Monte-Carlo sweeps, text formats, CSV and plot output."""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

import numpy as np

from gbm_active import thresholds as th
from gbm_active.active import Oracle, algorithm1, algorithm2
from gbm_active.errors import ParameterError, ParseError
from gbm_active.evaluation import accuracy_up_to_permutation, interval_baseline, spectral_baseline
from gbm_active.graph_model import GbmParams, Graph, sample_gbm
from gbm_active.motif import triangle_counts

log = logging.getLogger(__name__)

ALGORITHMS = ("alg1", "alg2", "gmps18", "spectral")


def derive_seed(base_seed, theta1_index, trial):
    """64-bit trial seed: first word of ``SeedSequence([base_seed, theta1_index, trial])``."""
    ss = np.random.SeedSequence([int(base_seed), int(theta1_index), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class SweepSpec:
    n: int
    theta2: float
    theta1_values: tuple
    trials: int = 20
    algorithms: tuple = ("alg1", "alg2")
    base_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "theta1_values", tuple(float(t) for t in self.theta1_values))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if not self.theta1_values:
            raise ParameterError("theta1_values must be non-empty")
        if any(t < self.theta2 for t in self.theta1_values):
            raise ParameterError("every theta1 must be >= theta2")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ParameterError(f"unknown algorithms: {sorted(unknown)}")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    n: int
    theta1: float
    theta2: float
    algorithm: str
    queries: int
    accuracy: float
    phase1_removed: int
    components: int
    lognQ: float
    seed: int
    status: str = "ok"


def _lognq(queries, n):
    # zero-query runs are reported as log_n(1) = 0
    return math.log(max(queries, 1)) / math.log(n)


def run_trial(n, theta1, theta2, trial, seed, algorithms):
    lg = sample_gbm(GbmParams(n, theta1, theta2, seed))
    counts = triangle_counts(lg.graph)
    out = []
    for alg in algorithms:
        base = dict(trial_index=trial, n=n, theta1=theta1, theta2=theta2, algorithm=alg, seed=seed)
        try:
            if alg == "alg1":
                rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
                r = algorithm1(lg, Oracle(lg.sigma), theta1, theta2, counts=counts, rng=rng)
                pred, q, removed, comps = r.predicted, r.queries, r.phase1_removed, r.components_after_prune
            elif alg == "alg2":
                r = algorithm2(lg, Oracle(lg.sigma), theta1, theta2, counts=counts)
                pred, q, removed, comps = r.predicted, r.queries, r.phase1_removed, r.components_after_prune
            elif alg == "gmps18":
                pred, removed, comps = interval_baseline(lg.graph, theta1, theta2, counts=counts)
                q = 0
            else:
                pred, q, removed, comps = spectral_baseline(lg.graph).labels, 0, 0, 0
        except ParameterError as exc:
            out.append(TrialRecord(queries=0, accuracy=0.0, phase1_removed=0, components=0,
                                   lognQ=0.0, status=f"skipped: {exc}", **base))
            continue
        acc = accuracy_up_to_permutation(pred, lg.sigma).accuracy
        out.append(TrialRecord(queries=int(q), accuracy=acc, phase1_removed=int(removed),
                               components=int(comps), lognQ=_lognq(q, n), **base))
    return out


def _run_job(job):
    return run_trial(*job)


def run_sweep(spec: SweepSpec, jobs=1):
    """All (theta1, trial) runs of ``spec``, ordered by (theta1 index, trial, algorithm order)."""
    work = []
    for i, theta1 in enumerate(spec.theta1_values):
        GbmParams(spec.n, theta1, spec.theta2)  # validate before sampling anything
        for trial in range(spec.trials):
            seed = derive_seed(spec.base_seed, i, trial)
            work.append((spec.n, theta1, spec.theta2, trial, seed, spec.algorithms))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            chunks = list(pool.map(_run_job, work))
    else:
        chunks = [_run_job(j) for j in work]
    return [rec for chunk in chunks for rec in chunk]


# -- CSV -----------------------------------------------------------------------

CSV_HEADER = [f.name for f in fields(TrialRecord)]


def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)


def emit_csv(records, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([_fmt(v) for v in astuple(r)])


def read_csv(path):
    types = {f.name: f.type for f in fields(TrialRecord)}
    conv = {"int": int, "float": float, "str": str}
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(TrialRecord(**{k: conv[types[k]](v) for k, v in row.items()}))
    return out


def summarize(records):
    """Per (theta2, theta1, algorithm): mean/min/max lognQ, mean queries, exact-recovery rate."""
    groups = {}
    for r in records:
        if r.status != "ok":
            continue
        groups.setdefault((r.theta2, r.theta1, r.algorithm), []).append(r)
    rows = []
    for (t2, t1, alg), rs in sorted(groups.items()):
        lq = np.array([r.lognQ for r in rs])
        rows.append({
            "theta2": t2, "theta1": t1, "algorithm": alg, "trials": len(rs),
            "mean_queries": float(np.mean([r.queries for r in rs])),
            "mean_lognQ": float(lq.mean()), "min_lognQ": float(lq.min()), "max_lognQ": float(lq.max()),
            "exact_rate": float(np.mean([r.accuracy == 1.0 for r in rs])),
            "mean_accuracy": float(np.mean([r.accuracy for r in rs])),
        })
    return rows


def emit_plot(records, path):
    """One SVG per theta2: mean log_n(Q) against theta1 with min/max whiskers."""
    if not records:
        raise ParameterError("no records to plot")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "gbm-active"
    rows = summarize(records)
    path = Path(path)
    theta2s = sorted({r["theta2"] for r in rows})
    written = []
    for t2 in theta2s:
        target = path if len(theta2s) == 1 else path.with_name(f"{path.stem}_theta2_{t2:g}{path.suffix}")
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for alg in sorted({r["algorithm"] for r in rows if r["theta2"] == t2}):
            sel = [r for r in rows if r["theta2"] == t2 and r["algorithm"] == alg]
            x = [r["theta1"] for r in sel]
            y = np.array([r["mean_lognQ"] for r in sel])
            lo = np.array([r["min_lognQ"] for r in sel])
            hi = np.array([r["max_lognQ"] for r in sel])
            # the mean of equal values can overshoot them by one ulp
            err = np.clip(np.vstack([y - lo, hi - y]), 0.0, None)
            ax.errorbar(x, y, yerr=err, marker="o", capsize=3, label=alg)
        ax.set_xlabel(r"$\theta_1$")
        ax.set_ylabel(r"$\log_n Q$")
        ax.set_title(rf"$\theta_2 = {t2:g}$")
        ax.legend()
        fig.tight_layout()
        fig.savefig(target, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(target)
    return written


# -- text graph formats ----------------------------------------------------------


@dataclass
class EdgeList:
    graph: Graph
    ids: list
    self_loops: int = 0
    duplicates: int = 0

    @property
    def id_map(self):
        return {orig: i for i, orig in enumerate(self.ids)}


def _data_lines(path):
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, 1):
            try:
                line = raw.decode("ascii").strip()
            except UnicodeDecodeError:
                raise ParseError(path, lineno, "non-ASCII content") from None
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def ingest_edge_list(path):
    """Parse ``u v`` lines; ids are compacted to ``0..n-1`` by first appearance."""
    id_map = {}
    ids = []
    seen = set()
    edges = []
    loops = dups = 0
    for lineno, tok in _data_lines(path):
        if len(tok) != 2:
            raise ParseError(path, lineno, f"expected 2 tokens, got {len(tok)}")
        try:
            a, b = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError(path, lineno, "node ids must be integers") from None
        for x in (a, b):
            if x not in id_map:
                id_map[x] = len(ids)
                ids.append(x)
        if a == b:
            loops += 1
            continue
        u, v = sorted((id_map[a], id_map[b]))
        if (u, v) in seen:
            dups += 1
            continue
        seen.add((u, v))
        edges.append((u, v))
    if loops or dups:
        log.warning("%s: dropped %d self-loop(s) and %d duplicate edge(s)", path, loops, dups)
    return EdgeList(Graph.from_edges(len(ids), edges), ids, loops, dups)


def ingest_labels(path, id_map):
    """Read ``id label`` lines into an array over compact ids; labels become 1, 2 by first appearance."""
    label_ids = {}
    out = np.zeros(len(id_map), dtype=np.int64)
    for lineno, tok in _data_lines(path):
        if len(tok) != 2:
            raise ParseError(path, lineno, f"expected 2 tokens, got {len(tok)}")
        try:
            node = int(tok[0])
        except ValueError:
            raise ParseError(path, lineno, "node id must be an integer") from None
        if node not in id_map:
            raise ParseError(path, lineno, f"label for unknown node id {node}")
        if tok[1] not in label_ids:
            if len(label_ids) == 2:
                raise ParseError(path, lineno, "more than two distinct labels")
            label_ids[tok[1]] = len(label_ids) + 1
        out[id_map[node]] = label_ids[tok[1]]
    missing = np.flatnonzero(out == 0)
    if len(missing):
        raise ParseError(path, 0, f"{len(missing)} node(s) have no label")
    return out


def write_edge_list(graph, path, ids=None):
    with open(path, "w", newline="\n") as fh:
        for u, v in graph.edges():
            if ids is not None:
                u, v = ids[u], ids[v]
            fh.write(f"{u} {v}\n")


def write_labels(labels, path, ids=None):
    with open(path, "w", newline="\n") as fh:
        for i, y in enumerate(labels):
            fh.write(f"{i if ids is None else ids[i]} {int(y)}\n")


# -- threshold tables -------------------------------------------------------------


def table1_rows(theta2s=(1, 2, 3, 4, 5)):
    return [(t2, th.min_theta1_unsupervised(t2)) for t2 in theta2s]


def table2_rows(halves=(1, 2, 3, 4, 5)):
    return [(h, th.sbm_min_a(2 * h) / 2) for h in halves]


def frontier_rows(theta2s=(1, 2, 3, 4, 5)):
    return [(t2, th.min_gap_active(t2) + t2, th.min_theta1_unsupervised(t2)) for t2 in theta2s]
