"""Label oracle, the S^2 graph active learner, and the two-phase recovery algorithms."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from gbm_active import thresholds as th
from gbm_active.errors import BudgetExhausted, ParameterError, PipelineError
from gbm_active.graph_model import Graph, component_labels
from gbm_active.motif import prune_below, prune_threshold, triangle_counts

# S^2 stopping policies
TWO_COMPONENTS = "two_components"
TWO_NONSINGLETON = "two_nonsingleton"
EXHAUSTIVE = "exhaustive"


class Oracle:
    """The only channel to ground-truth labels during recovery.

    Repeated queries of the same node are served from cache and are free.
    With a ``budget`` set, the query that would exceed it raises
    :class:`BudgetExhausted` instead of revealing anything.
    """

    def __init__(self, truth, budget=None):
        self._truth = np.asarray(truth)
        self.budget = budget
        self.revealed = {}

    @property
    def n(self):
        return len(self._truth)

    @property
    def queries_used(self):
        return len(self.revealed)

    def query(self, u):
        u = int(u)
        if u in self.revealed:
            return self.revealed[u]
        if self.budget is not None and len(self.revealed) >= self.budget:
            raise BudgetExhausted(f"query budget {self.budget} exhausted")
        label = int(self._truth[u])
        self.revealed[u] = label
        return label

    def view(self, nodes):
        return _OracleView(self, nodes)


class _OracleView:
    """Oracle over a node subset with local ids ``0..len(nodes)-1``."""

    def __init__(self, parent, nodes):
        self._parent = parent
        self._nodes = np.asarray(nodes)

    @property
    def queries_used(self):
        return self._parent.queries_used

    def query(self, u):
        return self._parent.query(self._nodes[u])


@dataclass
class RecoveryResult:
    predicted: np.ndarray
    queries: int
    phase1_removed: int = 0
    components_after_prune: int = 0
    terminated_by: str = "separation"
    diagnostics: dict = field(default_factory=dict)


class _WorkingGraph:
    """Mutable copy of a graph that only ever loses edges."""

    def __init__(self, g: Graph):
        self.n = g.node_count
        self.m = g.to_csr().astype(np.float64)
        self.m.sort_indices()
        self.removed = 0

    def neighbors(self, u):
        m = self.m
        return m.indices[m.indptr[u]:m.indptr[u + 1]]

    def cut(self, u, v):
        m = self.m
        for a, b in ((u, v), (v, u)):
            row = slice(m.indptr[a], m.indptr[a + 1])
            k = np.searchsorted(m.indices[row], b)
            m.data[m.indptr[a] + k] = 0.0
        self.removed += 1

    def compact(self):
        self.m.eliminate_zeros()

    def distances(self, sources):
        return csgraph.dijkstra(self.m, directed=False, indices=sources, unweighted=True, min_only=True)

    def components(self):
        return csgraph.connected_components(self.m, directed=False)


def _mssp(work, labeled):
    if len(set(labeled.values())) < 2:
        return None
    la, lb = sorted(set(labeled.values()))[:2]
    side_a = np.array(sorted(u for u, y in labeled.items() if y == la))
    side_b = np.array(sorted(u for u, y in labeled.items() if y == lb))
    dist_a = work.distances(side_a)
    best = dist_a[side_b].min()
    if not np.isfinite(best) or best < 2:
        return None
    l = int(best)
    dist_b = work.distances(side_b)
    ends = np.concatenate([side_a[dist_b[side_a] == l], side_b[dist_a[side_b] == l]])
    u = int(ends.min())
    other = side_b if labeled[u] == la else side_a
    du = work.distances([u])
    v = int(other[du[other] == l].min())
    dv = work.distances([v])
    # walk the lexicographically smallest shortest path from u
    x = u
    for step in range(l // 2):
        nb = work.neighbors(x)
        ok = (du[nb] == step + 1) & (dv[nb] == l - step - 1)
        x = int(nb[ok].min())
    return x


def mssp(g, labeled):
    """Midpoint of the shortest path among all oppositely-labeled queried pairs.

    The pair is the one with the smallest hop distance, ties broken by the
    lexicographically smallest (smaller id, larger id). The returned node is
    the ``floor(l/2)``-th node on the lexicographically smallest shortest
    path from the smaller-id endpoint. None when no such pair is at
    distance >= 2.
    """
    work = g if isinstance(g, _WorkingGraph) else _WorkingGraph(g)
    return _mssp(work, {int(k): v for k, v in labeled.items()})


@dataclass
class S2Result:
    predicted: np.ndarray
    queries: int
    components: int
    edges_cut: int
    terminated_by: str


def _comp_state(work, labeled):
    k, comp = work.components()
    sizes = np.bincount(comp, minlength=k)
    seen = {}
    pure = True
    for u, y in labeled.items():
        c = comp[u]
        if seen.setdefault(c, y) != y:
            pure = False
    return k, comp, sizes, pure


def _separated(policy, work, labeled):
    if policy == EXHAUSTIVE:
        return False
    k, _, sizes, pure = _comp_state(work, labeled)
    if not pure:
        return False
    if policy == TWO_COMPONENTS:
        return k == 2
    if policy == TWO_NONSINGLETON:
        return int((sizes > 1).sum()) >= 2
    raise ParameterError(f"unknown S2 policy {policy!r}")


def s2_run(g: Graph, oracle, rng=None, policy=TWO_COMPONENTS) -> S2Result:
    """Run S^2 on ``g`` and label every resulting component.

    Random queries alternate with midpoint queries; an edge is removed as
    soon as both endpoints are revealed with different labels. The loop
    stops when ``policy`` reports separation, every node is labeled, or the
    oracle's budget runs out. Components without a revealed node then get
    one query each at their smallest id.
    """
    if g.node_count == 0:
        raise ParameterError("S2 needs a non-empty graph")
    rng = rng if rng is not None else np.random.default_rng()
    start = oracle.queries_used
    work = _WorkingGraph(g)
    labeled = {}
    pool = list(range(g.node_count))
    where = {u: u for u in pool}

    def take(u):
        i = where.pop(u)
        last = pool.pop()
        if last != u:
            pool[i] = last
            where[last] = i

    def reveal(x):
        y = oracle.query(x)
        labeled[x] = y
        take(x)
        cut = False
        for w in work.neighbors(x).tolist():
            if w in labeled and labeled[w] != y:
                work.cut(x, w)
                cut = True
        if cut:
            work.compact()

    terminated = None
    try:
        while terminated is None:
            if _separated(policy, work, labeled):
                terminated = "separation"
                break
            if not pool:
                terminated = "exhausted"
                break
            x = pool[int(rng.integers(len(pool)))]
            while x is not None:
                reveal(x)
                if _separated(policy, work, labeled):
                    terminated = "separation"
                    break
                x = _mssp(work, labeled)
    except BudgetExhausted:
        terminated = "budget"

    k, comp, _, _ = _comp_state(work, labeled)
    votes = [Counter() for _ in range(k)]
    for u, y in labeled.items():
        votes[comp[u]][y] += 1
    comp_label = np.ones(k, dtype=np.int64)
    for c in range(k):
        if votes[c]:
            comp_label[c] = min(votes[c].items(), key=lambda kv: (-kv[1], kv[0]))[0]
    if terminated != "budget":
        firsts = np.full(k, -1)
        for u in range(g.node_count - 1, -1, -1):
            firsts[comp[u]] = u
        try:
            for c in range(k):
                if not votes[c]:
                    u = int(firsts[c])
                    comp_label[c] = oracle.query(u)
                    labeled[u] = comp_label[c]
        except BudgetExhausted:
            terminated = "budget"
    predicted = comp_label[comp]
    for u, y in labeled.items():
        predicted[u] = y
    return S2Result(predicted, oracle.queries_used - start, k, work.removed, terminated)


def _phase1(g, counts, threshold, strict=False):
    counts = counts if counts is not None else triangle_counts(g)
    pruned = prune_below(g, counts, threshold) if strict else prune_threshold(g, counts, threshold)
    return pruned, g.edge_count - pruned.edge_count


def _unpack(graph):
    # accept a LabeledGraph as well as a bare Graph
    return getattr(graph, "graph", graph)


def algorithm1(graph, oracle, theta1=None, theta2=None, *, E_T=None, counts=None, rng=None):
    """Triangle-count pruning at ``n * E_T`` followed by S^2 until two pure components remain."""
    g = _unpack(graph)
    n = g.node_count
    if E_T is None:
        if theta1 is None or theta2 is None:
            raise ParameterError("algorithm1 needs (theta1, theta2) or E_T")
        regime = th.regime_for(theta2)
        eta = th.solve_eta(theta1, theta2, regime)
        E_T = th.compute_E_T(theta1, theta2, eta, n, regime)
    pruned, removed = _phase1(g, counts, n * E_T)
    k, _ = component_labels(pruned)
    s2 = s2_run(pruned, oracle, rng, TWO_COMPONENTS)
    return RecoveryResult(
        s2.predicted,
        oracle.queries_used,
        phase1_removed=removed,
        components_after_prune=k,
        terminated_by=s2.terminated_by,
        diagnostics={"count_threshold": n * E_T, "s2_edges_cut": s2.edges_cut, "final_components": s2.components},
    )


def algorithm2(graph, oracle, theta1=None, theta2=None, *, t1=None, counts=None):
    """Aggressive pruning at ``(2*theta2 + t1) * log(n)``, then one query per component."""
    g = _unpack(graph)
    n = g.node_count
    if theta2 is None:
        raise ParameterError("algorithm2 needs theta2")
    t1 = th.solve_t1(theta2) if t1 is None else t1
    threshold = (2 * theta2 + t1) * math.log(n)
    pruned, removed = _phase1(g, counts, threshold)
    k, comp = component_labels(pruned)
    firsts = np.full(k, -1)
    for u in range(n - 1, -1, -1):
        firsts[comp[u]] = u
    comp_label = np.ones(k, dtype=np.int64)
    terminated = "components"
    try:
        for c in range(k):
            comp_label[c] = oracle.query(int(firsts[c]))
    except BudgetExhausted:
        terminated = "budget"
    return RecoveryResult(
        comp_label[comp],
        oracle.queries_used,
        phase1_removed=removed,
        components_after_prune=k,
        terminated_by=terminated,
        diagnostics={"count_threshold": threshold},
    )


@dataclass(frozen=True)
class RealPipelineParams:
    T1: int
    budget: int | None = None

    def __post_init__(self):
        if self.T1 < 0:
            raise ParameterError("T1 must be non-negative")


def majority_fill(g: Graph, labels):
    """Propagate labels to unlabeled nodes (0) by neighbor majority until nothing changes.

    Each pass is synchronous: votes only use labels fixed in earlier passes.
    Ties go to label 1. Returns (labels, passes, ties).
    """
    labels = np.array(labels, dtype=np.int64)
    passes = ties = 0
    while True:
        todo = np.flatnonzero(labels == 0)
        update = {}
        for w in todo.tolist():
            nb = labels[g.neighbors(w)]
            ones = int((nb == 1).sum())
            twos = int((nb == 2).sum())
            if ones + twos == 0:
                continue
            if ones == twos:
                ties += 1
            update[w] = 2 if twos > ones else 1
        if not update:
            break
        passes += 1
        for w, y in update.items():
            labels[w] = y
    return labels, passes, ties


def real_pipeline(g: Graph, oracle, params: RealPipelineParams, rng=None) -> RecoveryResult:
    """Three-phase recovery for graphs whose model parameters are unknown.

    1. drop edges covered by fewer than ``T1`` triangles and keep the largest
       remaining component ``V0``;
    2. run S^2 on ``V0`` until two non-singleton label-pure components appear;
    3. label the rest by majority vote over labeled neighbors in ``g``.
    """
    g = _unpack(g)
    if params.budget is not None and oracle.budget is None:
        oracle.budget = params.budget
    pruned, removed = _phase1(g, None, params.T1, strict=True)
    k, comp = component_labels(pruned)
    sizes = np.bincount(comp, minlength=k)
    big = int(np.argmax(sizes))
    v0 = np.flatnonzero(comp == big)
    if len(v0) < 2:
        raise PipelineError(f"largest component after pruning has {len(v0)} node(s)")
    s2 = s2_run(pruned.subgraph(v0), oracle.view(v0), rng, TWO_NONSINGLETON)
    labels = np.zeros(g.node_count, dtype=np.int64)
    labels[v0] = s2.predicted
    labels, passes, ties = majority_fill(g, labels)
    unreached = int((labels == 0).sum())
    labels[labels == 0] = 1
    for u, y in oracle.revealed.items():
        labels[u] = y
    return RecoveryResult(
        labels,
        oracle.queries_used,
        phase1_removed=removed,
        components_after_prune=k,
        terminated_by=s2.terminated_by,
        diagnostics={"v0_size": len(v0), "phase3_passes": passes, "phase3_ties": ties, "unreached": unreached},
    )
