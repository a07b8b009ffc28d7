"""Undirected graphs and samplers for the random geometric graph (RGG) and
the two-community geometric block model (GBM) on the unit circle.

Positions live on [0, 1) with 0 and 1 identified. A GBM connects two nodes
when their circular distance is at most ``theta1 * log(n) / n`` (same
community) or ``theta2 * log(n) / n`` (different communities).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from gbm_active.errors import ParameterError


def torus_distance(x, y):
    """Circular distance ``min(|x - y|, 1 - |x - y|)``; works elementwise on arrays."""
    d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    out = np.minimum(d, 1.0 - d)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph stored in CSR form.

    ``indices[indptr[u]:indptr[u + 1]]`` is the strictly ascending neighbor
    list of ``u``. Build instances with :meth:`from_edges`.
    """

    node_count: int
    indptr: np.ndarray
    indices: np.ndarray
    _edges: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n, edges):
        n = int(n)
        if n < 0:
            raise ParameterError("node count must be non-negative")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ParameterError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        e = np.sort(e, axis=1)
        if e.size:
            e = np.unique(e, axis=0)
        both = np.concatenate([e, e[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, both[:, 0] + 1, 1)
        indptr = np.cumsum(indptr)
        indices = both[:, 1].copy()
        for arr in (indptr, indices, e):
            arr.setflags(write=False)
        return cls(n, indptr, indices, e)

    @classmethod
    def empty(cls, n):
        return cls.from_edges(n, np.empty((0, 2), dtype=np.int64))

    @property
    def edge_count(self):
        return len(self._edges)

    def edges(self):
        """(m, 2) array of edges with ``u < v``, sorted lexicographically."""
        return self._edges

    def neighbors(self, u):
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    @property
    def neighbor_lists(self):
        return [self.neighbors(u).tolist() for u in range(self.node_count)]

    def degrees(self):
        return np.diff(self.indptr)

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def to_csr(self):
        data = np.ones(len(self.indices), dtype=np.int8)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.node_count, self.node_count))

    def keep_edges(self, mask):
        """New graph on the same nodes with only the edges where ``mask`` is true."""
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (self.edge_count,):
            raise ParameterError("edge mask must align with edges()")
        return Graph.from_edges(self.node_count, self._edges[mask])

    def subgraph(self, nodes):
        """Induced subgraph on ``nodes``; node ``nodes[i]`` becomes ``i``."""
        nodes = np.asarray(nodes, dtype=np.int64)
        local = np.full(self.node_count, -1, dtype=np.int64)
        local[nodes] = np.arange(len(nodes))
        e = local[self._edges]
        e = e[(e >= 0).all(axis=1)]
        return Graph.from_edges(len(nodes), e)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and np.array_equal(self._edges, other._edges)

    def __hash__(self):
        return hash((self.node_count, self._edges.tobytes()))


def _radius(theta, n):
    return theta * math.log(n) / n


@dataclass(frozen=True)
class GbmParams:
    n: int
    theta1: float
    theta2: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise ParameterError(f"n must be even and >= 4, got {self.n}")
        if self.theta2 < 0:
            raise ParameterError("theta2 must be non-negative")
        if self.theta1 < self.theta2:
            raise ParameterError("theta1 must be >= theta2")
        if self.r_in >= 0.5:
            raise ParameterError(
                f"intra radius theta1*log(n)/n = {self.r_in:.4g} must be < 1/2"
            )

    @property
    def r_in(self):
        return _radius(self.theta1, self.n)

    @property
    def r_out(self):
        return _radius(self.theta2, self.n)


@dataclass(frozen=True)
class RggParams:
    n: int
    r: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("n must be >= 1")
        if not 0 <= self.r < 0.5:
            raise ParameterError(f"radius must lie in [0, 1/2), got {self.r}")


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    graph: Graph
    sigma: np.ndarray
    features: np.ndarray
    params: GbmParams | None = None

    @property
    def n(self):
        return self.graph.node_count


def _candidate_pairs(features, radius):
    """All pairs within circular distance ``radius`` via a sorted sweep.

    Returns a superset padded by a few ulps; callers filter with the exact
    distance rule so the result matches the brute-force path bit for bit.
    """
    n = len(features)
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)
    order = np.argsort(features, kind="stable")
    s = features[order]
    ext = np.concatenate([s, s + 1.0])
    window = radius + 1e-12
    hi = np.searchsorted(ext, s + window, side="right")
    hi = np.minimum(hi, np.arange(n) + n)
    counts = hi - np.arange(n) - 1
    counts = np.maximum(counts, 0)
    src = np.repeat(np.arange(n), counts)
    offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    dst = (src + 1 + offs) % n
    pairs = np.stack([order[src], order[dst]], axis=1)
    pairs = np.sort(pairs, axis=1)
    if pairs.size:
        pairs = np.unique(pairs, axis=0)
    return pairs


def gbm_edges(features, sigma, r_in, r_out):
    """Edge array under the GBM rule using the O(n log n + output) sweep."""
    features = np.asarray(features, dtype=float)
    sigma = np.asarray(sigma)
    cand = _candidate_pairs(features, max(r_in, r_out))
    if not len(cand):
        return cand
    d = torus_distance(features[cand[:, 0]], features[cand[:, 1]])
    same = sigma[cand[:, 0]] == sigma[cand[:, 1]]
    keep = d <= np.where(same, r_in, r_out)
    return cand[keep]


def gbm_edges_naive(features, sigma, r_in, r_out):
    """O(n^2) reference implementation of :func:`gbm_edges`."""
    features = np.asarray(features, dtype=float)
    sigma = np.asarray(sigma)
    n = len(features)
    iu, ju = np.triu_indices(n, k=1)
    d = torus_distance(features[iu], features[ju])
    same = sigma[iu] == sigma[ju]
    keep = d <= np.where(same, r_in, r_out)
    return np.stack([iu[keep], ju[keep]], axis=1).astype(np.int64)


def balanced_labels(n):
    """Nodes ``0..n/2-1`` get label 1, the rest label 2."""
    sigma = np.full(n, 2, dtype=np.int64)
    sigma[: n // 2] = 1
    return sigma


def sample_gbm(params, features=None):
    """Sample a GBM instance; ``features`` overrides the random positions."""
    n = params.n
    if features is None:
        features = np.random.default_rng(params.seed).random(n)
    else:
        features = np.asarray(features, dtype=float)
        if features.shape != (n,):
            raise ParameterError("injected features must have shape (n,)")
        if features.min() < 0 or features.max() >= 1:
            raise ParameterError("features must lie in [0, 1)")
    sigma = balanced_labels(n)
    edges = gbm_edges(features, sigma, params.r_in, params.r_out)
    for a in (features, sigma):
        a.setflags(write=False)
    return LabeledGraph(Graph.from_edges(n, edges), sigma, features, params)


def sample_rgg(params, features=None):
    n = params.n
    if features is None:
        features = np.random.default_rng(params.seed).random(n)
    else:
        features = np.asarray(features, dtype=float)
        if features.shape != (n,):
            raise ParameterError("injected features must have shape (n,)")
    sigma = np.ones(n, dtype=np.int64)
    return Graph.from_edges(n, gbm_edges(features, sigma, params.r, params.r))


def component_labels(g):
    """(count, labels) with component ids ordered by their smallest member."""
    if g.node_count == 0:
        return 0, np.empty(0, dtype=np.int64)
    k, raw = csgraph.connected_components(g.to_csr(), directed=False)
    # scipy's numbering is arbitrary; renumber by first appearance
    first = np.full(k, -1, dtype=np.int64)
    seen = np.unique(raw, return_index=True)
    first[seen[0]] = seen[1]
    rank = np.empty(k, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(k)
    return k, rank[raw]


def connected_components(g):
    """Components as ascending node arrays, sorted by smallest member."""
    k, labels = component_labels(g)
    order = np.argsort(labels, kind="stable")
    bounds = np.cumsum(np.bincount(labels, minlength=k))[:-1]
    return np.split(order, bounds)
