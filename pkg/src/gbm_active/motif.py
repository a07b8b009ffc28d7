"""Per-edge triangle counts and the count-based edge removal rules."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from gbm_active.errors import ParameterError
from gbm_active.graph_model import Graph


@numba.njit(cache=True)
def _merge_counts(indptr, indices, edges):
    out = np.zeros(edges.shape[0], dtype=np.int64)
    for k in range(edges.shape[0]):
        u = edges[k, 0]
        v = edges[k, 1]
        i, iend = indptr[u], indptr[u + 1]
        j, jend = indptr[v], indptr[v + 1]
        c = 0
        while i < iend and j < jend:
            a = indices[i]
            b = indices[j]
            if a == b:
                c += 1
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        out[k] = c
    return out


@dataclass(frozen=True, eq=False)
class TriangleCounts:
    """``counts[k]`` is the number of triangles through ``edges[k]``."""

    edges: np.ndarray
    counts: np.ndarray

    def as_dict(self):
        return {(int(u), int(v)): int(c) for (u, v), c in zip(self.edges, self.counts)}

    def __len__(self):
        return len(self.counts)


def triangle_counts(g: Graph) -> TriangleCounts:
    """Common-neighbor count for every edge by merging sorted neighbor lists."""
    edges = g.edges()
    counts = _merge_counts(g.indptr, g.indices, np.ascontiguousarray(edges))
    counts.setflags(write=False)
    return TriangleCounts(edges, counts)


def _check_aligned(g, counts):
    if len(counts) != g.edge_count or not np.array_equal(counts.edges, g.edges()):
        raise ParameterError("triangle counts were not computed on this graph")


def prune_threshold(g: Graph, counts: TriangleCounts, threshold: float) -> Graph:
    """Drop every edge with ``count <= threshold``."""
    _check_aligned(g, counts)
    return g.keep_edges(~(counts.counts <= threshold))


def prune_below(g: Graph, counts: TriangleCounts, threshold: float) -> Graph:
    """Drop every edge with ``count < threshold`` (strict variant)."""
    _check_aligned(g, counts)
    return g.keep_edges(~(counts.counts < threshold))


def prune_interval(g: Graph, counts: TriangleCounts, lower: float, upper: float) -> Graph:
    """Drop every edge whose count falls in ``[lower, upper]``."""
    if lower > upper:
        raise ParameterError(f"empty interval [{lower}, {upper}]")
    _check_aligned(g, counts)
    c = counts.counts
    return g.keep_edges(~((c >= lower) & (c <= upper)))
