"""Active community detection in the one-dimensional geometric block model."""

from gbm_active.errors import BudgetExhausted, ParameterError, ParseError, PipelineError
from gbm_active.graph_model import (
    GbmParams,
    Graph,
    LabeledGraph,
    RggParams,
    connected_components,
    sample_gbm,
    sample_rgg,
    torus_distance,
)

__all__ = [
    "BudgetExhausted",
    "GbmParams",
    "Graph",
    "LabeledGraph",
    "ParameterError",
    "ParseError",
    "PipelineError",
    "RggParams",
    "connected_components",
    "sample_gbm",
    "sample_rgg",
    "torus_distance",
]
