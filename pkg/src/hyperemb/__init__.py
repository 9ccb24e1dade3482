"""Hyperbolic network generation and embedding on the native disk."""
from .angular import OptimizationTrace, OptimizerSchedule, candidate_positions, optimize, optimize_round
from .errors import (
    ConnectivityError,
    DataError,
    DegenerateArcError,
    HyperembError,
    NodeRangeError,
    ParameterError,
    ParseError,
    UnsupportedDegreeKind,
)
from .geometry import PolarCoord, angular_difference, distance_matrix, hyperbolic_distance
from .graph import (
    Graph,
    WeightedGraph,
    common_neighbors,
    degrees,
    is_connected,
    largest_component,
    load_edge_list,
    minimum_spanning_tree,
    shortest_path_lengths,
)
from .datasets import football_standin
from .hypermap import hypermap_embed
from .likelihood import (
    Embedding,
    LossBreakdown,
    PairLossCache,
    assign_radial_coordinates,
    estimate_parameters,
    global_connection_probability,
    logarithmic_loss,
    loss_delta_for_move,
)
from .models import (
    GeneratedNetwork,
    connection_probability,
    cutoff_radius,
    epso_generate,
    expected_internal_links,
    gpso_generate,
    pso_generate,
)
from .ncmce import (
    curvilinear_distance_matrix,
    equidistant_adjust,
    extract_raw_angular,
    ncmce_embed,
    ra_preweight,
    truncated_svd_rank2,
)
from .params import EpsoParams
from .pipeline import METHODS, embed, fit_params
from .quality import (
    ExtremeValueFit,
    QualityReport,
    evaluate,
    fit_best_of_n,
    greedy_hops_matrix,
    greedy_route,
    greedy_routing_score,
    gumbel_correction,
    internal_degree_curve,
    repeat_embeddings,
)

__version__ = "0.1.0"
