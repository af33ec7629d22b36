"""Mapper, multiscale mapper and their persistence diagrams on finite simplicial complexes."""

from .complex import (
    FiniteMetricSpace,
    Graph,
    SimplicialComplex,
    SimplicialMap,
    VertexFunction,
    are_contiguous,
    build_complex,
    connected_components,
    one_skeleton,
    sup_distance,
)
from .covers import (
    Cover,
    CoverElement,
    CoverTower,
    ExplicitSet,
    GoodnessReport,
    Interval,
    MetricBall,
    RealSegment,
    build_ball_tower,
    build_dyadic_tower,
    build_net_tower,
    build_nets,
    min_interleaving,
    reindex_log,
    truncate,
    verify_goodness,
)
from .mapper import (
    ComplexTower,
    PullbackCover,
    PullbackElement,
    check_min_diameter,
    mapper,
    multiscale_mapper,
    nerve,
    pullback,
    pullback_combinatorial,
    pullback_cover_map,
    pullback_exact,
    pullback_exact_pl,
)
from .metric import ball, cech_filtration, mm_vs_cech, pullback_pseudometric, relaxed_triangle_check
from .persistence import (
    PersistenceDiagram,
    bottleneck,
    filtration_diagram,
    homology_basis,
    induced_map,
    rank_decomposition,
    tower_diagram,
)

__version__ = "0.1.0"
