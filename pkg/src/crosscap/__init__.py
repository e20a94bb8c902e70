"""Pants decompositions of possibly non-orientable surfaces.

Decorated dual graphs, the four elementary moves with desk-scale
connectivity search, generalized Dehn-Thurston coordinates for curve and
arc systems, and numerical generalized Fenchel-Nielsen coordinates.
"""
from .surfaces import Surface, SurfaceInvariants, classify, invariants, parse_surface
from .decomposition import (
    BOUNDARY,
    CROSSCAP,
    PUNCTURE,
    CurveCensus,
    Edge,
    Leaf,
    PantsDecomposition,
    canonical_key,
    curve_census,
    enumerate_types,
    is_orientable_decomposition,
    key_digest,
    validate,
)
from .moves import (
    Move,
    MoveGraph,
    MoveSequence,
    applicable_moves,
    apply_move,
    build_move_graph,
    find_move_path,
    inverse_move,
    orientify,
    parse_move,
    reduce_crosscaps,
    to_dot,
)
from .dehn_thurston import (
    Component,
    ComponentReport,
    CurveSystem,
    DTVector,
    components,
    crosscap_labels,
    decode,
    encode,
    intersection_number,
    mf_chart,
    chart_labels,
    pants_arc_counts,
    projectivize,
    realizable,
    two_sided_ids,
    zero_vector,
)
from .klein import (
    C2,
    K1Move,
    M1Curve,
    OneSidedCurve,
    Pair,
    k1_bfs_path,
    k1_move_adjacency,
    m1_isotopy_decompositions,
    neighbors,
    twist_c2,
)
from .fenchel_nielsen import (
    FNPoint,
    Holonomy,
    Isometry,
    TwistSlope,
    curve_length,
    default_probe_family,
    exact_determinant,
    hexagon_seams,
    holonomy,
    length_spectrum,
    twist_flow_asymptotics,
    y_action,
    y_jacobian,
)
from .errors import (
    CrosscapError,
    InapplicableMoveError,
    NonStandardPositionError,
    NumericError,
    SearchBudgetExceededError,
    UnrealizableError,
    ValidationError,
)

__version__ = "0.1.0"
