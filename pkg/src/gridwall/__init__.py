"""Grid/wall pattern graphs, skeleton quotients, product targets, rigidity
checks, and the reductions that tie them together."""

from .graph import (
    Coloring,
    Graph,
    GraphError,
    VertexMap,
    all_pairs_distances,
    are_isomorphic,
    bfs_distances,
    build_graph,
    distance,
    enumerate_cycles,
    find_isomorphism,
    identity_map,
    induced_subgraph,
    parse_graph,
    serialize_graph,
    shortest_odd_cycle,
    to_dot,
    two_coloring,
)
from .patterns import (
    PatternError,
    SkeletonSpec,
    grid_center_set,
    grid_coords,
    grid_id,
    grid_skeleton,
    make_grid,
    make_wall,
    pattern_treewidth,
    wall_skeleton,
)
from .product import (
    ProductError,
    ProductGraph,
    ProductVertex,
    build_product,
    lift_embedding,
    pi1,
    project_embedding,
    project_map,
)
from .reduction import (
    ColEmbInstance,
    DecisionReport,
    EmbInstance,
    ReductionError,
    colemb_to_emb,
    decide_via_reduction,
    grid_params_for_quotient,
    hom_to_colemb,
)
from .rigidity import (
    RigidityError,
    RigidityVerdict,
    is_rigid_exhaustive,
    list_rigid_skeletons,
    rigidity_random_search,
)
from .selfcheck import CheckResult, run_selfchecks
from .skeleton import (
    Assoc,
    QuotientResult,
    SkeletonError,
    SkeletonReport,
    associate,
    is_frame,
    is_skeleton,
    quotient,
)
from .solver import (
    CoreResult,
    SearchConfig,
    SearchLimitExceeded,
    VerifyResult,
    compute_core,
    find_colored_embedding,
    find_embedding,
    find_endo_counterexample,
    find_homomorphism,
    find_noncovering_embedding,
    iter_embeddings,
    verify_map,
)

__version__ = "0.1.0"
