"""Online prediction of switching graph labelings.

Pipeline: sample a uniform spanning tree of the graph, DFS-linearize it
into a spine, and run online predictors over spine positions -- the
switching cluster-specialists engine (full or binary-tree basis), the
quasi-Bayes switch-reset predictor, or the kernel-perceptron baseline on
the original graph.  The harness reproduces planted switching-labeling
experiments with ensembles and majority voting; the bounds module
evaluates the matching closed-form mistake bounds.
"""

from ._version import __version__
from .bases import (
    BinaryTreeBasis,
    Comparator,
    FullBasis,
    Specialist,
    basis_size,
    cover_btree,
    hamming_divergence,
    j_divergence,
    make_basis,
    min_cover_btree_oracle,
    min_cover_full,
)
from .bounds import (
    SegmentStats,
    bound_majority,
    bound_theorem1,
    bound_theorem1_untuned,
    bound_theorem2,
    optimal_alpha,
    scs_alpha_experiment,
)
from .graphs import (
    Graph,
    GraphFormatError,
    NumericalError,
    cut_size,
    effective_resistance,
    knn_union_mst_graph,
    laplacian,
    laplacian_pinv,
    load_features,
    load_graph,
    resistance_weighted_cut,
)
from .harness import (
    ExperimentConfig,
    Stream,
    gen_class_split_labelings,
    gen_planted_stream,
    majority_vote,
    parse_config,
    run_experiment,
)
from .qbayes import QBayes, chain_conditional, nn_marginal, sequence_log_probability
from .scs import (
    TIME_VARYING,
    IrrecoverableStateError,
    ScsEngine,
    TrialOutcome,
    scs_eager_reference,
)
from .sgp import SgpEngine, sgp_gamma_oracle, sgp_kernel
from .spine import (
    SamplingAborted,
    SpanningTree,
    Spine,
    linearize,
    position_cut,
    sample_spine,
    sample_ust,
    spine_cut,
    tree_cut,
)

__all__ = [name for name in dir() if not name.startswith("_")]
