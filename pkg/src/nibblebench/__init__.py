"""Independent sets and colorings of triangle-sparse graphs.

Core pieces: an immutable CSR graph with exact counting oracles
(`graph_core`), left-sparse vertex orderings (`turan_order`), randomized
partitions into triangle-free bounded-degree classes (`tf_partition`), the
cleaning/nibble independent-set procedure (`nibble`), a partition-then-color
pipeline (`coloring`), seeded instance generators (`instance_gen`), and the
`nibblebench` CLI (`bench_cli`).
"""

from .graph_core import (
    EdgeListError,
    Graph,
    InstanceTooLarge,
    RelabeledSubgraph,
    VertexSet,
    common_neighbor_count,
    contains_kttt,
    degrees,
    exact_mis,
    from_edge_list,
    greedy_independent_set,
    induced,
    is_independent,
    triangle_count,
    triangles_through,
    write_edge_list,
)
from .turan_order import (
    CodegreeProfile,
    LeftSparsityReport,
    VertexOrdering,
    codegree_profile,
    left_sparse_ordering,
    star_extension_floor,
    verify_left_sparsity,
)
from .tf_partition import (
    BadEvent,
    CertificationError,
    ClassCertificate,
    Partition,
    PartitionParams,
    PartitionReport,
    ResampleBudgetError,
    classify_left_bad,
    cleanup_to_triangle_free,
    default_params,
    find_bad_events,
    moser_tardos_partition,
    verify_partition,
)
from .nibble import (
    CleaningReport,
    IsetStepResult,
    IsetStepStats,
    NibbleOutcome,
    NibbleParams,
    NibbleTrace,
    TraceRecord,
    check_cleaning_inequalities,
    cleaning_step,
    default_nibble_params,
    expected_residual_edges,
    expected_survivors,
    iset_step,
    reference_bounds,
    run_nibble,
)
from .coloring import (
    Coloring,
    ColoringReport,
    PartColorerChoice,
    PipelineResult,
    color_kttt_free,
    color_part,
    color_pipeline,
    verify_coloring,
)
from .instance_gen import (
    FAMILIES,
    GenerationError,
    GenSpec,
    bipartite,
    blowup,
    complete_graph,
    cycle_graph,
    generate,
    gnp,
    parse_genspec,
    path_graph,
    random_regular,
    stream,
    triangle_scrubbed_gnp,
)
from .bench_cli import RunConfig, RunReport, run_suite, verify_artifacts

__version__ = "0.1.0"
