"""Map shared social-media practices instead of raw interaction volume.

The toolkit turns typed, directed interaction records (who retweeted or
@mentioned whom) and per-account attribute records (hashtag use, topic
affinities, shared domains) into normalized sparse "practice vectors",
compares every pair of accounts by cosine similarity, keeps pairs above a
threshold as an undirected weighted network, clusters that network with
Louvain modularity maximization, and reports what each cluster does:
archetype members, E-I indices, contribution timelines, and favorite
interaction targets. Everything is exportable as Gephi-ready delimited
text, and a config-driven CLI (``practicemap``) runs the whole pipeline
or any single stage reproducibly.
"""

from ._version import __version__
from .config import InputSpec, RunConfig, load_config
from .errors import (
    ConfigError,
    InputError,
    MissingTimestampError,
    PracticeMapError,
    SchemaError,
)
from .graph import (
    ClusterAssignment,
    PracticeGraph,
    build_graph,
    intra_cluster_weighted_degree,
    louvain,
    modularity_of_partition,
    top_archetypes,
)
from .metrics import (
    EIIndexValue,
    TemporalBin,
    TemporalSeries,
    cluster_backprojection,
    ei_index,
    ei_report,
    temporal_contributions,
    top_targets,
)
from .pipeline import run_pipeline, run_stage
from .records import (
    AttributeRecord,
    InteractionRecord,
    parse_attributes,
    parse_interactions,
    validation_report,
    write_attributes,
    write_interactions,
)
from .similarity import (
    SimilarityEdge,
    combine_aspect_similarities,
    concat_composite_vector,
    cosine_similarity,
    pairwise_similarities,
    threshold_edges,
)
from .synth import (
    PolarizedScenario,
    brute_force_modularity,
    brute_force_pairwise,
    generate_polarized,
)
from .vectors import (
    COMBINED,
    INCOMING,
    OUTGOING,
    PracticeVector,
    accumulate_attribute_vectors,
    accumulate_interaction_vectors,
    dimension_key,
    filter_by_activity,
    normalize,
    normalize_all,
    split_degenerate,
)

__all__ = [
    "__version__",
    "AttributeRecord",
    "ClusterAssignment",
    "COMBINED",
    "ConfigError",
    "EIIndexValue",
    "INCOMING",
    "InputError",
    "InputSpec",
    "InteractionRecord",
    "MissingTimestampError",
    "OUTGOING",
    "PolarizedScenario",
    "PracticeGraph",
    "PracticeMapError",
    "PracticeVector",
    "RunConfig",
    "SchemaError",
    "SimilarityEdge",
    "TemporalBin",
    "TemporalSeries",
    "accumulate_attribute_vectors",
    "accumulate_interaction_vectors",
    "brute_force_modularity",
    "brute_force_pairwise",
    "build_graph",
    "cluster_backprojection",
    "combine_aspect_similarities",
    "concat_composite_vector",
    "cosine_similarity",
    "dimension_key",
    "ei_index",
    "ei_report",
    "filter_by_activity",
    "generate_polarized",
    "intra_cluster_weighted_degree",
    "load_config",
    "louvain",
    "modularity_of_partition",
    "normalize",
    "normalize_all",
    "pairwise_similarities",
    "parse_attributes",
    "parse_interactions",
    "run_pipeline",
    "run_stage",
    "split_degenerate",
    "temporal_contributions",
    "threshold_edges",
    "top_archetypes",
    "top_targets",
    "validation_report",
    "write_attributes",
    "write_interactions",
]
