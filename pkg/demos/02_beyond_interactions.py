# %%
"""
Beyond interactions: attribute aspects, combination, and diagnostics
====================================================================

Practices are not only who you retweet. Hashtag habits, shared links,
or topic affinities are further *aspects* of behavior, each yielding its
own practice vectors and similarity network. This walkthrough combines
an interaction aspect with a hashtag aspect, then reads the cluster
diagnostics: E-I indices, temporal contribution series, and top targets.

Run it from the repository root::

    python3 demos/02_beyond_interactions.py
"""

from practicemap import (
    AttributeRecord,
    PolarizedScenario,
    accumulate_attribute_vectors,
    accumulate_interaction_vectors,
    build_graph,
    combine_aspect_similarities,
    concat_composite_vector,
    ei_report,
    generate_polarized,
    louvain,
    normalize_all,
    pairwise_similarities,
    temporal_contributions,
    threshold_edges,
    top_targets,
)

# %%
# Two camps again, but now each account also carries hashtag activity.
# Camp A leans on #justice, camp B on #reform; both use #news. The
# B-camp's B5 is a deliberate odd one out: it tweets like camp B but
# tags like camp A.

records = generate_polarized(PolarizedScenario(group_sizes=(5, 5)))

hashtag_rows = []
for i in range(1, 6):
    hashtag_rows += [
        AttributeRecord(f"A{i}", "hashtags", "#justice", 70),
        AttributeRecord(f"A{i}", "hashtags", "#news", 30),
    ]
for i in range(1, 5):
    hashtag_rows += [
        AttributeRecord(f"B{i}", "hashtags", "#reform", 70),
        AttributeRecord(f"B{i}", "hashtags", "#news", 30),
    ]
hashtag_rows += [
    AttributeRecord("B5", "hashtags", "#justice", 70),
    AttributeRecord("B5", "hashtags", "#news", 30),
]

# %%
# Vectorize each aspect separately. Attribute vectors normalize exactly
# like interaction vectors: (70, 30) becomes (0.7, 0.3).

interaction_vectors = normalize_all(accumulate_interaction_vectors(records))
hashtag_vectors = normalize_all(accumulate_attribute_vectors(hashtag_rows))
print("A1 hashtag distribution:", dict(sorted(hashtag_vectors["A1"].entries.items())))

# %%
# Option 1 — weighted sum. Compute each aspect's similarities without a
# threshold, average them with chosen weights, then threshold the blend.
# With weights 2:1 the interaction aspect dominates: B5 still lands with
# camp B, because its tweeting habits outvote its hashtags.

per_aspect = {
    "interactions": pairwise_similarities(interaction_vectors, min_weight=0.0),
    "hashtags": pairwise_similarities(hashtag_vectors, min_weight=0.0),
}
blend = combine_aspect_similarities(per_aspect, {"interactions": 2.0, "hashtags": 1.0})
edges = threshold_edges(blend, 0.6)

graph = build_graph(edges, interaction_vectors)
assignment = louvain(graph, seed=0)
print(f"\nweighted 2:1 -> {assignment.n_clusters} clusters")
for cluster, members in assignment.clusters().items():
    print(f"  cluster {cluster}: {', '.join(sorted(members))}")

# %%
# Flip the weights to 1:2 and the hashtag aspect wins instead: B5 is
# pulled into the #justice cluster. The weights are an explicit,
# reportable modelling decision, not a hidden default.

flipped = threshold_edges(
    combine_aspect_similarities(per_aspect, {"interactions": 1.0, "hashtags": 2.0}), 0.6
)
flipped_assignment = louvain(build_graph(flipped, interaction_vectors), seed=0)
print(f"\nweighted 1:2 -> {flipped_assignment.n_clusters} clusters")
for cluster, members in flipped_assignment.clusters().items():
    print(f"  cluster {cluster}: {', '.join(sorted(members))}")

# %%
# Option 2 — composite vectors. Instead of averaging networks,
# concatenate each account's per-aspect vectors (each block keeps its
# own normalization) and compute one cosine over the long vector.

composites = {
    account: concat_composite_vector(
        [interaction_vectors[account], hashtag_vectors[account]]
    )
    for account in interaction_vectors
}
composite_edges = pairwise_similarities(composites, min_weight=0.6)
print(f"\ncomposite vectors -> {len(composite_edges)} edges at threshold 0.6")

# %%
# Diagnostics 1 — E-I index: is a cluster talking to itself (−1) or to
# outsiders (+1)? By construction retweets stay inside the camp and
# mentions cross it, so the per-type indices hit both extremes.

print("\nE-I indices (cluster, type, value):")
for value in ei_report(records, assignment):
    shown = f"{value.value:+.3f}" if value.defined else "undefined"
    print(f"  cluster {value.cluster:>2}  {value.interaction_type:<8} {shown}")

# %%
# Diagnostics 2 — temporal contributions: distinct posts per week per
# cluster. The synthetic scenario stamps each account's batch one week
# apart, so activity alternates between the camps as their members take
# turns.

print("\nposts per week (cluster: count):")
for series in temporal_contributions(records, assignment):
    for tbin in series.bins:
        print(f"  {tbin.start:%Y-%m-%d}  cluster {series.cluster}: {tbin.count}")

# %%
# Diagnostics 3 — top targets of a cluster's archetypes: whom does each
# camp aim its mentions at? Camp A's top mention targets are exactly the
# B accounts.

camp_a = sorted(assignment.clusters()[0])
print("\ncamp A's top mention targets:", top_targets(records, camp_a, k=3)["mention"])
