//! Frustration graphs, line-graph recognition, twin quotients, bipartite
//! matching and signed-rank search.

mod graph;
mod independent;
mod linegraph;
mod matching;
mod twins;

pub use graph::{frustration_graph, Graph};
pub use independent::{independence_number, maximum_independent_set, DEFAULT_INDEPENDENCE_CAP};
pub use linegraph::{is_line_graph, line_graph_root, LineGraphRoot};
pub use matching::{max_bipartite_matching, signed_rank_search, Matching, SignSearch, SignedBipartiteGraph};
pub use twins::{
    false_twin_classes, is_line_graph_up_to_twins, line_graph_root_up_to_twins, quotient, twin_classes,
};
