//! Dual cooperads, their cobar constructions truncated by arity, the edge
//! morphism to homology and the maps induced by the suspension morphism.

mod bar;
mod complex;
mod dual;
mod edge;
mod factor;
mod sigma;
mod stream;

pub use bar::{apply_linear, bar_degree, bar_differential, collect, internal_part, twist_part};
pub use complex::{cobar, cobar_degree, cobar_unchecked, labeled_trees, labeled_trees_in, CobarComplex, WeightPiece};
pub use dual::{dualize, en_dual, presented_dual, CooperadTruncation};
pub use edge::{edge_morphism, gerstenhaber_generators, homology_ranks_match, EdgeDegree, EdgeReport};
pub use factor::{cobar_dual_basis_differential, split_vertex, tree_leaf_order, Factorization};
pub use sigma::{map_labels, sigma_star, vertex_maps, SigmaStar, VertexMaps};
pub use stream::{stream_check, LazyEn, StreamReport};

#[cfg(test)]
mod tests;
