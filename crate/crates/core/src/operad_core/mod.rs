//! Trees, free operads, operads given by generators and relations, explicit
//! arity truncations and operadic suspension.

mod operad;
mod presentation;
mod tree;

pub use operad::{
    act_vec, canonical_tree, check_axioms, compose_vec, differential_vec, evaluate_tree, normalize, operadic_suspension,
    suspension_sign, Component, Suspended, EnOperad, GradedOperadTruncation, Operad, SparseVec,
};
pub use presentation::{FreeElement, Generator, PresentedOperad, Presentation, QuotientComponent, Symmetry};
pub use tree::{reduced_shapes, two_vertex_sets, two_vertex_slot, two_vertex_tree, Tree};

#[cfg(test)]
mod tests;
