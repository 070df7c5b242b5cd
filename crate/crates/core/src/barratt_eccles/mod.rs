//! The Barratt-Eccles chain operad `E`: simplices of permutations, the face
//! differential, lattice-path composition, the little-cubes filtration
//! `E_n`, the signature cochains and the suspension morphism.

mod chain;
mod cochain;
mod enumerate;
mod simplex;

#[cfg(test)]
pub(crate) use chain::binomial;
pub use chain::{compose, compose_simplices, lambda, mu, tau_mu, unit, Chain};
pub use cochain::{cup, section_t, sphere_action, suspension_morphism, suspension_sigma, Cochain};
pub use enumerate::{en_basis, en_basis_capped, EnBasis, Walker, DEFAULT_CAP};
pub use simplex::PermSimplex;

use crate::perm::Perm;

/// Restriction of `w` to the pair `{i, j}`: the values `i, j` in order of occurrence.
pub fn restriction(w: &Perm, i: u8, j: u8) -> crate::Result<[u8; 2]> {
    let r = w.arity() as u8;
    if !(1 <= i && i < j && j <= r) {
        return Err(crate::Error::Invalid(format!("pair ({}, {}) out of range for arity {}", i, j, r)));
    }
    Ok(w.restrict(i, j))
}

/// Simplex-level and chain-level membership in `E_n`.
pub fn en_member(s: &PermSimplex, n: usize) -> bool {
    s.in_en(n)
}

/// `ε`: the sum of coefficients in degree 0.
pub fn augmentation(c: &Chain) -> i64 {
    c.augmentation()
}
