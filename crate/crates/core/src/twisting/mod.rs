//! Twisting elements `ω_n ∈ E_n(r)_{Σ_r}`, the twisting morphisms
//! `φ_n: B^c(Λ^{-n}E_n^∨) → Com` they define, and lifts `ψ_n` of `φ_n`
//! through the augmentation `E_n → Com`.

mod cofaces;
mod coinvariants;
mod omega;
mod phi;
mod psi;

pub use cofaces::{sigma_preimages, Cofaces};
pub use coinvariants::{
    action_is_free, character, coinvariant_boundary, coinvariants, coinvariants_in, orbit_rep, representatives, sigma_kernel,
    CoinvariantComplex,
};
pub use omega::{solve_omega, twisting_character, twisting_degree, verify_omega, CoinvariantChain, OmegaCheck, TwistingElement};
pub use phi::{adjoint, build_phi, coadjoint, phi_on_tree, PhiMap, Theta, PHI_MATRIX_CAP};
pub use psi::{arity_two, generator_degree, is_quasi_iso, lift_psi, verify_psi, Psi, PsiCheck, PsiLevel};
#[cfg(test)]
mod tests;
