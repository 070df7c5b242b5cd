//! The adjoint `θ_n: D_n(r) → ℤ` of `ω_n(r)` and the twisting morphism
//! `φ_n: B^c(D_n) → Com` it generates.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::coinvariants::orbit_rep;
use super::omega::{twisting_character, twisting_degree, verify_omega, CoinvariantChain, OmegaCheck, TwistingElement};
use crate::barratt_eccles::{en_basis, PermSimplex, Walker};
use crate::cobar::{cobar, en_dual};
use crate::error::{Error, Result};
use crate::operad_core::{EnOperad, Tree};

/// `θ(x^∨) = ⟨ω, [x]⟩` on the dual basis of `E_n(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theta {
    pub n: usize,
    pub r: usize,
    omega: CoinvariantChain,
}

/// The adjoint of `ω`, which must sit in `E_n(r)_{Σ_r}` in degree `n(r-1) - 1`.
pub fn adjoint(omega: &CoinvariantChain, n: usize, r: usize) -> Result<Theta> {
    if omega.n != n || omega.r != r {
        return Err(Error::Invalid(format!("ω lives in E_{}({}), not E_{}({})", omega.n, omega.r, n, r)));
    }
    if Some(omega.degree) != twisting_degree(n, r) {
        return Err(Error::Invalid(format!(
            "degree {} of ω_{}({}) differs from n(r-1)-1 = {}",
            omega.degree,
            n,
            r,
            (n * (r - 1)) as i64 - 1
        )));
    }
    if omega.chi != twisting_character(n) {
        return Err(Error::Invalid(format!("character {} is not sgn^{}", omega.chi, n % 2)));
    }
    Ok(Theta { n, r, omega: omega.clone() })
}

impl Theta {
    pub fn value(&self, x: &PermSimplex) -> i64 {
        self.omega.theta(x)
    }

    /// Values on the degree-major basis of `E_n(r)`.
    pub fn on_basis(&self) -> Result<Vec<i64>> {
        Ok(en_basis(self.n, self.r)?.iter().map(|x| self.value(x)).collect())
    }

    pub fn omega(&self) -> &CoinvariantChain {
        &self.omega
    }
}

/// The inverse of [`adjoint`]: recovers `ω` from values of `θ` on the basis of
/// `E_n(r)`, which must satisfy `θ(w·x) = sgn(w)^n θ(x)`.
pub fn coadjoint(n: usize, r: usize, values: &[i64]) -> Result<CoinvariantChain> {
    let degree = twisting_degree(n, r).ok_or_else(|| Error::Invalid("no twisting degree".into()))?;
    let basis = en_basis(n, r)?;
    if values.len() != basis.len() {
        return Err(Error::Dimension(format!("{} values for {} simplices", values.len(), basis.len())));
    }
    let chi = twisting_character(n);
    let mut w = CoinvariantChain::zero(n, r, chi, degree);
    for (x, &v) in basis.iter().zip(values) {
        if x.is_identity_start() && v != 0 {
            if x.degree() != degree {
                return Err(Error::Invalid(format!("θ is nonzero on {} outside degree {}", x, degree)));
            }
            w.terms.insert(x.clone(), v);
        }
    }
    for (x, &v) in basis.iter().zip(values) {
        let (c, rep) = orbit_rep(x, chi);
        if v != c * w.terms.get(&rep).copied().unwrap_or(0) {
            return Err(Error::Invalid(format!("θ is not equivariant at {}", x)));
        }
    }
    Ok(w)
}

/// `φ_n` in arities `2..=max_arity` with the checks that were run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiMap {
    pub n: usize,
    pub max_arity: usize,
    /// `φ_n(x^∨)` on the representatives with nonzero value, per arity.
    pub generators: Vec<CoinvariantChain>,
    /// Streamed checks of `φ_n ∂ = 0` and `σ_* ω_n = ω_{n-1}`.
    pub streamed: Vec<OmegaCheck>,
    /// Arities where `φ_n ∂ = 0` was also checked on the assembled cobar complex.
    pub matrix_checked: Vec<usize>,
}

/// Cap on `dim E_n(r)` for assembling the cobar complex in [`build_phi`].
pub const PHI_MATRIX_CAP: usize = 5000;

/// `φ_n(T) = Π_v θ(x_v)` on a basis tree of `B^c(D_n)(r)`.
pub fn phi_on_tree(fam: &TwistingElement, op: &EnOperad, n: usize, t: &Tree) -> i64 {
    t.vertices().iter().map(|&(k, l)| fam.theta(n, op.element(k, l))).product()
}

/// Assembles `φ_n` up to `max_arity` from a solved family and checks that it
/// is a twisting morphism compatible with the tower.
pub fn build_phi(fam: &TwistingElement, n: usize, max_arity: usize) -> Result<PhiMap> {
    if n == 0 || n > fam.n_max || max_arity < 2 || max_arity > fam.r_max {
        return Err(Error::Invalid(format!("φ_{} up to arity {} needs ω beyond the solved range", n, max_arity)));
    }
    let mut generators = Vec::new();
    for r in 2..=max_arity {
        let w = fam.get(n, r).expect("in range");
        adjoint(w, n, r)?;
        generators.push(w.clone());
    }
    let streamed: Vec<OmegaCheck> = verify_omega(fam)?.into_iter().filter(|c| c.n == n && c.r <= max_arity).collect();
    let mut matrix_checked = Vec::new();
    for r in 2..=max_arity {
        if Walker::new(n, r).count_capped(PHI_MATRIX_CAP as u64).is_none() {
            continue;
        }
        check_on_cobar(fam, n, r)?;
        matrix_checked.push(r);
    }
    Ok(PhiMap { n, max_arity, generators, streamed, matrix_checked })
}

/// `φ_n ∘ ∂ = 0` out of cobar degree 1 on the assembled `B^c(D_n)(r)`.
fn check_on_cobar(fam: &TwistingElement, n: usize, r: usize) -> Result<()> {
    let op = EnOperad::new(n, r)?;
    let c = cobar(&en_dual(n, r)?, r)?;
    let phi: Vec<BigInt> = c.basis(0).iter().map(|t| BigInt::from(phi_on_tree(fam, &op, n, t))).collect();
    if c.basis(1).is_empty() {
        return Ok(());
    }
    let d = c.complex().differential(1);
    let image = d.transpose().mul_vec(&phi);
    if let Some(j) = image.iter().position(|v| *v != BigInt::from(0)) {
        return Err(Error::Verification(format!("φ_{} ∂ is nonzero on {} in arity {}", n, c.basis(1)[j], r)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barratt_eccles::{mu, tau_mu};
    use crate::cobar::en_dual;
    use crate::perm::Perm;
    use crate::twisting::solve_omega;

    #[test]
    fn adjoint_round_trips() {
        let fam = solve_omega(3, 3).unwrap();
        for n in 1..=3 {
            for r in 2..=3 {
                let th = adjoint(fam.get(n, r).unwrap(), n, r).unwrap();
                let back = coadjoint(n, r, &th.on_basis().unwrap()).unwrap();
                assert_eq!(&back, fam.get(n, r).unwrap());
            }
        }
    }

    #[test]
    fn adjoint_rejects_wrong_degree() {
        let fam = solve_omega(2, 3).unwrap();
        let mut w = fam.get(2, 3).unwrap().clone();
        w.degree = 2;
        assert!(matches!(adjoint(&w, 2, 3), Err(Error::Invalid(_))));
        assert!(adjoint(fam.get(2, 3).unwrap(), 2, 2).is_err());
    }

    #[test]
    fn coadjoint_rejects_non_equivariant_values() {
        let basis = en_basis(2, 2).unwrap();
        let values: Vec<i64> = basis.iter().map(|x| i64::from(*x == mu(1))).collect();
        assert!(coadjoint(2, 2, &values).is_err());
        let values: Vec<i64> = basis.iter().map(|x| i64::from(*x == mu(1)) + i64::from(*x == tau_mu(1))).collect();
        assert!(coadjoint(2, 2, &values).is_ok());
    }

    /// `θ` is invariant under the action on `D_n(r)` exactly for the
    /// character `sgn^n`.
    #[test]
    fn theta_is_equivariant_only_for_chi_n() {
        for (n, r) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)] {
            let fam = solve_omega(n, r).unwrap();
            let w = fam.get(n, r).unwrap();
            let d = en_dual(n, r).unwrap();
            let basis = en_basis(n, r).unwrap();
            for chi in 0..2u8 {
                let twisted = CoinvariantChain { chi, ..w.clone() };
                let theta: Vec<BigInt> = basis.iter().map(|x| BigInt::from(twisted.theta(x))).collect();
                let invariant = Perm::all(r).iter().all(|g| d.act_matrix(r, g).transpose().mul_vec(&theta) == theta);
                assert_eq!(invariant, chi == (n % 2) as u8 || w.is_zero(), "n={} r={} chi={}", n, r, chi);
            }
        }
    }

    #[test]
    fn phi_is_a_twisting_morphism() {
        let fam = solve_omega(3, 3).unwrap();
        for n in 1..=3 {
            let phi = build_phi(&fam, n, 3).unwrap();
            assert_eq!(phi.matrix_checked, vec![2, 3]);
        }
    }
}
