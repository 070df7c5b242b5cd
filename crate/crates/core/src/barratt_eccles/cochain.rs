use std::collections::HashMap;

use super::chain::Chain;
use super::simplex::PermSimplex;

/// Integer cochains on the simplices of `E(r)`.
#[derive(Clone, Debug)]
pub enum Cochain {
    /// The signature cochain of degree `r - 1`.
    Sgn { arity: usize },
    /// Alexander-Whitney cup product.
    Cup(Box<Cochain>, Box<Cochain>),
    /// Explicit values on simplices of one degree.
    Table { arity: usize, degree: usize, values: HashMap<PermSimplex, i64> },
}

impl Cochain {
    pub fn sgn(arity: usize) -> Cochain {
        Cochain::Sgn { arity }
    }

    pub fn arity(&self) -> usize {
        match self {
            Cochain::Sgn { arity } | Cochain::Table { arity, .. } => *arity,
            Cochain::Cup(f, _) => f.arity(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Cochain::Sgn { arity } => arity - 1,
            Cochain::Cup(f, g) => f.degree() + g.degree(),
            Cochain::Table { degree, .. } => *degree,
        }
    }

    pub fn eval(&self, s: &PermSimplex) -> i64 {
        if s.arity() != self.arity() || s.degree() != self.degree() {
            return 0;
        }
        match self {
            Cochain::Sgn { .. } => s.sgn(),
            Cochain::Cup(f, g) => {
                let p = f.degree();
                let a = f.eval(&s.slice(0, p));
                if a == 0 {
                    return 0;
                }
                a * g.eval(&s.slice(p, s.degree()))
            }
            Cochain::Table { values, .. } => values.get(s).copied().unwrap_or(0),
        }
    }

    pub fn eval_chain(&self, c: &Chain) -> i64 {
        c.terms().map(|(s, k)| k * self.eval(s)).sum()
    }
}

/// `(f ∪ g)(w_0..w_d) = f(w_0..w_p) g(w_p..w_d)` with `p = deg f`.
pub fn cup(f: &Cochain, g: &Cochain) -> Cochain {
    assert_eq!(f.arity(), g.arity(), "arity mismatch");
    Cochain::Cup(Box::new(f.clone()), Box::new(g.clone()))
}

/// The `m`-fold cup power `sgn^{∪m}` on `E(r)`, of degree `m(r - 1)`.
pub fn sphere_action(m: usize, r: usize) -> Cochain {
    assert!(m >= 1);
    let mut c = Cochain::sgn(r);
    for _ in 1..m {
        c = cup(&c, &Cochain::sgn(r));
    }
    c
}

/// `σ(c) = sgn ∩ c`, returned as a chain of `E(r)` of degree `deg c - (r - 1)`.
/// Its degree in `Λ^{-1}E(r)` is `deg c`.
pub fn suspension_sigma(c: &Chain) -> Chain {
    let r = c.arity();
    if c.degree() + 1 < r {
        return Chain::zero(r, 0);
    }
    let mut out = Chain::zero(r, c.degree() + 1 - r);
    for (s, k) in c.terms() {
        if let Some((sign, tail)) = s.cap_sgn() {
            out.add_term(tail, sign * k);
        }
    }
    out
}

/// `σ̃(c) = (-1)^{(r-1)|c|} σ(c)`: with this sign `σ̃: E -> Λ^{-1}E` is a
/// morphism of operads and a chain map.
pub fn suspension_morphism(c: &Chain) -> Chain {
    let r = c.arity();
    let s = suspension_sigma(c);
    if (r - 1) * c.degree() % 2 == 1 {
        s.scaled(-1)
    } else {
        s
    }
}

/// Linear extension of [`PermSimplex::section_t`].
pub fn section_t(c: &Chain) -> Chain {
    let r = c.arity();
    Chain::from_terms(r, c.degree() + r - 1, c.terms().map(|(s, k)| (s.section_t(), k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barratt_eccles::{mu, tau_mu};

    #[test]
    fn sigma_of_mu1() {
        let s = suspension_sigma(&Chain::from_simplex(mu(1)));
        assert_eq!(s, Chain::from_simplex(tau_mu(0)));
    }

    #[test]
    fn sigma_below_degree_vanishes() {
        let c = Chain::from_simplex(PermSimplex::parse("123|213").unwrap());
        assert!(suspension_sigma(&c).is_zero());
    }

    #[test]
    fn first_cup_power_is_sgn() {
        let s = PermSimplex::parse("21|12").unwrap();
        assert_eq!(sphere_action(1, 2).eval(&s), s.sgn());
    }

    #[test]
    fn second_cup_power_in_arity_two() {
        // the degree-2 simplices of E(2) are μ_2 and τμ_2
        let f = sphere_action(2, 2);
        assert_eq!(f.degree(), 2);
        assert_eq!(f.eval(&mu(2)), -1);
        assert_eq!(f.eval(&tau_mu(2)), -1);
    }
}
