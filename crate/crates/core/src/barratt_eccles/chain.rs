use std::collections::BTreeMap;
use std::fmt;

use super::simplex::{compose_vertices, PermSimplex};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// A homogeneous integer chain of `E(r)`. The zero chain compares equal in
/// every degree.
#[derive(Clone)]
pub struct Chain {
    arity: usize,
    degree: usize,
    terms: BTreeMap<PermSimplex, i64>,
}

impl Chain {
    pub fn zero(arity: usize, degree: usize) -> Chain {
        Chain { arity, degree, terms: BTreeMap::new() }
    }

    pub fn from_simplex(s: PermSimplex) -> Chain {
        Chain::from_term(s, 1)
    }

    pub fn from_term(s: PermSimplex, c: i64) -> Chain {
        let mut out = Chain::zero(s.arity(), s.degree());
        out.add_term(s, c);
        out
    }

    pub fn from_terms(arity: usize, degree: usize, terms: impl IntoIterator<Item = (PermSimplex, i64)>) -> Chain {
        let mut out = Chain::zero(arity, degree);
        for (s, c) in terms {
            out.add_term(s, c);
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PermSimplex, i64)> {
        self.terms.iter().map(|(s, c)| (s, *c))
    }

    pub fn coefficient(&self, s: &PermSimplex) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, s: PermSimplex, c: i64) {
        if c == 0 {
            return;
        }
        if self.terms.is_empty() && s.arity() == self.arity {
            // the zero chain has no fixed degree
            self.degree = s.degree();
        }
        assert!(
            s.arity() == self.arity && s.degree() == self.degree,
            "term {} does not live in arity {} degree {}",
            s,
            self.arity,
            self.degree
        );
        let entry = self.terms.entry(s);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Chain) {
        self.add_scaled(other, 1);
    }

    pub fn add_scaled(&mut self, other: &Chain, k: i64) {
        if other.is_zero() {
            return;
        }
        for (s, c) in other.terms() {
            self.add_term(s.clone(), c * k);
        }
    }

    pub fn scaled(&self, k: i64) -> Chain {
        let mut out = Chain::zero(self.arity, self.degree);
        out.add_scaled(self, k);
        out
    }

    /// Face differential `δ = Σ (-1)^i d_i` on normalized chains.
    pub fn differential(&self) -> Chain {
        let mut out = Chain::zero(self.arity, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (s, c) in self.terms() {
            for k in 0..=s.degree() {
                if let Some(f) = s.face(k) {
                    out.add_term(f, if k % 2 == 0 { c } else { -c });
                }
            }
        }
        out
    }

    /// Termwise left action; no signs.
    pub fn act(&self, rho: &Perm) -> Result<Chain> {
        if rho.arity() != self.arity {
            return Err(Error::Dimension(format!("permutation of arity {} on a chain of arity {}", rho.arity(), self.arity)));
        }
        Ok(Chain::from_terms(self.arity, self.degree, self.terms().map(|(s, c)| (s.act(rho), c))))
    }

    /// Sum of coefficients in degree 0; zero in positive degrees.
    pub fn augmentation(&self) -> i64 {
        if self.degree == 0 {
            self.terms.values().sum()
        } else {
            0
        }
    }

    /// Largest variation count over all terms.
    pub fn max_variation(&self) -> usize {
        self.terms.keys().map(|s| s.max_variation()).max().unwrap_or(0)
    }

    pub fn in_en(&self, n: usize) -> bool {
        self.terms.keys().all(|s| s.in_en(n))
    }
}

impl PartialEq for Chain {
    fn eq(&self, other: &Chain) -> bool {
        self.arity == other.arity && self.terms == other.terms && (self.degree == other.degree || self.terms.is_empty())
    }
}

impl Eq for Chain {}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *c < 0 {
                write!(f, "- ")?;
            } else if k > 0 {
                write!(f, "+ ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "({})", s)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[r={}, d={}]: {}", self.arity, self.degree, self)
    }
}

/// The lattice-path composite `u ∘_e v` of two simplices, as signed terms.
///
/// A path is a word in `m = deg u` u-steps and `p = deg v` v-steps; the
/// term along it carries the sign `(-1)^{Σ_{u-steps} #(earlier v-steps)}`.
pub fn compose_simplices(u: &PermSimplex, e: usize, v: &PermSimplex) -> Vec<(PermSimplex, i64)> {
    assert!(e >= 1 && e <= u.arity(), "slot {} out of range for arity {}", e, u.arity());
    let (m, p) = (u.degree(), v.degree());
    let arity = u.arity() + v.arity() - 1;
    let mut out = Vec::new();
    let mut flat = Vec::with_capacity(arity * (m + p + 1));
    walk(u, e, v, 0, 0, 0, 1, &mut flat, &mut out, arity);
    debug_assert!(out.len() == binomial(m + p, m));
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    u: &PermSimplex,
    e: usize,
    v: &PermSimplex,
    k: usize,
    l: usize,
    vsteps: usize,
    sign: i64,
    flat: &mut Vec<u8>,
    out: &mut Vec<(PermSimplex, i64)>,
    arity: usize,
) {
    let mark = flat.len();
    compose_vertices(u.vertex(k), e, v.vertex(l), flat);
    if k == u.degree() && l == v.degree() {
        out.push((PermSimplex::from_flat(arity, flat.clone()), sign));
    } else {
        if k < u.degree() {
            let s = if vsteps % 2 == 0 { sign } else { -sign };
            walk(u, e, v, k + 1, l, vsteps, s, flat, out, arity);
        }
        if l < v.degree() {
            walk(u, e, v, k, l + 1, vsteps + 1, sign, flat, out, arity);
        }
    }
    flat.truncate(mark);
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Bilinear extension of [`compose_simplices`].
pub fn compose(u: &Chain, e: usize, v: &Chain) -> Result<Chain> {
    if e == 0 || e > u.arity() {
        return Err(Error::Invalid(format!("slot {} out of range for arity {}", e, u.arity())));
    }
    let mut out = Chain::zero(u.arity() + v.arity() - 1, u.degree() + v.degree());
    for (a, ca) in u.terms() {
        for (b, cb) in v.terms() {
            for (s, c) in compose_simplices(a, e, b) {
                out.add_term(s, c * ca * cb);
            }
        }
    }
    Ok(out)
}

/// The operad unit in `E(1)`.
pub fn unit() -> Chain {
    Chain::from_simplex(PermSimplex::from_flat(1, vec![1]))
}

/// Alternating simplex `μ_d = (id, τ, id, ...)` in `E(2)`.
pub fn mu(d: usize) -> PermSimplex {
    alternating(d, false)
}

/// `τμ_d = (τ, id, τ, ...)`.
pub fn tau_mu(d: usize) -> PermSimplex {
    alternating(d, true)
}

fn alternating(d: usize, start_tau: bool) -> PermSimplex {
    let flat = (0..=d)
        .flat_map(|k| if (k % 2 == 1) ^ start_tau { [2u8, 1] } else { [1u8, 2] })
        .collect();
    PermSimplex::from_flat(2, flat)
}

/// The cycle `λ_{n-1} = μ_{n-1} + (-1)^n τμ_{n-1}` spanning `H_{n-1}(E_n(2))`.
pub fn lambda(n: usize) -> Chain {
    assert!(n >= 1);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    Chain::from_terms(2, n - 1, [(mu(n - 1), 1), (tau_mu(n - 1), sign)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(text: &str) -> Chain {
        Chain::from_simplex(PermSimplex::parse(text).unwrap())
    }

    #[test]
    fn differential_of_mu() {
        let d = Chain::from_simplex(mu(1)).differential();
        let expected = Chain::from_terms(2, 0, [(tau_mu(0), 1), (mu(0), -1)]);
        assert_eq!(d, expected);
        for k in 1..6 {
            let dk = Chain::from_simplex(mu(k)).differential();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(dk, Chain::from_terms(2, k - 1, [(tau_mu(k - 1), 1), (mu(k - 1), sign)]));
        }
    }

    #[test]
    fn lambda_is_a_cycle() {
        for n in 1..7 {
            assert!(lambda(n).differential().is_zero(), "n = {}", n);
        }
    }

    #[test]
    fn degree_zero_substitution() {
        // (1, e, 4) with (5, 2, 3) inserted at e; in normalized labels
        // u = (1,2,3), v = (3,1,2), slot 2
        let c = compose(&ch("123"), 2, &ch("312")).unwrap();
        assert_eq!(c, ch("14235"));
    }

    #[test]
    fn unit_laws() {
        let w = ch("21|12|21");
        for e in 1..=2 {
            assert_eq!(compose(&w, e, &unit()).unwrap(), w);
        }
        assert_eq!(compose(&unit(), 1, &w).unwrap(), w);
    }

    #[test]
    fn two_paths() {
        let c = compose(&Chain::from_simplex(mu(0)), 1, &Chain::from_simplex(mu(1))).unwrap();
        assert_eq!(c, ch("123|213"));
        // μ_1 ∘_1 μ_1 has two paths with opposite orientations
        let c = compose(&Chain::from_simplex(mu(1)), 1, &Chain::from_simplex(mu(1))).unwrap();
        assert_eq!(c, Chain::from_terms(3, 2, [
            (PermSimplex::parse("123|312|321").unwrap(), 1),
            (PermSimplex::parse("123|213|321").unwrap(), -1),
        ]));
    }
}
