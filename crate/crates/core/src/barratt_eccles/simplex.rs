use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{pairs, restrict_values, sign_of, substitute_values, Perm};

/// A non-degenerate simplex `(w_0, ..., w_d)` of permutations of `{1..r}`,
/// stored as the concatenation of the value sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PermSimplex {
    arity: u8,
    flat: Vec<u8>,
}

impl PermSimplex {
    /// Builds a simplex, rejecting degenerate sequences and non-permutations.
    pub fn new(perms: &[Perm]) -> Result<PermSimplex> {
        let r = perms.first().map(|p| p.arity()).ok_or_else(|| Error::Invalid("empty simplex".into()))?;
        let mut flat = Vec::with_capacity(r * perms.len());
        for (k, p) in perms.iter().enumerate() {
            if p.arity() != r || !crate::perm::is_permutation(&p.0) {
                return Err(Error::Invalid(format!("vertex {} is not a permutation of 1..{}", k, r)));
            }
            if k > 0 && perms[k - 1] == *p {
                return Err(Error::Invalid(format!("degenerate simplex at vertex {}", k)));
            }
            flat.extend_from_slice(&p.0);
        }
        Ok(PermSimplex { arity: r as u8, flat })
    }

    /// From a flat concatenation of value sequences; the caller guarantees
    /// validity and non-degeneracy.
    pub(crate) fn from_flat(arity: usize, flat: Vec<u8>) -> PermSimplex {
        debug_assert!(arity > 0 && flat.len() % arity == 0);
        PermSimplex { arity: arity as u8, flat }
    }

    /// Parses `"123|312|321"` (comma-separated values when `r > 9`).
    pub fn parse(text: &str) -> Result<PermSimplex> {
        let perms = text
            .split('|')
            .map(|part| {
                let vals: Option<Vec<u8>> = if part.contains(',') {
                    part.split(',').map(|t| t.trim().parse().ok()).collect()
                } else {
                    part.trim().chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect()
                };
                match vals {
                    Some(v) if crate::perm::is_permutation(&v) && !v.is_empty() => Ok(Perm(v)),
                    _ => Err(Error::Parse(format!("bad permutation {:?}", part))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PermSimplex::new(&perms)
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn degree(&self) -> usize {
        self.flat.len() / self.arity as usize - 1
    }

    pub fn flat(&self) -> &[u8] {
        &self.flat
    }

    /// Value sequence of `w_k`.
    pub fn vertex(&self, k: usize) -> &[u8] {
        let r = self.arity as usize;
        &self.flat[k * r..(k + 1) * r]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[u8]> {
        self.flat.chunks(self.arity as usize)
    }

    pub fn perms(&self) -> Vec<Perm> {
        self.vertices().map(|v| Perm(v.to_vec())).collect()
    }

    pub fn last(&self) -> &[u8] {
        self.vertex(self.degree())
    }

    /// Number of `k` with `w_k|_{ij} != w_{k+1}|_{ij}`.
    pub fn variation_count(&self, i: u8, j: u8) -> usize {
        let mut prev: Option<[u8; 2]> = None;
        let mut count = 0;
        for v in self.vertices() {
            let cur = restrict_values(v, i, j);
            if prev.is_some_and(|p| p != cur) {
                count += 1;
            }
            prev = Some(cur);
        }
        count
    }

    /// Variation counts for all pairs in [`pairs`] order.
    pub fn variation_counts(&self) -> Vec<usize> {
        pairs(self.arity()).into_iter().map(|(i, j)| self.variation_count(i, j)).collect()
    }

    pub fn max_variation(&self) -> usize {
        self.variation_counts().into_iter().max().unwrap_or(0)
    }

    /// Membership in the filtration layer `E_n`.
    pub fn in_en(&self, n: usize) -> bool {
        self.max_variation() < n
    }

    /// `k`-th face, or `None` when it is degenerate (or empty).
    pub fn face(&self, k: usize) -> Option<PermSimplex> {
        let d = self.degree();
        if d == 0 {
            return None;
        }
        if k > 0 && k < d && self.vertex(k - 1) == self.vertex(k + 1) {
            return None;
        }
        let r = self.arity as usize;
        let mut flat = Vec::with_capacity(self.flat.len() - r);
        flat.extend_from_slice(&self.flat[..k * r]);
        flat.extend_from_slice(&self.flat[(k + 1) * r..]);
        Some(PermSimplex { arity: self.arity, flat })
    }

    /// Sub-simplex `(w_a, ..., w_b)`.
    pub fn slice(&self, a: usize, b: usize) -> PermSimplex {
        let r = self.arity as usize;
        PermSimplex { arity: self.arity, flat: self.flat[a * r..(b + 1) * r].to_vec() }
    }

    /// Left action `ρ·(w_0, ..., w_d) = (ρ∘w_0, ..., ρ∘w_d)`.
    pub fn act(&self, rho: &Perm) -> PermSimplex {
        assert_eq!(rho.arity(), self.arity(), "arity mismatch");
        let flat = self.flat.iter().map(|&v| rho.0[v as usize - 1]).collect();
        PermSimplex { arity: self.arity, flat }
    }

    /// The simplex `(t_1, ..., t_{r-1}, w_0, ..., w_d)` where `t_k` reverses
    /// the first `r - k + 1` entries of `w_0`.
    pub fn section_t(&self) -> PermSimplex {
        let r = self.arity as usize;
        let w0 = self.vertex(0).to_vec();
        let mut flat = Vec::with_capacity(self.flat.len() + r * (r - 1));
        for k in 1..r {
            let mut t = w0.clone();
            t[..r - k + 1].reverse();
            flat.extend_from_slice(&t);
        }
        flat.extend_from_slice(&self.flat);
        PermSimplex { arity: self.arity, flat }
    }

    /// Signature of `(w_0(1), ..., w_d(1))` when this is a permutation of
    /// `1..r`, and 0 otherwise.
    pub fn sgn(&self) -> i64 {
        if self.degree() + 1 != self.arity() {
            return 0;
        }
        let firsts: Vec<u8> = self.vertices().map(|v| v[0]).collect();
        if crate::perm::is_permutation(&firsts) {
            sign_of(&firsts)
        } else {
            0
        }
    }

    /// Cap product with `sgn`: `sgn(w_0..w_{r-1}) · (w_{r-1}, ..., w_d)`.
    pub fn cap_sgn(&self) -> Option<(i64, PermSimplex)> {
        let r = self.arity();
        if self.degree() < r - 1 {
            return None;
        }
        let s = self.slice(0, r - 1).sgn();
        (s != 0).then(|| (s, self.slice(r - 1, self.degree())))
    }

    pub fn is_identity_start(&self) -> bool {
        self.vertex(0).iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }
}

/// Vertexwise substitution `u_k ∘_e v_l` along a lattice path.
pub(crate) fn compose_vertices(u: &[u8], e: usize, v: &[u8], out: &mut Vec<u8>) {
    out.extend(substitute_values(u, e, v));
}

impl fmt::Display for PermSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.vertices().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            write!(f, "{}", Perm(v.to_vec()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PermSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variation_example() {
        let s = PermSimplex::parse("123|312|321").unwrap();
        assert_eq!(s.variation_count(1, 2), 1);
        assert!(s.in_en(2));
        assert_eq!(s.degree(), 2);
    }

    #[test]
    fn zero_simplex_has_no_variation() {
        let s = PermSimplex::parse("2413").unwrap();
        assert!(s.variation_counts().iter().all(|&c| c == 0));
        assert!(s.in_en(1));
    }

    #[test]
    fn rejects_degenerate() {
        assert!(PermSimplex::parse("12|12").is_err());
        assert!(PermSimplex::parse("12|3").is_err());
    }

    #[test]
    fn section_in_arity_two() {
        let s = PermSimplex::parse("12").unwrap();
        let t = s.section_t();
        assert_eq!(t, PermSimplex::parse("21|12").unwrap());
        assert_eq!(t.cap_sgn(), Some((-1, s)));
    }

    #[test]
    fn sgn_examples() {
        assert_eq!(PermSimplex::parse("1").unwrap().sgn(), 1);
        assert_eq!(PermSimplex::parse("12|21").unwrap().sgn(), 1);
        assert_eq!(PermSimplex::parse("21|12").unwrap().sgn(), -1);
    }
}
