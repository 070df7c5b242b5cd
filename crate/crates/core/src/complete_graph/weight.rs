use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::barratt_eccles::PermSimplex;
use crate::error::{Error, Result};
use crate::perm::{pair_index, pairs, Perm};

/// An oriented weight system `κ = (μ, σ)` on the complete graph with
/// vertices `1..r`. Weights are stored in [`pairs`] order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSystem {
    mu: Vec<i64>,
    sigma: Perm,
}

impl WeightSystem {
    pub fn new(mu: Vec<i64>, sigma: Perm) -> Result<WeightSystem> {
        let r = sigma.arity();
        if mu.len() != r * (r - 1) / 2 {
            return Err(Error::Dimension(format!("{} weights for arity {}", mu.len(), r)));
        }
        Ok(WeightSystem { mu, sigma })
    }

    /// `κ(s) = (μ(s), w_d)` for a simplex `s = (w_0, ..., w_d)`.
    pub fn of_simplex(s: &PermSimplex) -> WeightSystem {
        let mu = s.variation_counts().into_iter().map(|c| c as i64).collect();
        WeightSystem { mu, sigma: Perm(s.last().to_vec()) }
    }

    /// Unit of the operad, in arity 1.
    pub fn unit() -> WeightSystem {
        WeightSystem { mu: Vec::new(), sigma: Perm::identity(1) }
    }

    pub fn arity(&self) -> usize {
        self.sigma.arity()
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    pub fn weights(&self) -> &[i64] {
        &self.mu
    }

    pub fn weight(&self, i: u8, j: u8) -> i64 {
        self.mu[pair_index(self.arity(), i, j)]
    }

    /// All weights nonnegative.
    pub fn is_valid(&self) -> bool {
        self.mu.iter().all(|&w| w >= 0)
    }

    /// Membership in `K_n`: `0 <= μ_ij < n`.
    pub fn in_kn(&self, n: usize) -> bool {
        self.mu.iter().all(|&w| w >= 0 && (w as usize) < n)
    }

    /// `deg(μ, σ) = Σ μ_ij`.
    pub fn total_degree(&self) -> i64 {
        self.mu.iter().sum()
    }

    /// The partial order: for every pair, `μ_ij < ν_ij` or the weights and
    /// restricted orientations agree.
    pub fn leq(&self, other: &WeightSystem) -> Result<bool> {
        if self.arity() != other.arity() {
            return Err(Error::Dimension(format!("arities {} and {}", self.arity(), other.arity())));
        }
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &WeightSystem) -> bool {
        let r = self.arity();
        pairs(r).into_iter().enumerate().all(|(k, (i, j))| {
            let (a, b) = (self.mu[k], other.mu[k]);
            a < b || (a == b && self.sigma.restrict(i, j) == other.sigma.restrict(i, j))
        })
    }

    /// Strict order `α ⪇ β`.
    pub fn lt(&self, other: &WeightSystem) -> bool {
        self != other && self.leq_unchecked(other)
    }

    /// Partial composite `α ∘_e β`.
    pub fn compose(&self, e: usize, other: &WeightSystem) -> Result<WeightSystem> {
        let (s, t) = (self.arity(), other.arity());
        if e == 0 || e > s {
            return Err(Error::Invalid(format!("slot {} out of range for arity {}", e, s)));
        }
        let r = s + t - 1;
        // vertex of α (or None inside the block) for each vertex of the composite
        let source = |a: usize| -> Option<usize> {
            if a < e {
                Some(a)
            } else if a < e + t {
                None
            } else {
                Some(a - t + 1)
            }
        };
        let mut mu = Vec::with_capacity(r * (r - 1) / 2);
        for (i, j) in pairs(r) {
            let (i, j) = (i as usize, j as usize);
            let w = match (source(i), source(j)) {
                (None, None) => other.weight((i - e + 1) as u8, (j - e + 1) as u8),
                (a, b) => self.weight(a.unwrap_or(e) as u8, b.unwrap_or(e) as u8),
            };
            mu.push(w);
        }
        Ok(WeightSystem { mu, sigma: self.sigma.substitute(e, &other.sigma) })
    }

    /// `wκ = (wμ, w∘σ)` with `wμ_ij = μ_{w^{-1}(i) w^{-1}(j)}`.
    pub fn act(&self, w: &Perm) -> Result<WeightSystem> {
        let r = self.arity();
        if w.arity() != r {
            return Err(Error::Dimension(format!("permutation of arity {} on K({})", w.arity(), r)));
        }
        let inv = w.inverse();
        let mu = pairs(r).into_iter().map(|(i, j)| self.weight(inv.at(i as usize), inv.at(j as usize))).collect();
        Ok(WeightSystem { mu, sigma: w.compose(&self.sigma) })
    }

    /// `κ^∨ = (n - 1 - μ, σ)`; weights may become negative.
    pub fn complement(&self, n: usize) -> WeightSystem {
        let mu = self.mu.iter().map(|&w| n as i64 - 1 - w).collect();
        WeightSystem { mu, sigma: self.sigma.clone() }
    }

    /// Maximal weight plus one: the least `n` with `κ ∈ K_n` (for valid κ).
    pub fn level(&self) -> usize {
        self.mu.iter().copied().max().map_or(1, |m| (m.max(0) + 1) as usize)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// All of `K_n(r)`, ordered by weights then orientation.
pub fn enumerate_kn(n: usize, r: usize) -> Vec<WeightSystem> {
    assert!(n >= 1 && r >= 1);
    let m = r * (r - 1) / 2;
    let perms = Perm::all(r);
    let mut out = Vec::new();
    let mut mu = vec![0i64; m];
    loop {
        for s in &perms {
            out.push(WeightSystem { mu: mu.clone(), sigma: s.clone() });
        }
        // odometer increment
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            mu[k] += 1;
            if (mu[k] as usize) < n {
                break;
            }
            mu[k] = 0;
        }
    }
}

/// Compares weight systems by the poset order, `None` when incomparable.
pub fn poset_cmp(a: &WeightSystem, b: &WeightSystem) -> Option<Ordering> {
    match (a.leq_unchecked(b), b.leq_unchecked(a)) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    }
}

/// Covering relations of `K_n(r)` as index pairs, for external graph tools.
pub fn hasse_edges(elements: &[WeightSystem]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (a, x) in elements.iter().enumerate() {
        for (b, y) in elements.iter().enumerate() {
            if !x.lt(y) {
                continue;
            }
            let covered = !elements.iter().any(|z| x.lt(z) && z.lt(y));
            if covered {
                edges.push((a, b));
            }
        }
    }
    edges
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    r: usize,
    mu: Vec<(u8, u8, i64)>,
    sigma: Vec<u8>,
}

impl Serialize for WeightSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.arity();
        let mu = pairs(r).into_iter().zip(&self.mu).map(|((i, j), &w)| (i, j, w)).collect();
        WeightJson { r, mu, sigma: self.sigma.0.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = WeightJson::deserialize(d)?;
        if j.sigma.len() != j.r || !crate::perm::is_permutation(&j.sigma) {
            return Err(D::Error::custom("sigma is not a permutation of 1..r"));
        }
        let m = j.r * (j.r - 1) / 2;
        let mut mu = vec![None; m];
        for (i, k, w) in j.mu {
            if i == k || i as usize > j.r || k as usize > j.r || i == 0 || k == 0 {
                return Err(D::Error::custom(format!("bad pair ({}, {})", i, k)));
            }
            mu[pair_index(j.r, i, k)] = Some(w);
        }
        let mu: Option<Vec<i64>> = mu.into_iter().collect();
        let mu = mu.ok_or_else(|| D::Error::custom("missing weights"))?;
        Ok(WeightSystem { mu, sigma: Perm(j.sigma) })
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, w) in self.mu.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", w)?;
        }
        write!(f, "; {})", self.sigma)
    }
}

impl fmt::Debug for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(r: usize, edges: &[(u8, u8, i64)], sigma: &[u8]) -> WeightSystem {
        let mut mu = vec![0; r * (r - 1) / 2];
        for &(i, j, w) in edges {
            mu[pair_index(r, i, j)] = w;
        }
        WeightSystem::new(mu, Perm::new(sigma.to_vec())).unwrap()
    }

    #[test]
    fn figure_composite() {
        let alpha = ws(3, &[(1, 2, 1), (1, 3, 2), (2, 3, 0)], &[1, 3, 2]);
        let beta = ws(2, &[(1, 2, 0)], &[2, 1]);
        let c = alpha.compose(2, &beta).unwrap();
        let expected = ws(4, &[(1, 4, 2), (1, 2, 1), (1, 3, 1), (2, 4, 0), (3, 4, 0), (2, 3, 0)], &[1, 4, 3, 2]);
        assert_eq!(c, expected);
        assert_eq!(c.sigma().restrict(2, 4), [4, 2]);
        assert_eq!(c.sigma().restrict(2, 3), [3, 2]);
    }

    #[test]
    fn order_examples() {
        let a = ws(3, &[(1, 2, 0), (1, 3, 1), (2, 3, 0)], &[1, 2, 3]);
        assert!(a.leq(&a).unwrap());
        let bigger = ws(3, &[(1, 2, 1), (1, 3, 2), (2, 3, 1)], &[3, 2, 1]);
        assert!(a.leq(&bigger).unwrap());
        let flipped = ws(3, &[(1, 2, 0), (1, 3, 1), (2, 3, 0)], &[2, 1, 3]);
        assert!(!a.leq(&flipped).unwrap());
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_kn(1, 3).len(), 6);
        assert_eq!(enumerate_kn(2, 3).len(), 48);
        for (n, r) in [(2usize, 2usize), (3, 3), (2, 4)] {
            let expected = n.pow((r * (r - 1) / 2) as u32) * (1..=r).product::<usize>();
            assert_eq!(enumerate_kn(n, r).len(), expected);
        }
    }

    #[test]
    fn json_roundtrip() {
        let a = ws(3, &[(1, 2, 0), (1, 3, -1), (2, 3, 2)], &[3, 1, 2]);
        let v = a.to_json();
        assert_eq!(v["sigma"], serde_json::json!([3, 1, 2]));
        let back: WeightSystem = serde_json::from_value(v).unwrap();
        assert_eq!(back, a);
        assert!(!back.is_valid());
    }
}
