//! Dual cooperads of degreewise-finite operads.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{ChainComplex, IntMatrix};
use crate::operad_core::{evaluate_tree, two_vertex_sets, two_vertex_slot, two_vertex_tree, GradedOperadTruncation, Operad};
use crate::perm::Perm;

/// `D = P^∨`, stored through its predual `P`: the dual basis element `x^∨`
/// has degree `-|x|`, and every structure map is a transpose.
#[derive(Clone, Debug)]
pub struct CooperadTruncation {
    predual: GradedOperadTruncation,
}

/// Dualizes an operad truncation. The components must be connected.
pub fn dualize(p: GradedOperadTruncation) -> Result<CooperadTruncation> {
    if p.max_arity() >= 1 && p.dim(1) != 1 {
        return Err(Error::Invalid("arity 1 must have rank one".into()));
    }
    if p.max_arity() >= 1 && p.degree(1, 0) != 0 {
        return Err(Error::Invalid("the unit must sit in degree 0".into()));
    }
    Ok(CooperadTruncation { predual: p })
}

impl CooperadTruncation {
    pub fn max_arity(&self) -> usize {
        self.predual.max_arity()
    }

    pub fn dim(&self, r: usize) -> usize {
        self.predual.dim(r)
    }

    /// Degree of `x_i^∨`.
    pub fn degree(&self, r: usize, i: u32) -> i64 {
        -self.predual.degree(r, i)
    }

    /// The operad whose dual this is.
    pub fn predual(&self) -> &GradedOperadTruncation {
        &self.predual
    }

    /// Ranks of `D(r)` per degree.
    pub fn graded_dims(&self, r: usize) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for i in 0..self.dim(r) as u32 {
            *out.entry(self.degree(r, i)).or_insert(0) += 1;
        }
        out
    }

    /// `D(r)` as a chain complex, `(δ x^∨)(y) = x^∨(d y)`, with labels
    /// `x^∨` in the order of the predual basis.
    pub fn component_complex(&self, r: usize) -> Result<ChainComplex> {
        let p = &self.predual;
        let dim = p.dim(r) as u32;
        if dim == 0 {
            return Ok(ChainComplex::zero());
        }
        let degs: Vec<i64> = (0..dim).map(|i| self.degree(r, i)).collect();
        let lo = *degs.iter().min().unwrap();
        let hi = *degs.iter().max().unwrap();
        let mut pos = vec![0usize; dim as usize];
        let mut sizes = vec![0usize; (hi - lo + 1) as usize];
        let mut labels = vec![Vec::new(); sizes.len()];
        for i in 0..dim {
            let k = (degs[i as usize] - lo) as usize;
            pos[i as usize] = sizes[k];
            sizes[k] += 1;
            labels[k].push(format!("{}^", p.label(r, i)));
        }
        let mut trip: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); sizes.len()];
        for y in 0..dim {
            // d y has predual degree |y| - 1, i.e. dual degree one higher
            for (x, c) in p.differential(r, y) {
                let k = (degs[x as usize] - lo) as usize;
                trip[k].push((pos[y as usize], pos[x as usize], c));
            }
        }
        let diffs = trip
            .into_iter()
            .enumerate()
            .map(|(k, t)| {
                let rows = if k == 0 { 0 } else { sizes[k - 1] };
                IntMatrix::from_triplets(rows, sizes[k], t)
            })
            .collect();
        ChainComplex::new(lo, sizes, diffs)?.with_labels(labels)
    }

    /// The action on `D(r)`, `(w·f)(x) = f(w^{-1}·x)`, as a matrix on the
    /// dual basis.
    pub fn act_matrix(&self, r: usize, w: &Perm) -> IntMatrix {
        let dim = self.dim(r);
        let winv = w.inverse();
        let mut t = Vec::new();
        for x in 0..dim as u32 {
            // (w·y^∨)(x) = y^∨(w^{-1} x)
            for (y, c) in self.predual.act(r, &winv, x) {
                t.push((x as usize, y as usize, c));
            }
        }
        IntMatrix::from_triplets(dim, dim, t)
    }

    /// The quadratic cocomposition at the canonical two-vertex tree with inner
    /// leaf set `inner`, as a matrix `D(r) -> D(s) ⊗ D(t)`: the row of
    /// `u^∨ ⊗ v^∨` is `u * dim(t) + v`.
    pub fn rho2(&self, r: usize, inner: &[u8]) -> Result<IntMatrix> {
        let p = &self.predual;
        let t = inner.len();
        if t < 2 || t >= r || r > p.max_arity() {
            return Err(Error::Invalid(format!("no two-vertex tree with inner leaves {:?} in arity {}", inner, r)));
        }
        let s = r - t + 1;
        let (ds, dt) = (p.dim(s), p.dim(t));
        let mut trip = Vec::new();
        for u in 0..ds as u32 {
            for v in 0..dt as u32 {
                for (x, c) in evaluate_tree(p, &two_vertex_tree(r, inner, u, v))? {
                    trip.push((u as usize * dt + v as usize, x as usize, c));
                }
            }
        }
        Ok(IntMatrix::from_triplets(ds * dt, p.dim(r), trip))
    }

    /// All quadratic cocomposition components of arity `r`, keyed by the
    /// inner leaf set and slot.
    pub fn rho2_components(&self, r: usize) -> Result<Vec<(Vec<u8>, usize, IntMatrix)>> {
        two_vertex_sets(r).into_iter().map(|set| Ok((set.clone(), two_vertex_slot(&set, r), self.rho2(r, &set)?))).collect()
    }
}

/// `D_n = Λ^{-n} E_n^∨` up to arity `max_arity`.
pub fn en_dual(n: usize, max_arity: usize) -> Result<CooperadTruncation> {
    let en = crate::operad_core::EnOperad::new(n, max_arity)?;
    let lambda = crate::operad_core::Suspended::new(&en, n as i64);
    dualize(GradedOperadTruncation::from_operad(&lambda, max_arity))
}

/// `Λ^{-k} P^∨` for a presented operad `P`.
pub fn presented_dual(p: &crate::operad_core::Presentation, k: i64, max_arity: usize) -> Result<CooperadTruncation> {
    let q = p.quotient(max_arity)?.truncation()?;
    dualize(crate::operad_core::operadic_suspension(&q, k))
}
