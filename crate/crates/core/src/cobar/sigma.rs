//! `σ^*: B^c(Λ^{1-n}E_{n-1}^∨) -> B^c(Λ^{-n}E_n^∨)`, the map induced by the
//! suspension morphism, with its vertexwise retraction `τ^*`.

use std::collections::HashMap;

use super::complex::{cobar, CobarComplex};
use super::dual::{en_dual, CooperadTruncation};
use crate::barratt_eccles::PermSimplex;
use crate::error::{Error, Result};
use crate::linalg::{ChainMap, IntMatrix};
use crate::operad_core::{EnOperad, Operad, Tree};

/// Vertexwise data: `sigma[k][t]` lists `(s, c)` with `σ^*(t^∨) = Σ c s^∨`,
/// and `tau[k][s]` lists `(t, c)` with `τ^*(s^∨) = Σ c t^∨`.
#[derive(Clone, Debug)]
pub struct VertexMaps {
    pub sigma: Vec<Vec<Vec<(u32, i64)>>>,
    pub tau: Vec<Vec<Vec<(u32, i64)>>>,
}

/// The suspension morphism and its section on basis simplices, in the
/// indexing of [`EnOperad`] for levels `n` and `n - 1`.
pub fn vertex_maps(n: usize, max_arity: usize) -> Result<VertexMaps> {
    if n < 2 {
        return Err(Error::Invalid("σ^* needs n >= 2".into()));
    }
    let hi = EnOperad::new(n, max_arity)?;
    let lo = EnOperad::new(n - 1, max_arity)?;
    let mut sigma = vec![Vec::new(); max_arity + 1];
    let mut tau = vec![Vec::new(); max_arity + 1];
    for k in 1..=max_arity {
        sigma[k] = vec![Vec::new(); lo.dim(k)];
        tau[k] = vec![Vec::new(); hi.dim(k)];
        for s in 0..hi.dim(k) as u32 {
            if let Some((c, t)) = signed_cap(hi.element(k, s)) {
                let ti = lo.index(&t).ok_or_else(|| Error::Verification(format!("σ({}) leaves E_{}", t, n - 1)))?;
                sigma[k][ti as usize].push((s, c));
            }
        }
        for t in 0..lo.dim(k) as u32 {
            let x = lo.element(k, t);
            let sx = x.section_t();
            let (c, back) = signed_cap(&sx).expect("the section has a nonzero cap");
            debug_assert_eq!(&back, x);
            let si = hi.index(&sx).ok_or_else(|| Error::Verification(format!("the section of {} leaves E_{}", x, n)))?;
            // τ̃(t) = c · section(t) makes σ̃ τ̃ = id
            tau[k][si as usize].push((t, c));
        }
    }
    Ok(VertexMaps { sigma, tau })
}

/// `σ̃(s) = (-1)^{(r-1)|s|} sgn ∩ s`, as a signed simplex.
fn signed_cap(s: &PermSimplex) -> Option<(i64, PermSimplex)> {
    let (c, t) = s.cap_sgn()?;
    let flip = (s.arity() - 1) * s.degree() % 2 == 1;
    Some((if flip { -c } else { c }, t))
}

impl VertexMaps {
    /// `τ^* σ^* = id` on every `D_{n-1}(k)`.
    pub fn check_retraction(&self) -> Result<()> {
        for k in 1..self.sigma.len() {
            for (t, image) in self.sigma[k].iter().enumerate() {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                for &(s, c) in image {
                    for &(t2, d) in &self.tau[k][s as usize] {
                        *acc.entry(t2).or_insert(0) += c * d;
                    }
                }
                acc.retain(|_, v| *v != 0);
                if acc.len() != 1 || acc.get(&(t as u32)) != Some(&1) {
                    return Err(Error::Verification(format!("τ^*σ^* ≠ id on basis element {} of arity {}", t, k)));
                }
            }
        }
        Ok(())
    }
}

/// `σ^*` on one arity of the cobar constructions.
#[derive(Clone, Debug)]
pub struct SigmaStar {
    pub source: CobarComplex,
    pub target: CobarComplex,
    pub map: ChainMap,
    pub vertex: VertexMaps,
}

/// Applies a vertexwise map to a labeled tree; the map has degree 0, so no
/// Koszul signs arise.
pub fn map_labels(t: &Tree, f: &dyn Fn(usize, u32) -> Vec<(u32, i64)>) -> Vec<(Tree, i64)> {
    let verts = t.vertices();
    let mut out: Vec<(Vec<u32>, i64)> = vec![(Vec::new(), 1)];
    for &(k, l) in &verts {
        let image = f(k, l);
        let mut next = Vec::with_capacity(out.len() * image.len());
        for (labels, c) in &out {
            for &(m, d) in &image {
                let mut ls = labels.clone();
                ls.push(m);
                next.push((ls, c * d));
            }
        }
        out = next;
    }
    out.into_iter().map(|(ls, c)| (t.with_labels(&ls), c)).collect()
}

/// Builds `σ^*` in arity `r`, checks that it commutes with the internal and
/// twisting parts of the differential and that `τ^*` retracts it.
pub fn sigma_star(n: usize, r: usize) -> Result<SigmaStar> {
    let vertex = vertex_maps(n, r)?;
    vertex.check_retraction()?;
    let src_d: CooperadTruncation = en_dual(n - 1, r)?;
    let dst_d: CooperadTruncation = en_dual(n, r)?;
    let source = cobar(&src_d, r)?;
    let target = cobar(&dst_d, r)?;
    let mut maps = Vec::new();
    let lo = *source.degrees().start();
    for c in source.degrees() {
        let mut trip = Vec::new();
        for (j, t) in source.basis(c).iter().enumerate() {
            for (u, coef) in map_labels(t, &|k, l| vertex.sigma[k][l as usize].clone()) {
                let (dc, i) = target.find(&u).ok_or_else(|| Error::Verification(format!("σ^* of {} leaves the basis", t)))?;
                if dc != c {
                    return Err(Error::Verification(format!("σ^* changes the degree of {}", t)));
                }
                trip.push((i, j, coef));
            }
        }
        maps.push(IntMatrix::from_triplets(target.basis(c).len(), source.basis(c).len(), trip));
    }
    let map = ChainMap { min_degree: lo, maps };
    for c in source.degrees() {
        let f = map.at(c).unwrap();
        let f1 = map.at(c - 1).cloned().unwrap_or_else(|| IntMatrix::zero(target.basis(c - 1).len(), source.basis(c - 1).len()));
        for (name, sd, td) in [
            ("internal", source.internal(c), target.internal(c)),
            ("twisting", source.twist(c), target.twist(c)),
        ] {
            if f1.mul(&sd)? != td.mul(f)? {
                return Err(Error::Verification(format!("σ^* does not commute with the {} differential in degree {}", name, c)));
            }
        }
    }
    Ok(SigmaStar { source, target, map, vertex })
}
