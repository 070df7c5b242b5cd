//! The cobar construction `B^c(D) = (F(Σ^{-1} D̄), ∂)` of a dual cooperad,
//! one arity at a time.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::bar::{internal_part, twist_part};
use super::dual::CooperadTruncation;
use crate::error::{Error, Result};
use crate::linalg::{ChainComplex, HomologyReport, IntMatrix, Ring};
use crate::operad_core::{reduced_shapes, Operad, Tree};

/// Arity `r` of a cobar construction. The degree-`c` basis consists of the
/// canonical trees whose vertices carry desuspended dual basis elements,
/// `c = Σ_v (-|x_v| - 1)`.
#[derive(Clone, Debug)]
pub struct CobarComplex {
    arity: usize,
    min_degree: i64,
    basis: Vec<Vec<Tree>>,
    index: HashMap<Tree, (usize, usize)>,
    /// Out of each degree, in the layout of [`ChainComplex`].
    internal: Vec<IntMatrix>,
    twist: Vec<IntMatrix>,
    complex: ChainComplex,
}

/// Every canonical tree of arity `r` whose vertices are labeled by basis
/// elements of `op` in arities `>= 2`.
pub fn labeled_trees<O: Operad + ?Sized>(op: &O, r: usize) -> Vec<Tree> {
    labeled_trees_in(op, r, 1..r.max(2))
}

/// As [`labeled_trees`], restricted to vertex counts in `weights`.
pub fn labeled_trees_in<O: Operad + ?Sized>(op: &O, r: usize, weights: std::ops::Range<usize>) -> Vec<Tree> {
    let mut out = Vec::new();
    for m in weights {
        for shape in reduced_shapes(r, m) {
            let arities: Vec<usize> = shape.vertices().iter().map(|v| v.0).collect();
            let dims: Vec<u32> = arities.iter().map(|&k| op.dim(k) as u32).collect();
            if dims.contains(&0) {
                continue;
            }
            let mut labels = vec![0u32; arities.len()];
            loop {
                out.push(shape.with_labels(&labels));
                if !odometer(&mut labels, &dims) {
                    break;
                }
            }
        }
    }
    out
}

fn odometer(labels: &mut [u32], dims: &[u32]) -> bool {
    for k in (0..labels.len()).rev() {
        labels[k] += 1;
        if labels[k] < dims[k] {
            return true;
        }
        labels[k] = 0;
    }
    false
}

/// Cobar degree of a tree labeled by predual basis elements.
pub fn cobar_degree<O: Operad + ?Sized>(op: &O, t: &Tree) -> i64 {
    -t.total_degree(&|k, l| op.degree(k, l) + 1)
}

/// Assembles `B^c(D)(r)`. Fails if `∂² ≠ 0`.
pub fn cobar(d: &CooperadTruncation, r: usize) -> Result<CobarComplex> {
    let c = cobar_unchecked(d, r)?;
    c.complex.check_square_zero().map_err(|e| match e {
        Error::NotAComplex { degree } => {
            Error::Verification(format!("cobar differential squares to a nonzero map in arity {}, degree {}", r, degree))
        }
        other => other,
    })?;
    Ok(c)
}

/// As [`cobar`] without the `∂² = 0` check.
pub fn cobar_unchecked(d: &CooperadTruncation, r: usize) -> Result<CobarComplex> {
    let p = d.predual();
    if r < 2 || r > p.max_arity() {
        return Err(Error::Invalid(format!("arity {} outside 2..={}", r, p.max_arity())));
    }
    let trees = labeled_trees(p, r);
    let degs: Vec<i64> = trees.iter().map(|t| cobar_degree(p, t)).collect();
    let lo = *degs.iter().min().expect("nonempty");
    let hi = *degs.iter().max().expect("nonempty");
    let mut basis: Vec<Vec<Tree>> = vec![Vec::new(); (hi - lo + 1) as usize];
    let mut index: HashMap<Tree, (usize, usize)> = HashMap::with_capacity(trees.len());
    for (t, &c) in trees.into_iter().zip(&degs) {
        let k = (c - lo) as usize;
        index.insert(t.clone(), (k, basis[k].len()));
        basis[k].push(t);
    }
    // the cobar differential is the transpose of the bar differential: the
    // entry at (row T', column T) is the coefficient of T in d_B(T')
    let rows: Vec<(usize, usize, Vec<(Tree, i64)>, Vec<(Tree, i64)>)> = basis
        .iter()
        .enumerate()
        .flat_map(|(k, b)| (0..b.len()).map(move |i| (k, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, i)| {
            let t = &basis[k][i];
            (k, i, internal_part(p, t), twist_part(p, t))
        })
        .collect();
    let n = basis.len();
    let mut int_trip: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); n];
    let mut tw_trip: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); n];
    for (k, i, internal, twist) in rows {
        for (target, list) in [(&mut int_trip, internal), (&mut tw_trip, twist)] {
            for (t, c) in list {
                let &(kt, j) = index.get(&t).ok_or_else(|| Error::Verification(format!("tree {} is not in the basis", t)))?;
                // T' in cobar degree lo+k, T in degree lo+k+1
                if kt != k + 1 {
                    return Err(Error::Verification(format!("bar differential of {} changes degree wrongly", basis[k][i])));
                }
                target[kt].push((i, j, c));
            }
        }
    }
    let mk = |trip: Vec<Vec<(usize, usize, i64)>>| -> Vec<IntMatrix> {
        trip.into_iter()
            .enumerate()
            .map(|(k, t)| IntMatrix::from_triplets(if k == 0 { 0 } else { basis[k - 1].len() }, basis[k].len(), t))
            .collect()
    };
    let internal = mk(int_trip);
    let twist = mk(tw_trip);
    let mut total = Vec::with_capacity(n);
    for k in 0..n {
        let a = &internal[k];
        let b = &twist[k];
        let t: Vec<(usize, usize, num_bigint::BigInt)> =
            a.triplets().chain(b.triplets()).map(|(i, j, c)| (i, j, c.clone())).collect();
        total.push(IntMatrix::from_triplets(a.rows(), a.cols(), t));
    }
    let dims = basis.iter().map(Vec::len).collect();
    let labels = basis.iter().map(|b| b.iter().map(|t| t.to_string()).collect()).collect();
    let complex = ChainComplex::new_unchecked(lo, dims, total)?.with_labels(labels)?;
    Ok(CobarComplex { arity: r, min_degree: lo, basis, index, internal, twist, complex })
}

impl CobarComplex {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree..=self.min_degree + self.basis.len() as i64 - 1
    }

    pub fn basis(&self, c: i64) -> &[Tree] {
        let k = c - self.min_degree;
        if k < 0 || k as usize >= self.basis.len() {
            return &[];
        }
        &self.basis[k as usize]
    }

    /// Position of a basis tree, as `(degree, index)`.
    pub fn find(&self, t: &Tree) -> Option<(i64, usize)> {
        self.index.get(t).map(|&(k, i)| (self.min_degree + k as i64, i))
    }

    fn block(&self, list: &[IntMatrix], c: i64) -> IntMatrix {
        let k = c - self.min_degree;
        if k < 0 || k as usize >= list.len() {
            return IntMatrix::zero(self.basis(c - 1).len(), self.basis(c).len());
        }
        list[k as usize].clone()
    }

    /// The part of `∂` out of degree `c` induced by the internal differential.
    pub fn internal(&self, c: i64) -> IntMatrix {
        self.block(&self.internal, c)
    }

    /// The part of `∂` out of degree `c` induced by the cocomposition.
    pub fn twist(&self, c: i64) -> IntMatrix {
        self.block(&self.twist, c)
    }

    pub fn homology(&self, ring: Ring) -> HomologyReport {
        self.complex.homology(ring)
    }

    /// Checks that the internal part preserves the vertex count, the twisting
    /// part raises it by one, and no tree has more than `r - 1` vertices.
    pub fn check_weights(&self) -> Result<()> {
        for c in self.degrees() {
            let (src, dst) = (self.basis(c), self.basis(c - 1));
            if src.iter().any(|t| t.vertex_count() + 1 > self.arity) {
                return Err(Error::Verification(format!("a tree in degree {} has too many vertices", c)));
            }
            for (i, j, _) in self.internal(c).triplets() {
                if dst[i].vertex_count() != src[j].vertex_count() {
                    return Err(Error::Verification(format!("internal part changes the weight in degree {}", c)));
                }
            }
            for (i, j, _) in self.twist(c).triplets() {
                if dst[i].vertex_count() != src[j].vertex_count() + 1 {
                    return Err(Error::Verification(format!("twisting part does not raise the weight by one in degree {}", c)));
                }
            }
        }
        Ok(())
    }

    /// When the internal differential vanishes, the complex splits by the
    /// total predual degree `S = Σ_v |x_v|`; the weight in piece `S` and
    /// degree `c` is `-S - c`. Returns the pieces keyed by `S`.
    pub fn split_by_internal_degree<O: Operad + ?Sized>(&self, op: &O) -> Result<BTreeMap<i64, WeightPiece>> {
        if self.internal.iter().any(|m| !m.is_zero()) {
            return Err(Error::Invalid("the internal differential is not zero".into()));
        }
        // S for every basis tree, and the position inside its piece
        let mut pieces: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
        let nd = self.basis.len();
        let mut slot: Vec<Vec<(i64, usize)>> = Vec::with_capacity(nd);
        for (k, b) in self.basis.iter().enumerate() {
            let mut row = Vec::with_capacity(b.len());
            for (i, t) in b.iter().enumerate() {
                let s = t.total_degree(&|a, l| op.degree(a, l));
                let lists = pieces.entry(s).or_insert_with(|| vec![Vec::new(); nd]);
                row.push((s, lists[k].len()));
                lists[k].push(i);
            }
            slot.push(row);
        }
        let mut out = BTreeMap::new();
        for (s, lists) in pieces {
            let dims: Vec<usize> = lists.iter().map(Vec::len).collect();
            let mut diffs = Vec::with_capacity(nd);
            for k in 0..nd {
                let rows = if k == 0 { 0 } else { dims[k - 1] };
                let trip: Vec<(usize, usize, num_bigint::BigInt)> = self.twist[k]
                    .triplets()
                    .filter(|(_, j, _)| slot[k][*j].0 == s)
                    .map(|(i, j, c)| {
                        debug_assert_eq!(slot[k - 1][i].0, s);
                        (slot[k - 1][i].1, slot[k][j].1, c.clone())
                    })
                    .collect();
                diffs.push(IntMatrix::from_triplets(rows, dims[k], trip));
            }
            let complex = ChainComplex::new_unchecked(self.min_degree, dims, diffs)?;
            out.insert(s, WeightPiece { internal_degree: s, complex });
        }
        Ok(out)
    }
}

/// The summand of a cobar complex with fixed total predual degree.
#[derive(Clone, Debug)]
pub struct WeightPiece {
    pub internal_degree: i64,
    pub complex: ChainComplex,
}

impl WeightPiece {
    /// Vertex count of every tree in degree `c`.
    pub fn weight(&self, c: i64) -> i64 {
        -self.internal_degree - c
    }
}
