//! The edge morphism `B^c(H) -> H_*(B^c(D))` of the weight spectral
//! sequence, for a cooperad `H` with zero differential playing the role of
//! `H_*(D)`.

use super::complex::{cobar, CobarComplex};
use super::dual::CooperadTruncation;
use super::sigma::map_labels;
use crate::error::{Error, Result};
use crate::linalg::{rank_torsion, ChainComplex, IntMatrix, Ring};
use crate::operad_core::Operad;

/// Comparison in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDegree {
    pub degree: i64,
    pub source_betti: usize,
    pub target_betti: usize,
    /// Boundaries of `B^c(H)` land in boundaries of `B^c(D)`.
    pub well_defined: bool,
    /// Image plus boundaries is the whole cycle lattice.
    pub surjective: bool,
}

/// The edge morphism in one arity.
#[derive(Clone, Debug)]
pub struct EdgeReport {
    pub arity: usize,
    pub source: CobarComplex,
    pub target: CobarComplex,
    /// Chain-level images of the top-weight trees, per degree of the source.
    pub images: Vec<(i64, IntMatrix)>,
    pub degrees: Vec<EdgeDegree>,
    pub torsion_free: bool,
}

impl EdgeReport {
    /// Isomorphism on homology in every degree.
    pub fn is_quasi_isomorphism(&self) -> bool {
        self.torsion_free
            && self.degrees.iter().all(|d| d.well_defined && d.surjective && d.source_betti == d.target_betti)
    }
}

fn rank(m: &IntMatrix) -> (usize, bool) {
    let rt = rank_torsion(m);
    (rt.rank, rt.torsion.is_empty())
}

/// The edge morphism determined by `generators`: column `j` is a cocycle of
/// `D(2)`, in the predual basis, representing the `j`-th basis element of
/// `H(2)`. Generators of higher arity go to zero, so only trees with `r - 1`
/// binary vertices have nonzero images.
pub fn edge_morphism(h: &CooperadTruncation, d: &CooperadTruncation, generators: &IntMatrix, r: usize) -> Result<EdgeReport> {
    if generators.rows() != d.dim(2) || generators.cols() != h.dim(2) {
        return Err(Error::Dimension("the generator matrix must be dim D(2) x dim H(2)".into()));
    }
    if h.predual().components()[2..].iter().any(|c| c.differential.iter().any(|v| !v.is_empty())) {
        return Err(Error::Invalid("H must have zero differential".into()));
    }
    for j in 0..generators.cols() {
        // δ of the representative vanishes: evaluate on the differential
        let col: Vec<(usize, i64)> = (0..generators.rows())
            .filter_map(|i| {
                let v = generators.get(i, j);
                (v != 0.into()).then(|| (i, i64::try_from(&v).expect("small")))
            })
            .collect();
        for y in 0..d.dim(2) as u32 {
            let s: i64 = d
                .predual()
                .differential(2, y)
                .iter()
                .map(|&(x, c)| c * col.iter().find(|(i, _)| *i == x as usize).map_or(0, |(_, v)| *v))
                .sum();
            if s != 0 {
                return Err(Error::Verification(format!("generator {} is not a cocycle", j)));
            }
        }
    }
    let source = cobar(h, r)?;
    let target = cobar(d, r)?;
    let gen_cols: Vec<Vec<(u32, i64)>> = (0..generators.cols())
        .map(|j| {
            (0..generators.rows())
                .filter_map(|i| {
                    let v = generators.get(i, j);
                    (v != 0.into()).then(|| (i as u32, i64::try_from(&v).expect("small")))
                })
                .collect()
        })
        .collect();
    let mut images = Vec::new();
    let mut degrees = Vec::new();
    let sh = source.homology(Ring::Z);
    let th = target.homology(Ring::Z);
    let torsion_free = sh.is_torsion_free() && th.is_torsion_free();
    let lo = (*source.degrees().start()).min(*target.degrees().start());
    let hi = (*source.degrees().end()).max(*target.degrees().end());
    for c in lo..=hi {
        let mut trip = Vec::new();
        for (j, t) in source.basis(c).iter().enumerate() {
            if t.vertex_count() + 1 != r {
                continue;
            }
            for (u, coef) in map_labels(t, &|k, l| if k == 2 { gen_cols[l as usize].clone() } else { Vec::new() }) {
                let (dc, i) = target.find(&u).ok_or_else(|| Error::Verification(format!("image of {} is not a basis tree", t)))?;
                if dc != c {
                    return Err(Error::Verification(format!("edge morphism changes the degree of {}", t)));
                }
                trip.push((i, j, coef));
            }
        }
        let f = IntMatrix::from_triplets(target.basis(c).len(), source.basis(c).len(), trip);
        let td = target.complex().differential(c);
        if !td.mul(&f)?.is_zero() {
            return Err(Error::Verification(format!("edge images are not cycles in degree {}", c)));
        }
        let boundaries = target.complex().differential(c + 1);
        let (rb, _) = rank(&boundaries);
        let pushed = f.mul(&source.complex().differential(c + 1))?;
        let (rp, _) = rank(&boundaries.hstack(&pushed));
        let (rs, saturated) = rank(&boundaries.hstack(&f));
        let cycles = target.basis(c).len() - rank(&td).0;
        degrees.push(EdgeDegree {
            degree: c,
            source_betti: sh.betti(c),
            target_betti: th.betti(c),
            well_defined: rp == rb,
            surjective: rs == cycles && saturated,
        });
        images.push((c, f));
    }
    Ok(EdgeReport { arity: r, source, target, images, degrees, torsion_free })
}

/// `H_*(D)` as a chain complex with zero differential has the same ranks
/// as `D`'s homology; used to sanity-check a supplied `H` in arity `r`.
pub fn homology_ranks_match(h: &CooperadTruncation, d: &CooperadTruncation, r: usize) -> Result<bool> {
    let dh = d.component_complex(r)?.homology(Ring::Z);
    let hc: ChainComplex = h.component_complex(r)?;
    let hh = hc.homology(Ring::Z);
    let lo = hc.min_degree().min(d.component_complex(r)?.min_degree());
    let hi = hc.max_degree().max(d.component_complex(r)?.max_degree());
    Ok((lo..=hi).all(|c| dh.betti(c) == hh.betti(c)) && dh.is_torsion_free())
}

/// The arity-2 embedding `Λ^{-n}G_n^∨(2) -> Λ^{-n}E_n^∨(2)` sending the dual
/// of the product to `μ_0^∨ + (τμ_0)^∨` and the dual of the bracket to
/// `μ_{n-1}^∨`, for `h` built from the Gerstenhaber presentation.
pub fn gerstenhaber_generators(n: usize, h: &CooperadTruncation) -> Result<IntMatrix> {
    use crate::barratt_eccles::{mu, tau_mu};
    if n < 2 {
        return Err(Error::Invalid("the bracket needs n >= 2".into()));
    }
    let en = crate::operad_core::EnOperad::new(n, 2)?;
    let idx = |s| en.index(&s).expect("μ_d lies in E_n(2) for d < n") as usize;
    let mut trip = Vec::new();
    for j in 0..h.dim(2) as u32 {
        // the product sits in the lowest predual degree -n
        if h.predual().degree(2, j) == -(n as i64) {
            trip.push((idx(mu(0)), j as usize, 1i64));
            trip.push((idx(tau_mu(0)), j as usize, 1));
        } else {
            trip.push((idx(mu(n - 1)), j as usize, 1));
        }
    }
    Ok(IntMatrix::from_triplets(en.dim(2), h.dim(2), trip))
}
