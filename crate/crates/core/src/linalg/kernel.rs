//! Kernels of chain maps as chain complexes with explicit inclusions.

use num_bigint::BigInt;
use num_traits::Zero;

use super::complex::ChainComplex;
use super::matrix::IntMatrix;
use super::reduce::{kernel_basis, solve_integer, Solution};
use crate::error::{Error, Result};

/// A degreewise chain map `C -> C'`; `maps[k]` acts in degree `min_degree + k`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub min_degree: i64,
    pub maps: Vec<IntMatrix>,
}

impl ChainMap {
    pub fn at(&self, d: i64) -> Option<&IntMatrix> {
        let k = d - self.min_degree;
        (k >= 0).then(|| self.maps.get(k as usize)).flatten()
    }

    /// Checks `f δ = δ' f` in every degree; `None` entries are zero maps.
    pub fn check(&self, source: &ChainComplex, target: &ChainComplex) -> Result<()> {
        let lo = source.min_degree().min(self.min_degree);
        let hi = source.max_degree().max(self.min_degree + self.maps.len() as i64 - 1);
        for d in lo..=hi {
            let f_d = self.matrix(d, source, target);
            let f_dm1 = self.matrix(d - 1, source, target);
            let left = f_dm1.mul(&source.differential(d))?;
            let right = target.differential(d).mul(&f_d)?;
            if left != right {
                return Err(Error::NotAChainMap { degree: d });
            }
        }
        Ok(())
    }

    fn matrix(&self, d: i64, source: &ChainComplex, target: &ChainComplex) -> IntMatrix {
        self.at(d).cloned().unwrap_or_else(|| IntMatrix::zero(target.dim(d), source.dim(d)))
    }
}

/// `ker f` with its inclusion into the source.
#[derive(Clone, Debug)]
pub struct KernelComplex {
    pub complex: ChainComplex,
    pub inclusion: ChainMap,
}

/// Kernel of a chain map, with a saturated ℤ-basis in each degree.
pub fn subcomplex_kernel(source: &ChainComplex, target: &ChainComplex, f: &ChainMap) -> Result<KernelComplex> {
    f.check(source, target)?;
    let degrees: Vec<i64> = source.degrees().collect();
    let bases: Vec<IntMatrix> = degrees.iter().map(|&d| kernel_basis(&f.matrix(d, source, target))).collect();
    let mut diffs = Vec::with_capacity(degrees.len());
    for (k, &d) in degrees.iter().enumerate() {
        let b = &bases[k];
        if k == 0 {
            diffs.push(IntMatrix::zero(0, b.cols()));
            continue;
        }
        let below = &bases[k - 1];
        let image = source.differential(d).mul(b)?;
        let mut entries = Vec::new();
        for col in 0..b.cols() {
            let y: Vec<BigInt> = (0..image.rows()).map(|r| image.get(r, col)).collect();
            if y.iter().all(|v| v.is_zero()) {
                continue;
            }
            match solve_integer(below, &y)? {
                Solution::Solved(x) => {
                    entries.extend(x.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(r, v)| (r, col, v)))
                }
                Solution::Unsolvable { .. } => {
                    return Err(Error::Verification(format!("kernel not closed under δ in degree {}", d)))
                }
            }
        }
        diffs.push(IntMatrix::from_triplets(below.cols(), b.cols(), entries));
    }
    let complex = ChainComplex::new(source.min_degree(), bases.iter().map(|b| b.cols()).collect(), diffs)?;
    Ok(KernelComplex { complex, inclusion: ChainMap { min_degree: source.min_degree(), maps: bases } })
}
