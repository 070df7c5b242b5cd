//! Rank, invariant factors, integer solving and kernels on top of the sparse
//! eliminator. Every routine runs in `i64` first and restarts in `BigInt`
//! when an intermediate value overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::coeff::{Coeff, Mp, Overflow};
use super::elim::{Elimination, Row};
use super::matrix::IntMatrix;
use super::snf::{invariant_factors, Dense};
use crate::error::{Error, Result};

/// Rank and the nonzero invariant factors different from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTorsion {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

fn rank_torsion_with<T: Coeff>(rows: Vec<Row<T>>, ncols: usize) -> std::result::Result<RankTorsion, Overflow> {
    let mut e = Elimination::new(rows, ncols, None, false);
    e.run()?;
    let (_, cols, block) = e.residual();
    let mut rank = e.pivots.len();
    let mut torsion = Vec::new();
    if !block.is_empty() {
        let dense = block
            .iter()
            .map(|row| {
                let mut d = vec![BigInt::zero(); cols.len()];
                for (c, v) in row {
                    d[*c] = v.to_big();
                }
                d
            })
            .collect();
        for f in invariant_factors(dense, cols.len()) {
            rank += 1;
            if !f.is_one() {
                torsion.push(f);
            }
        }
    }
    Ok(RankTorsion { rank, torsion })
}

/// Rank over ℤ together with torsion coefficients of the cokernel.
pub fn rank_torsion(m: &IntMatrix) -> RankTorsion {
    if let Some(rows) = m.to_i64_rows() {
        if let Ok(rt) = rank_torsion_with(rows, m.cols()) {
            return rt;
        }
    }
    rank_torsion_with(m.to_big_rows(), m.cols()).unwrap_or_else(|_| unreachable!("BigInt cannot overflow"))
}

/// Rank over the prime field `F_p`.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let rows: Vec<Row<Mp>> = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .filter_map(|(c, v)| {
                    let x = v.mod_floor(&pb);
                    let x: u64 = x.try_into().expect("residue fits");
                    (x != 0).then_some((*c as u32, Mp { v: x, p }))
                })
                .collect()
        })
        .collect();
    let mut e = Elimination::new(rows, m.cols(), None, false);
    e.run().unwrap_or_else(|_| unreachable!("field arithmetic cannot overflow"));
    debug_assert!(e.residual().0.is_empty());
    e.pivots.len()
}

/// Outcome of [`solve_integer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<BigInt>),
    /// After unimodular row operations the system contains the equation
    /// `pivot * y = residue` with `residue` not divisible by `pivot`
    /// (`pivot = 0` for an inconsistent zero row).
    Unsolvable { pivot: BigInt, residue: BigInt },
}

impl Solution {
    pub fn solved(self) -> Option<Vec<BigInt>> {
        match self {
            Solution::Solved(x) => Some(x),
            Solution::Unsolvable { .. } => None,
        }
    }
}

fn to_dense_block<T: Coeff>(block: &[Vec<(usize, T)>], ncols: usize) -> Vec<Vec<BigInt>> {
    block
        .iter()
        .map(|row| {
            let mut d = vec![BigInt::zero(); ncols];
            for (c, v) in row {
                d[*c] = v.to_big();
            }
            d
        })
        .collect()
}

/// Back substitution through frozen pivot rows, in reverse pivot order.
fn back_substitute<T: Coeff>(e: &Elimination<T>, x: &mut [BigInt]) {
    for &(i, j) in e.pivots.iter().rev() {
        let row = &e.rows[i as usize];
        let mut acc = e
            .rhs
            .as_ref()
            .and_then(|b| b[i as usize].as_ref())
            .map(|v| v.to_big())
            .unwrap_or_else(BigInt::zero);
        let mut a = BigInt::one();
        for (c, v) in row {
            if *c == j {
                a = v.to_big();
            } else {
                acc -= v.to_big() * &x[*c as usize];
            }
        }
        // a is a unit
        x[j as usize] = acc * a;
    }
}

fn solve_with<T: Coeff>(rows: Vec<Row<T>>, ncols: usize, b: Vec<Option<T>>) -> std::result::Result<Solution, Overflow> {
    let mut e = Elimination::new(rows, ncols, Some(b), true);
    e.run()?;
    let rhs = e.rhs.as_ref().expect("rhs present");
    // inconsistent empty rows
    for (r, row) in e.rows.iter().enumerate() {
        if e.row_alive[r] && row.is_empty() {
            if let Some(v) = &rhs[r] {
                return Ok(Solution::Unsolvable { pivot: BigInt::zero(), residue: v.to_big() });
            }
        }
    }
    let (row_ids, cols, block) = e.residual();
    let mut x = vec![BigInt::zero(); ncols];
    if !block.is_empty() {
        let mut work = Dense::new(to_dense_block(&block, cols.len()), row_ids.len(), cols.len(), true);
        work.reduce();
        let bvec: Vec<BigInt> =
            row_ids.iter().map(|&r| rhs[r].as_ref().map(|v| v.to_big()).unwrap_or_else(BigInt::zero)).collect();
        let c: Vec<BigInt> = work.u.iter().map(|urow| urow.iter().zip(&bvec).map(|(a, b)| a * b).sum()).collect();
        let mut z = vec![BigInt::zero(); cols.len()];
        for (k, ck) in c.iter().enumerate() {
            let d = if k < cols.len() { work.a[k][k].clone() } else { BigInt::zero() };
            if d.is_zero() {
                if !ck.is_zero() {
                    return Ok(Solution::Unsolvable { pivot: d, residue: ck.clone() });
                }
            } else {
                let (q, rem) = ck.div_rem(&d);
                if !rem.is_zero() {
                    return Ok(Solution::Unsolvable { pivot: d, residue: ck.clone() });
                }
                z[k] = q;
            }
        }
        for (k, &col) in cols.iter().enumerate() {
            x[col] = work.v[k].iter().zip(&z).map(|(a, b)| a * b).sum();
        }
    }
    back_substitute(&e, &mut x);
    Ok(Solution::Solved(x))
}

/// Solves `A x = b` over ℤ. A returned solution has been re-verified.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Solution> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!("rhs of length {} for {} rows", b.len(), a.rows())));
    }
    let fast = a.to_i64_rows().and_then(|rows| {
        let bi: Option<Vec<Option<i64>>> =
            b.iter().map(|v| if v.is_zero() { Some(None) } else { i64::try_from(v).ok().map(Some) }).collect();
        solve_with(rows, a.cols(), bi?).ok()
    });
    let sol = match fast {
        Some(s) => s,
        None => {
            let bb = b.iter().map(|v| (!v.is_zero()).then(|| v.clone())).collect();
            solve_with(a.to_big_rows(), a.cols(), bb).unwrap_or_else(|_| unreachable!("BigInt cannot overflow"))
        }
    };
    if let Solution::Solved(x) = &sol {
        if a.mul_vec(x) != b {
            return Err(Error::Verification("integer solution failed re-multiplication".into()));
        }
    }
    Ok(sol)
}

/// [`solve_integer`] for systems given as sparse `i64` rows, avoiding the
/// `BigInt` matrix representation for very large systems.
pub(crate) fn solve_sparse_i64(rows: Vec<Vec<(u32, i64)>>, ncols: usize, b: &[i64]) -> Result<Solution> {
    if b.len() != rows.len() {
        return Err(Error::Dimension(format!("rhs of length {} for {} rows", b.len(), rows.len())));
    }
    let check_rows = rows.clone();
    let bi = b.iter().map(|&v| (v != 0).then_some(v)).collect();
    let sol = match solve_with(rows, ncols, bi) {
        Ok(s) => s,
        Err(Overflow) => {
            let big_rows = check_rows
                .iter()
                .map(|r| r.iter().map(|(c, v)| (*c, BigInt::from(*v))).collect())
                .collect();
            let bb = b.iter().map(|&v| (v != 0).then(|| BigInt::from(v))).collect();
            solve_with(big_rows, ncols, bb).unwrap_or_else(|_| unreachable!("BigInt cannot overflow"))
        }
    };
    if let Solution::Solved(x) = &sol {
        for (row, bv) in check_rows.iter().zip(b) {
            let lhs: BigInt = row.iter().map(|(c, v)| BigInt::from(*v) * &x[*c as usize]).sum();
            if lhs != BigInt::from(*bv) {
                return Err(Error::Verification("integer solution failed re-multiplication".into()));
            }
        }
    }
    Ok(sol)
}

fn kernel_with<T: Coeff>(rows: Vec<Row<T>>, ncols: usize) -> std::result::Result<Vec<Vec<BigInt>>, Overflow> {
    let mut e = Elimination::new(rows, ncols, None, true);
    e.run()?;
    let (row_ids, cols, block) = e.residual();
    let pivot_cols: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &(_, j) in &e.pivots {
            v[j as usize] = true;
        }
        v
    };
    let in_residual: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &cols {
            v[c] = true;
        }
        v
    };
    let mut seeds: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..ncols {
        if !pivot_cols[c] && !in_residual[c] {
            let mut x = vec![BigInt::zero(); ncols];
            x[c] = BigInt::one();
            seeds.push(x);
        }
    }
    if !cols.is_empty() {
        let mut work = Dense::new(to_dense_block(&block, cols.len()), row_ids.len(), cols.len(), true);
        work.reduce();
        let rank = (0..row_ids.len().min(cols.len())).filter(|&k| !work.a[k][k].is_zero()).count();
        for k in rank..cols.len() {
            let mut x = vec![BigInt::zero(); ncols];
            for (t, &col) in cols.iter().enumerate() {
                x[col] = work.v[t][k].clone();
            }
            seeds.push(x);
        }
    }
    for x in &mut seeds {
        back_substitute(&e, x);
    }
    Ok(seeds)
}

/// A ℤ-basis of `ker A`, as the columns of the returned matrix. The basis is
/// saturated: the kernel lattice is a direct summand.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let vecs = a
        .to_i64_rows()
        .and_then(|rows| kernel_with(rows, a.cols()).ok())
        .unwrap_or_else(|| kernel_with(a.to_big_rows(), a.cols()).unwrap_or_else(|_| unreachable!()));
    let entries = vecs
        .iter()
        .enumerate()
        .flat_map(|(k, x)| x.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(r, v)| (r, k, v.clone())));
    IntMatrix::from_triplets(a.cols(), vecs.len(), entries)
}

/// Nonnegative representative check helper used by tests: `|det|` of a
/// square matrix via its invariant factors.
pub fn abs_det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let f = invariant_factors(m.to_dense(), m.cols());
    if f.len() < m.rows() {
        return BigInt::zero();
    }
    f.iter().fold(BigInt::one(), |acc, x| acc * x.abs())
}
