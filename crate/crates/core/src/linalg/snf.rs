use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Result of [`smith_normal_form`]: `u * a * v == d`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries of `d`, each dividing the next.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let mut work = Dense::new(a.to_dense(), a.rows(), a.cols(), true);
    work.reduce();
    Snf {
        u: IntMatrix::from_dense(&work.u, a.rows()),
        d: IntMatrix::from_dense(&work.a, a.cols()),
        v: IntMatrix::from_dense(&work.v, a.cols()),
    }
}

/// Nonzero invariant factors of a dense matrix, without transforms.
pub(crate) fn invariant_factors(a: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let mut work = Dense::new(a, rows, cols, false);
    work.reduce();
    (0..rows.min(cols)).map(|i| work.a[i][i].clone()).filter(|x| !x.is_zero()).collect()
}

pub(crate) struct Dense {
    pub a: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    track: bool,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

impl Dense {
    pub fn new(a: Vec<Vec<BigInt>>, rows: usize, cols: usize, track: bool) -> Dense {
        let (u, v) = if track { (identity(rows), identity(cols)) } else { (Vec::new(), Vec::new()) };
        Dense { a, u, v, rows, cols, track }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if self.track {
                self.u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            if self.track {
                for row in &mut self.v {
                    row.swap(i, j);
                }
            }
        }
    }

    /// row[i] -= q * row[j]
    fn row_axpy(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            if !self.a[j][c].is_zero() {
                let t = q * &self.a[j][c];
                self.a[i][c] -= t;
            }
        }
        if self.track {
            for c in 0..self.rows {
                if !self.u[j][c].is_zero() {
                    let t = q * &self.u[j][c];
                    self.u[i][c] -= t;
                }
            }
        }
    }

    /// col[i] -= q * col[j]
    fn col_axpy(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            if !self.a[r][j].is_zero() {
                let t = q * &self.a[r][j];
                self.a[r][i] -= t;
            }
        }
        if self.track {
            for r in 0..self.cols {
                if !self.v[r][j].is_zero() {
                    let t = q * &self.v[r][j];
                    self.v[r][i] -= t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if self.track {
            for x in &mut self.u[i] {
                *x = -&*x;
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for r in t..self.rows {
            for c in t..self.cols {
                let x = &self.a[r][c];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().map_or(true, |b| ax < b.2) {
                    let unit = ax.is_one();
                    best = Some((r, c, ax));
                    if unit {
                        let b = best.unwrap();
                        return Some((b.0, b.1));
                    }
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }

    pub fn reduce(&mut self) {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((r, c)) = self.min_entry(t) else { break };
            self.swap_rows(t, r);
            self.swap_cols(t, c);
            loop {
                let mut dirty = false;
                for r in t + 1..self.rows {
                    if self.a[r][t].is_zero() {
                        continue;
                    }
                    let q = self.a[r][t].div_floor(&self.a[t][t]);
                    self.row_axpy(r, t, &q);
                    if !self.a[r][t].is_zero() {
                        dirty = true;
                    }
                }
                for c in t + 1..self.cols {
                    if self.a[t][c].is_zero() {
                        continue;
                    }
                    let q = self.a[t][c].div_floor(&self.a[t][t]);
                    self.col_axpy(c, t, &q);
                    if !self.a[t][c].is_zero() {
                        dirty = true;
                    }
                }
                if !dirty {
                    // enforce divisibility of the remaining block
                    let p = self.a[t][t].clone();
                    let bad = (t + 1..self.rows)
                        .find(|&r| (t + 1..self.cols).any(|c| !self.a[r][c].is_multiple_of(&p)));
                    match bad {
                        None => break,
                        Some(r) => {
                            // row[t] += row[r]
                            self.row_axpy(t, r, &BigInt::from(-1));
                            continue;
                        }
                    }
                }
                // move the smallest entry of row/column t to the pivot
                let mut best = (t, t, self.a[t][t].abs());
                for r in t + 1..self.rows {
                    let x = &self.a[r][t];
                    if !x.is_zero() && x.abs() < best.2 {
                        best = (r, t, x.abs());
                    }
                }
                for c in t + 1..self.cols {
                    let x = &self.a[t][c];
                    if !x.is_zero() && x.abs() < best.2 {
                        best = (t, c, x.abs());
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> Snf {
        let s = smith_normal_form(a);
        let prod = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        assert_eq!(prod, s.d);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        for (r, c, _) in s.d.triplets() {
            assert_eq!(r, c);
        }
        s
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zero(2, 3));
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn identity_matrix() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn diag_2_3() {
        let a = IntMatrix::from_triplets(2, 2, vec![(0, 0, 2), (1, 1, 3)]);
        let s = check(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn dense_example() {
        let a = IntMatrix::from_triplets(
            3,
            3,
            vec![(0, 0, 2), (0, 1, 4), (0, 2, 4), (1, 0, -6), (1, 1, 6), (1, 2, 12), (2, 0, 10), (2, 1, -4), (2, 2, -16)],
        );
        let s = check(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }
}
