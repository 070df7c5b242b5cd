use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Sparse integer matrix in row-compressed form. Rows are sorted by column
/// and never store zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let data = (0..n).map(|i| vec![(i, BigInt::one())]).collect();
        IntMatrix { rows: n, cols: n, data }
    }

    pub fn from_triplets<I, V>(rows: usize, cols: usize, entries: I) -> IntMatrix
    where
        I: IntoIterator<Item = (usize, usize, V)>,
        V: Into<BigInt>,
    {
        let mut acc: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({}, {}) outside {}x{}", r, c, rows, cols);
            *acc[r].entry(c).or_insert_with(BigInt::zero) += v.into();
        }
        let data = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64_rows(rows: usize, cols: usize, data: Vec<Vec<(usize, i64)>>) -> IntMatrix {
        assert_eq!(data.len(), rows);
        let entries = data
            .into_iter()
            .enumerate()
            .flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v)));
        IntMatrix::from_triplets(rows, cols, entries)
    }

    pub fn from_dense(dense: &[Vec<BigInt>], cols: usize) -> IntMatrix {
        let data = dense
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        IntMatrix { rows: dense.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.data[r].binary_search_by_key(&c, |(k, _)| *k) {
            Ok(pos) => self.data[r][pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// Entries in canonical `(row, col)` order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triplets() {
            data[c].push((r, v.clone()));
        }
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_insert_with(BigInt::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(IntMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().map(|(c, v)| v * &x[*c]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    /// Rows as machine integers, if every entry fits.
    pub(crate) fn to_i64_rows(&self) -> Option<Vec<Vec<(u32, i64)>>> {
        use num_traits::ToPrimitive;
        self.data
            .iter()
            .map(|row| row.iter().map(|(c, v)| v.to_i64().map(|x| (*c as u32, x))).collect())
            .collect()
    }

    pub(crate) fn to_big_rows(&self) -> Vec<Vec<(u32, BigInt)>> {
        self.data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c as u32, v.clone())).collect())
            .collect()
    }

    /// Select columns (in the given order).
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let entries = self.triplets().filter_map(|(r, c, v)| {
            let k = pos[c];
            (k != usize::MAX).then(|| (r, k, v.clone()))
        });
        IntMatrix::from_triplets(self.rows, cols.len(), entries)
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `self` and `other` side by side.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let shift = self.cols;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|(c, v)| (c + shift, v.clone())));
                row
            })
            .collect();
        IntMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// Plain text export: `rows cols` followed by one `r c v` line per entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{} {} {}", r, c, v);
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<IntMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {:?}", header))))
            .collect::<Result<_>>()?;
        if dims.len() != 2 {
            return Err(Error::Parse(format!("bad header {:?}", header)));
        }
        let mut entries = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad entry line {:?}", line)));
            }
            let r: usize = parts[0].parse().map_err(|_| Error::Parse(line.into()))?;
            let c: usize = parts[1].parse().map_err(|_| Error::Parse(line.into()))?;
            let v: BigInt = parts[2].parse().map_err(|_| Error::Parse(line.into()))?;
            if r >= dims[0] || c >= dims[1] {
                return Err(Error::Parse(format!("entry out of range: {:?}", line)));
            }
            entries.push((r, c, v));
        }
        Ok(IntMatrix::from_triplets(dims[0], dims[1], entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplet_roundtrip() {
        let m = IntMatrix::from_triplets(2, 3, vec![(0, 1, 5), (1, 2, -3), (1, 2, 1)]);
        let text = m.to_triplet_text();
        assert_eq!(text, "2 3\n0 1 5\n1 2 -2\n");
        assert_eq!(IntMatrix::from_triplet_text(&text).unwrap(), m);
    }

    #[test]
    fn multiply_and_transpose() {
        let a = IntMatrix::from_triplets(2, 2, vec![(0, 0, 1), (0, 1, 2), (1, 1, 3)]);
        let b = a.transpose();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.get(0, 0), BigInt::from(5));
        assert_eq!(p.get(0, 1), BigInt::from(6));
        assert_eq!(p.get(1, 1), BigInt::from(9));
    }
}
