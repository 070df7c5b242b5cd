//! Sparse elimination on unit pivots (Schur complements), leaving a residual
//! block without unit entries for dense Smith reduction.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::coeff::{Coeff, Overflow};

pub(crate) type Row<T> = Vec<(u32, T)>;

pub(crate) struct Elimination<T> {
    pub rows: Vec<Row<T>>,
    pub rhs: Option<Vec<Option<T>>>,
    pub ncols: usize,
    col_rows: Vec<Vec<u32>>,
    pub row_alive: Vec<bool>,
    pub col_alive: Vec<bool>,
    /// `(row, col)` in pivot order. Pivot rows are frozen at pivot time when
    /// `keep_pivot_rows` is set.
    pub pivots: Vec<(u32, u32)>,
    keep_pivot_rows: bool,
}

fn entry<T>(row: &Row<T>, c: u32) -> Option<&T> {
    row.binary_search_by_key(&c, |(k, _)| *k).ok().map(|p| &row[p].1)
}

/// `a - f * b` for sorted sparse rows, skipping column `skip`.
fn axpy<T: Coeff>(a: &Row<T>, f: &T, b: &Row<T>, skip: u32, fill: &mut Vec<u32>) -> Result<Row<T>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        if ca < cb {
            if ca != skip {
                out.push(a[i].clone());
            }
            i += 1;
        } else if cb < ca {
            if cb != skip {
                let v = f.mul(&b[j].1).ok_or(Overflow)?.neg().ok_or(Overflow)?;
                fill.push(cb);
                out.push((cb, v));
            }
            j += 1;
        } else {
            if ca != skip {
                let v = a[i].1.sub(&f.mul(&b[j].1).ok_or(Overflow)?).ok_or(Overflow)?;
                if !v.is_nil() {
                    out.push((ca, v));
                }
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

impl<T: Coeff> Elimination<T> {
    pub fn new(rows: Vec<Row<T>>, ncols: usize, rhs: Option<Vec<Option<T>>>, keep_pivot_rows: bool) -> Self {
        let mut col_rows = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c as usize].push(r as u32);
            }
        }
        let nrows = rows.len();
        Elimination {
            rows,
            rhs,
            ncols,
            col_rows,
            row_alive: vec![true; nrows],
            col_alive: vec![true; ncols],
            pivots: Vec::new(),
            keep_pivot_rows,
        }
    }

    pub fn run(&mut self) -> Result<(), Overflow> {
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| Reverse((r.len(), i as u32)))
            .collect();
        while let Some(Reverse((len, i))) = heap.pop() {
            let iu = i as usize;
            if !self.row_alive[iu] || self.rows[iu].len() != len || len == 0 {
                continue;
            }
            // unit entry whose column is least populated
            let mut best: Option<(usize, u32)> = None;
            for (c, v) in &self.rows[iu] {
                if v.is_unit() {
                    let cost = self.col_rows[*c as usize].len();
                    if best.map_or(true, |b| cost < b.0) {
                        best = Some((cost, *c));
                    }
                }
            }
            let Some((_, j)) = best else { continue };
            for k in self.pivot(iu, j)? {
                heap.push(Reverse((self.rows[k as usize].len(), k)));
            }
        }
        Ok(())
    }

    /// Eliminate column `j` from all live rows using row `i`; returns modified rows.
    fn pivot(&mut self, i: usize, j: u32) -> Result<Vec<u32>, Overflow> {
        let a_inv = entry(&self.rows[i], j).expect("pivot entry").unit_inverse();
        let pivot_row = std::mem::take(&mut self.rows[i]);
        let pivot_rhs = self.rhs.as_ref().and_then(|b| b[i].clone());
        let candidates = std::mem::take(&mut self.col_rows[j as usize]);
        let mut touched = Vec::new();
        let mut fill = Vec::new();
        for &k in &candidates {
            let ku = k as usize;
            if ku == i || !self.row_alive[ku] {
                continue;
            }
            let Some(b) = entry(&self.rows[ku], j) else { continue };
            let f = b.mul(&a_inv).ok_or(Overflow)?;
            fill.clear();
            let new_row = axpy(&self.rows[ku], &f, &pivot_row, j, &mut fill)?;
            self.rows[ku] = new_row;
            if let (Some(rhs), Some(pb)) = (self.rhs.as_mut(), pivot_rhs.as_ref()) {
                let t = f.mul(pb).ok_or(Overflow)?.neg().ok_or(Overflow)?;
                rhs[ku] = match rhs[ku].take() {
                    None => Some(t),
                    Some(old) => {
                        let s = old.add(&t).ok_or(Overflow)?;
                        (!s.is_nil()).then_some(s)
                    }
                };
            }
            for &c in &fill {
                self.col_rows[c as usize].push(k);
            }
            touched.push(k);
        }
        self.row_alive[i] = false;
        self.col_alive[j as usize] = false;
        self.pivots.push((i as u32, j));
        if self.keep_pivot_rows {
            self.rows[i] = pivot_row;
        }
        Ok(touched)
    }

    /// Live rows with entries, restricted to live columns, as a compact block.
    /// Returns (row ids, col ids, block rows indexed by position in col ids).
    pub fn residual(&self) -> (Vec<usize>, Vec<usize>, Vec<Vec<(usize, T)>>) {
        let mut cols: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.ncols];
        let mut row_ids = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            if !self.row_alive[r] || row.is_empty() {
                continue;
            }
            row_ids.push(r);
            for (c, _) in row {
                if !seen[*c as usize] {
                    seen[*c as usize] = true;
                    cols.push(*c as usize);
                }
            }
        }
        cols.sort_unstable();
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let block = row_ids
            .iter()
            .map(|&r| self.rows[r].iter().map(|(c, v)| (pos[*c as usize], v.clone())).collect())
            .collect();
        (row_ids, cols, block)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_elimination_counts_rank() {
        // boundary of a triangle: rank 2
        let rows: Vec<Row<i64>> = vec![
            vec![(0, -1), (1, -1)],
            vec![(0, 1), (2, -1)],
            vec![(1, 1), (2, 1)],
        ];
        let mut e = Elimination::new(rows, 3, None, false);
        assert!(e.run().is_ok());
        assert_eq!(e.pivots.len(), 2);
        assert!(e.residual().0.is_empty());
    }

    #[test]
    fn non_unit_residual() {
        let rows: Vec<Row<i64>> = vec![vec![(0, 2), (1, 4)], vec![(0, 1), (1, 1)]];
        let mut e = Elimination::new(rows, 2, None, false);
        assert!(e.run().is_ok());
        assert_eq!(e.pivots.len(), 1);
        let (_, _, block) = e.residual();
        assert_eq!(block, vec![vec![(0, 2)]]);
    }
}
