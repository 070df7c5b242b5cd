//! Permutations of `{1..r}` stored as value sequences `(w(1), ..., w(r))`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(r: usize) -> Perm {
        Perm((1..=r as u8).collect())
    }

    /// Panics unless `values` is a permutation of `1..=len`.
    pub fn new(values: Vec<u8>) -> Perm {
        assert!(is_permutation(&values), "not a permutation: {:?}", values);
        Perm(values)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn at(&self, i: usize) -> u8 {
        self.0[i - 1]
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize - 1] = i as u8 + 1;
        }
        Perm(out)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&v| self.0[v as usize - 1]).collect())
    }

    pub fn sign(&self) -> i64 {
        sign_of(&self.0)
    }

    /// Subsequence of values lying in `{i, j}`.
    pub fn restrict(&self, i: u8, j: u8) -> [u8; 2] {
        restrict_values(&self.0, i, j)
    }

    /// Value-sequence substitution: the value `e` of `self` is replaced by the
    /// values of `v` shifted to `e..e+t-1`, larger values of `self` move up by `t-1`.
    pub fn substitute(&self, e: usize, v: &Perm) -> Perm {
        Perm(substitute_values(&self.0, e, &v.0))
    }

    /// Block permutation: position `e` of `self` is expanded into a block
    /// permuted by `v`. This is the permutation relating `(ρ·p) ∘_{ρ(e)} (π·q)`
    /// to `p ∘_e q`.
    pub fn block(&self, e: usize, v: &Perm) -> Perm {
        let t = v.0.len() as u8;
        let base = self.0[e - 1];
        let shift = |x: u8| if x > base { x + t - 1 } else { x };
        let mut out = Vec::with_capacity(self.0.len() + v.0.len() - 1);
        for (pos, &x) in self.0.iter().enumerate() {
            if pos + 1 == e {
                out.extend(v.0.iter().map(|&y| base + y - 1));
            } else {
                out.push(shift(x));
            }
        }
        Perm(out)
    }

    /// Position in the lexicographic order of [`Perm::all`].
    pub fn rank(&self) -> usize {
        let v = &self.0;
        let mut rank = 0;
        for i in 0..v.len() {
            let smaller = v[i + 1..].iter().filter(|&&x| x < v[i]).count();
            rank = rank * (v.len() - i) + smaller;
        }
        rank
    }

    pub fn all(r: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=r as u8).collect();
        heap_all(&mut cur, r, &mut out);
        out.sort();
        out
    }
}

fn heap_all(cur: &mut Vec<u8>, k: usize, out: &mut Vec<Perm>) {
    if k <= 1 {
        out.push(Perm(cur.clone()));
        return;
    }
    for i in 0..k {
        heap_all(cur, k - 1, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 && self.0.len() > 9 {
                write!(f, ",")?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

pub fn is_permutation(values: &[u8]) -> bool {
    let r = values.len();
    let mut seen = vec![false; r + 1];
    for &v in values {
        let v = v as usize;
        if v == 0 || v > r || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

pub fn sign_of(values: &[u8]) -> i64 {
    let mut inv = 0usize;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn restrict_values(values: &[u8], i: u8, j: u8) -> [u8; 2] {
    let mut out = [0u8; 2];
    let mut k = 0;
    for &v in values {
        if v == i || v == j {
            out[k] = v;
            k += 1;
            if k == 2 {
                break;
            }
        }
    }
    out
}

pub fn substitute_values(u: &[u8], e: usize, v: &[u8]) -> Vec<u8> {
    let t = v.len() as u8;
    let e8 = e as u8;
    let mut out = Vec::with_capacity(u.len() + v.len() - 1);
    for &x in u {
        if x == e8 {
            out.extend(v.iter().map(|&y| y + e8 - 1));
        } else if x > e8 {
            out.push(x + t - 1);
        } else {
            out.push(x);
        }
    }
    out
}

/// Pairs `(i, j)` with `1 <= i < j <= r` in lexicographic order.
pub fn pairs(r: usize) -> Vec<(u8, u8)> {
    let mut out = Vec::with_capacity(r * (r.saturating_sub(1)) / 2);
    for i in 1..=r as u8 {
        for j in i + 1..=r as u8 {
            out.push((i, j));
        }
    }
    out
}

/// Index of the pair `(i, j)`, `i < j`, in [`pairs`] order.
pub fn pair_index(r: usize, i: u8, j: u8) -> usize {
    let (i, j) = if i < j { (i as usize, j as usize) } else { (j as usize, i as usize) };
    (i - 1) * (2 * r - i) / 2 + (j - i - 1)
}
