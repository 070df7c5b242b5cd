//! Enumeration of the non-degenerate simplices of `E_n(r)`, in lexicographic
//! order of the value sequences, with a process-wide cache per `(n, r)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::simplex::PermSimplex;
use crate::error::{Error, Result};
use crate::linalg::{ChainComplex, IntMatrix};
use crate::perm::{pair_index, Perm};

/// Default bound on the number of simplices materialized by [`en_basis`].
pub const DEFAULT_CAP: u64 = 4_000_000;

/// Depth-first walker over `E_n(r)` simplices as sequences of indices into
/// the sorted list of permutations.
pub struct Walker {
    n: usize,
    r: usize,
    perms: Vec<Perm>,
    /// `masks[a * r! + b]`: pairs whose relative order differs in `a` and `b`.
    masks: Vec<u64>,
    npairs: usize,
}

impl Walker {
    pub fn new(n: usize, r: usize) -> Walker {
        assert!(r >= 1 && r <= 8, "arity {} out of range", r);
        let perms = Perm::all(r);
        let npairs = r * (r - 1) / 2;
        let before = |p: &Perm| -> u64 {
            let mut pos = vec![0usize; r + 1];
            for (k, &v) in p.0.iter().enumerate() {
                pos[v as usize] = k;
            }
            let mut bits = 0u64;
            for i in 1..=r {
                for j in i + 1..=r {
                    if pos[i] < pos[j] {
                        bits |= 1 << pair_index(r, i as u8, j as u8);
                    }
                }
            }
            bits
        };
        let codes: Vec<u64> = perms.iter().map(before).collect();
        let f = perms.len();
        let mut masks = vec![0u64; f * f];
        for a in 0..f {
            for b in 0..f {
                masks[a * f + b] = codes[a] ^ codes[b];
            }
        }
        Walker { n, r, perms, masks, npairs }
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn arity(&self) -> usize {
        self.r
    }

    pub fn mask(&self, a: usize, b: usize) -> u64 {
        self.masks[a * self.perms.len() + b]
    }

    /// Calls `f` with every simplex whose first vertex is in `starts`,
    /// in lexicographic order per starting vertex.
    pub fn visit<F: FnMut(&[u16])>(&self, starts: &[usize], max_degree: Option<usize>, mut f: F) {
        self.visit_while(starts, max_degree, |p| {
            f(p);
            true
        });
    }

    /// As [`Walker::visit`], stopping as soon as `f` returns `false`.
    pub fn visit_while<F: FnMut(&[u16]) -> bool>(&self, starts: &[usize], max_degree: Option<usize>, mut f: F) {
        let mut path: Vec<u16> = Vec::new();
        let mut counts = vec![0u8; self.npairs];
        let limit = max_degree.unwrap_or(usize::MAX);
        for &s in starts {
            path.push(s as u16);
            let go = self.dfs(&mut path, &mut counts, limit, &mut f);
            path.pop();
            if !go {
                return;
            }
        }
    }

    fn dfs<F: FnMut(&[u16]) -> bool>(&self, path: &mut Vec<u16>, counts: &mut [u8], limit: usize, f: &mut F) -> bool {
        if !f(path) {
            return false;
        }
        if path.len() > limit {
            return true;
        }
        let last = *path.last().unwrap() as usize;
        let np = self.perms.len();
        for b in 0..np {
            if b == last {
                continue;
            }
            let m = self.masks[last * np + b];
            let mut ok = true;
            let mut bits = m;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                if counts[k] as usize + 1 >= self.n {
                    ok = false;
                    break;
                }
                bits &= bits - 1;
            }
            if !ok {
                continue;
            }
            bump(counts, m, 1);
            path.push(b as u16);
            let go = self.dfs(path, counts, limit, f);
            path.pop();
            bump(counts, m, -1);
            if !go {
                return false;
            }
        }
        true
    }

    pub fn simplex(&self, path: &[u16]) -> PermSimplex {
        let mut flat = Vec::with_capacity(path.len() * self.r);
        for &k in path {
            flat.extend_from_slice(&self.perms[k as usize].0);
        }
        PermSimplex::from_flat(self.r, flat)
    }

    /// Number of simplices per degree.
    pub fn count(&self) -> Vec<u64> {
        self.count_capped(u64::MAX).expect("uncapped")
    }

    /// Number of simplices per degree, or `None` once the total exceeds `cap`.
    pub fn count_capped(&self, cap: u64) -> Option<Vec<u64>> {
        let mut dims: Vec<u64> = Vec::new();
        let mut total = 0u64;
        let all: Vec<usize> = (0..self.perms.len()).collect();
        self.visit_while(&all, None, |p| {
            let d = p.len() - 1;
            if dims.len() <= d {
                dims.resize(d + 1, 0);
            }
            dims[d] += 1;
            total += 1;
            total <= cap
        });
        (total <= cap).then_some(dims)
    }
}

fn bump(counts: &mut [u8], mut bits: u64, delta: i8) {
    while bits != 0 {
        let k = bits.trailing_zeros() as usize;
        counts[k] = (counts[k] as i8 + delta) as u8;
        bits &= bits - 1;
    }
}

/// Ordered basis of `E_n(r)` in every degree.
#[derive(Debug)]
pub struct EnBasis {
    n: usize,
    r: usize,
    by_degree: Vec<Vec<PermSimplex>>,
    index: Vec<HashMap<PermSimplex, usize>>,
}

impl EnBasis {
    fn build(n: usize, r: usize) -> EnBasis {
        let w = Walker::new(n, r);
        let mut by_degree: Vec<Vec<PermSimplex>> = Vec::new();
        let all: Vec<usize> = (0..w.perms.len()).collect();
        w.visit(&all, None, |p| {
            let d = p.len() - 1;
            if by_degree.len() <= d {
                by_degree.resize(d + 1, Vec::new());
            }
            by_degree[d].push(w.simplex(p));
        });
        for level in &mut by_degree {
            level.sort();
        }
        let index = by_degree
            .iter()
            .map(|b| b.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect())
            .collect();
        EnBasis { n, r, by_degree, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.r
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.by_degree.iter().map(|b| b.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.by_degree.iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn basis(&self, d: usize) -> &[PermSimplex] {
        self.by_degree.get(d).map_or(&[], |b| b.as_slice())
    }

    pub fn index_of(&self, s: &PermSimplex) -> Option<usize> {
        self.index.get(s.degree())?.get(s).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PermSimplex> {
        self.by_degree.iter().flatten()
    }

    /// Face differential `C_d -> C_{d-1}` in the lexicographic bases.
    pub fn differential(&self, d: usize) -> IntMatrix {
        let src = self.basis(d);
        if d == 0 {
            return IntMatrix::zero(0, src.len());
        }
        let mut entries = Vec::new();
        for (c, s) in src.iter().enumerate() {
            for k in 0..=d {
                if let Some(f) = s.face(k) {
                    let row = self.index_of(&f).expect("faces stay in E_n");
                    entries.push((row, c, if k % 2 == 0 { 1i64 } else { -1 }));
                }
            }
        }
        IntMatrix::from_triplets(self.basis(d - 1).len(), src.len(), entries)
    }

    pub fn complex(&self) -> ChainComplex {
        let diffs = (0..=self.max_degree()).map(|d| self.differential(d)).collect();
        ChainComplex::new_unchecked(0, self.dims(), diffs).expect("shapes agree")
    }

    /// Basis listing, one `perm|perm|...` line per simplex.
    pub fn listing(&self) -> String {
        let mut s = String::new();
        for (d, b) in self.by_degree.iter().enumerate() {
            for x in b {
                s.push_str(&format!("{} {}\n", d, x));
            }
        }
        s
    }
}

fn cache() -> &'static Mutex<HashMap<(usize, usize), Arc<EnBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<EnBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The cached basis of `E_n(r)`; fails when it exceeds [`DEFAULT_CAP`].
pub fn en_basis(n: usize, r: usize) -> Result<Arc<EnBasis>> {
    en_basis_capped(n, r, DEFAULT_CAP)
}

pub fn en_basis_capped(n: usize, r: usize, cap: u64) -> Result<Arc<EnBasis>> {
    if n == 0 || r == 0 {
        return Err(Error::Invalid(format!("E_{}({}) is not defined", n, r)));
    }
    if let Some(b) = cache().lock().expect("cache lock").get(&(n, r)) {
        return Ok(b.clone());
    }
    if Walker::new(n, r).count_capped(cap).is_none() {
        return Err(Error::ResourceCap(format!("E_{}({}) has more than {} simplices", n, r, cap)));
    }
    let built = Arc::new(EnBasis::build(n, r));
    let mut guard = cache().lock().expect("cache lock");
    Ok(guard.entry((n, r)).or_insert(built).clone())
}
