//! Checks on `B^c(Λ^{-n}E_n^∨)(r)` when `E_n(r)` is too large to index:
//! top-arity labels are interned on demand and corollas are streamed.

use std::collections::HashMap;
use std::sync::Mutex;

use super::bar::{apply_linear, bar_differential, collect, twist_part};
use super::complex::labeled_trees_in;
use super::factor::{factor_sign, split_vertex, tree_leaf_order};
use crate::barratt_eccles::{compose_simplices, PermSimplex, Walker};
use crate::error::{Error, Result};
use crate::operad_core::{normalize, two_vertex_sets, two_vertex_slot, two_vertex_tree, EnOperad, Operad, SparseVec, Suspended, Tree};
use crate::perm::Perm;

/// `E_n` with arities up to `base.max_arity()` indexed as in [`EnOperad`]
/// and one further arity whose simplices are numbered as they are met.
pub struct LazyEn {
    base: EnOperad,
    top: usize,
    interned: Mutex<Interner>,
}

#[derive(Default)]
struct Interner {
    items: Vec<PermSimplex>,
    index: HashMap<PermSimplex, u32>,
}

impl LazyEn {
    pub fn new(n: usize, top: usize) -> Result<LazyEn> {
        if top < 3 {
            return Err(Error::Invalid("the lazy top arity must be at least 3".into()));
        }
        Ok(LazyEn { base: EnOperad::new(n, top - 1)?, top, interned: Mutex::new(Interner::default()) })
    }

    pub fn base(&self) -> &EnOperad {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn element(&self, r: usize, i: u32) -> PermSimplex {
        if r < self.top {
            self.base.element(r, i).clone()
        } else {
            self.interned.lock().expect("interner").items[i as usize].clone()
        }
    }

    pub fn intern(&self, s: PermSimplex) -> u32 {
        if s.arity() < self.top {
            return self.base.index(&s).expect("E_n is closed under the operations");
        }
        let mut g = self.interned.lock().expect("interner");
        if let Some(&i) = g.index.get(&s) {
            return i;
        }
        let i = g.items.len() as u32;
        g.items.push(s.clone());
        g.index.insert(s, i);
        i
    }

    pub fn interned_count(&self) -> usize {
        self.interned.lock().expect("interner").items.len()
    }
}

impl Operad for LazyEn {
    fn max_arity(&self) -> usize {
        self.top
    }

    fn dim(&self, r: usize) -> usize {
        if r < self.top {
            self.base.dim(r)
        } else {
            self.interned_count()
        }
    }

    fn degree(&self, r: usize, i: u32) -> i64 {
        if r < self.top {
            self.base.degree(r, i)
        } else {
            self.element(r, i).degree() as i64
        }
    }

    fn label(&self, r: usize, i: u32) -> String {
        self.element(r, i).to_string()
    }

    fn differential(&self, r: usize, i: u32) -> SparseVec {
        if r < self.top {
            return self.base.differential(r, i);
        }
        let s = self.element(r, i);
        let out = (0..=s.degree())
            .filter_map(|k| s.face(k).map(|f| (self.intern(f), if k % 2 == 0 { 1 } else { -1 })))
            .collect();
        normalize(out)
    }

    fn act(&self, r: usize, w: &Perm, i: u32) -> SparseVec {
        if r < self.top {
            return self.base.act(r, w, i);
        }
        vec![(self.intern(self.element(r, i).act(w)), 1)]
    }

    fn compose(&self, s: usize, a: u32, e: usize, t: usize, b: u32) -> SparseVec {
        if s + t - 1 < self.top {
            return self.base.compose(s, a, e, t, b);
        }
        if s == 1 {
            return vec![(b, 1)];
        }
        if t == 1 {
            return vec![(a, 1)];
        }
        let (u, v) = (self.element(s, a), self.element(t, b));
        normalize(compose_simplices(&u, e, &v).into_iter().map(|(w, c)| (self.intern(w), c)).collect())
    }
}

/// Counts gathered by [`stream_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StreamReport {
    pub corollas: u64,
    pub trees: u64,
    pub route_entries: u64,
}

/// Key of a simplex of arity `<= 5` as packed permutation ranks.
fn simplex_key(s: &PermSimplex) -> u128 {
    let r = s.arity();
    let mut key = 0u128;
    for (k, w) in s.vertices().enumerate() {
        key |= ((Perm(w.to_vec()).rank() + 1) as u128) << (7 * k);
    }
    key | ((r as u128) << 120)
}

fn path_key(path: &[u16], r: usize) -> u128 {
    let mut key = 0u128;
    for (k, &p) in path.iter().enumerate() {
        key |= ((p as u128) + 1) << (7 * k);
    }
    key | ((r as u128) << 120)
}

/// One entry of `∂` on generators: corolla key, two-vertex set, root label,
/// inner label, coefficient.
type RouteEntry = (u128, u8, u32, u32, i64);

/// `∂² = 0` on `B^c(Λ^{-n}E_n^∨)(r)` and the agreement of the two
/// computations of `∂` on generators, without indexing `E_n(r)`:
///
/// * every tree with at least two vertices gets `d_B² = 0` exactly;
/// * corollas reduce to `d² = 0` on `E_n(r)`, checked simplex by simplex;
/// * the transpose route is gathered from the contractions of all
///   two-vertex trees and compared with the factorization of every simplex.
pub fn stream_check(n: usize, r: usize) -> Result<StreamReport> {
    if r >= 6 {
        return Err(Error::Invalid("streaming keys hold arities up to 5".into()));
    }
    let lazy = LazyEn::new(n, r)?;
    let op = Suspended::new(&lazy, n as i64);
    let mut report = StreamReport::default();

    // trees with at least two vertices
    for t in labeled_trees_in(&op, r, 2..r) {
        let once = collect(bar_differential(&op, &t));
        let twice = apply_linear(&once, |u| bar_differential(&op, u));
        if !twice.is_empty() {
            return Err(Error::Verification(format!("d_B² ≠ 0 on {} in arity {}", t, r)));
        }
        report.trees += 1;
    }

    // transpose route
    let sets = two_vertex_sets(r);
    let mut transpose: Vec<RouteEntry> = Vec::new();
    for (si, set) in sets.iter().enumerate() {
        let t = set.len();
        let s = r - t + 1;
        for u in 0..lazy.base().dim(s) as u32 {
            for v in 0..lazy.base().dim(t) as u32 {
                for (tree, c) in collect(twist_part(&op, &two_vertex_tree(r, set, u, v))) {
                    let Tree::Node { label, .. } = tree else { unreachable!() };
                    transpose.push((simplex_key(&lazy.element(r, label)), si as u8, u, v, c));
                }
            }
        }
    }
    transpose.sort_unstable();
    drop(lazy);

    // corollas, streamed
    let walker = Walker::new(n, r);
    let base = EnOperad::new(n, r - 1)?;
    let tables = factor_tables(&walker, &sets);
    let perms: Vec<Vec<Perm>> = (1..=r).map(Perm::all).collect();
    let mut factored: Vec<RouteEntry> = Vec::with_capacity(transpose.len());
    let mut failure: Option<String> = None;
    let starts: Vec<usize> = (0..walker.perms().len()).collect();
    let mut scratch = Vec::new();
    walker.visit_while(&starts, None, |path| {
        report.corollas += 1;
        if !square_vanishes(path, r, &mut scratch) {
            failure = Some(format!("d² ≠ 0 on {}", walker.simplex(path)));
            return false;
        }
        for (si, table) in tables.iter().enumerate() {
            if let Some(entry) = factor_path(path, table, n, r, &sets[si], &base, &perms) {
                factored.push((path_key(path, r), si as u8, entry.0, entry.1, entry.2));
            }
        }
        true
    });
    if let Some(f) = failure {
        return Err(Error::Verification(f));
    }
    factored.sort_unstable();
    if factored != transpose {
        let first = factored.iter().zip(&transpose).position(|(a, b)| a != b).unwrap_or(factored.len().min(transpose.len()));
        return Err(Error::Verification(format!(
            "routes disagree: {} factorization entries, {} transpose entries, first difference at {}",
            factored.len(),
            transpose.len(),
            first
        )));
    }
    report.route_entries = factored.len() as u64;
    Ok(report)
}

/// `d² x = 0` for the simplex `x` given by a walker path.
fn square_vanishes(path: &[u16], r: usize, scratch: &mut Vec<(u128, i64)>) -> bool {
    let d = path.len() - 1;
    if d < 2 {
        return true;
    }
    scratch.clear();
    let mut face = Vec::with_capacity(d);
    for k in 0..=d {
        if k > 0 && k < d && path[k - 1] == path[k + 1] {
            continue;
        }
        face.clear();
        face.extend(path.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &p)| p));
        for j in 0..d {
            if j > 0 && j < d - 1 && face[j - 1] == face[j + 1] {
                continue;
            }
            let mut key = 0u128;
            let mut pos = 0;
            for (i, &p) in face.iter().enumerate() {
                if i != j {
                    key |= ((p as u128) + 1) << (7 * pos);
                    pos += 1;
                }
            }
            let sign = if (k + j) % 2 == 0 { 1 } else { -1 };
            scratch.push((key | ((r as u128) << 120), sign));
        }
    }
    scratch.sort_unstable_by_key(|e| e.0);
    let mut i = 0;
    while i < scratch.len() {
        let mut j = i;
        let mut sum = 0;
        while j < scratch.len() && scratch[j].0 == scratch[i].0 {
            sum += scratch[j].1;
            j += 1;
        }
        if sum != 0 {
            return false;
        }
        i = j;
    }
    true
}

/// Per permutation of `1..r`: the split `(u_k, v_k)` of `ρ^{-1}∘w` for the
/// two-vertex set, as ranks in `Σ_s` and `Σ_t`.
fn factor_tables(walker: &Walker, sets: &[Vec<u8>]) -> Vec<Vec<Option<(u16, u16)>>> {
    let r = walker.arity();
    sets.iter()
        .map(|set| {
            let e = two_vertex_slot(set, r);
            let rinv = tree_leaf_order(r, set).inverse();
            walker
                .perms()
                .iter()
                .map(|w| {
                    let x = rinv.compose(w);
                    split_vertex(&x.0, e, set.len())
                        .map(|(u, v)| (Perm(u).rank() as u16, Perm(v).rank() as u16))
                })
                .collect()
        })
        .collect()
}

fn factor_path(
    path: &[u16],
    table: &[Option<(u16, u16)>],
    n: usize,
    r: usize,
    set: &[u8],
    base: &EnOperad,
    perms: &[Vec<Perm>],
) -> Option<(u32, u32, i64)> {
    let mut u: Vec<u16> = Vec::new();
    let mut v: Vec<u16> = Vec::new();
    let mut vsteps = 0usize;
    let mut parity = 0usize;
    for &p in path {
        let (a, b) = table[p as usize]?;
        if u.is_empty() {
            u.push(a);
            v.push(b);
            continue;
        }
        match (*u.last().unwrap() != a, *v.last().unwrap() != b) {
            (true, true) => return None,
            (true, false) => {
                parity += vsteps;
                u.push(a);
            }
            (false, true) => {
                vsteps += 1;
                v.push(b);
            }
            (false, false) => unreachable!(),
        }
    }
    let (ps, pt) = (&perms[r - set.len()], &perms[set.len() - 1]);
    let us = PermSimplex::new(&u.iter().map(|&k| ps[k as usize].clone()).collect::<Vec<_>>()).ok()?;
    let vs = PermSimplex::new(&v.iter().map(|&k| pt[k as usize].clone()).collect::<Vec<_>>()).ok()?;
    let sign = factor_sign(n, r, set, us.degree(), vs.degree(), parity);
    Some((base.index(&us)?, base.index(&vs)?, sign))
}
