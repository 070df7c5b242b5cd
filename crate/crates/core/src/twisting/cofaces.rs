//! Cofaces of simplices inside `E_n(r)`, tested with pair-order bitmasks.

use crate::barratt_eccles::{PermSimplex, Walker};
use crate::perm::Perm;

pub struct Cofaces {
    walker: Walker,
    n: usize,
    npairs: usize,
}

impl Cofaces {
    pub fn new(n: usize, r: usize) -> Cofaces {
        Cofaces { walker: Walker::new(n, r), n, npairs: r * (r - 1) / 2 }
    }

    /// All `(k, y)` with `y ∈ E_n(r)` non-degenerate and `d_k y = x`.
    pub fn of(&self, x: &PermSimplex) -> Vec<(usize, PermSimplex)> {
        let r = x.arity();
        let idx: Vec<usize> = x.vertices().map(|v| Perm(v.to_vec()).rank()).collect();
        let mut counts = vec![0u8; self.npairs];
        for w in idx.windows(2) {
            add(&mut counts, self.walker.mask(w[0], w[1]), 1);
        }
        let np = self.walker.perms().len();
        let mut out = Vec::new();
        for k in 0..=idx.len() {
            let a = k.checked_sub(1).map(|i| idx[i]);
            let b = idx.get(k).copied();
            if let (Some(a), Some(b)) = (a, b) {
                add(&mut counts, self.walker.mask(a, b), -1);
            }
            for p in 0..np {
                if Some(p) == a || Some(p) == b {
                    continue;
                }
                let ma = a.map_or(0, |a| self.walker.mask(a, p));
                let mb = b.map_or(0, |b| self.walker.mask(p, b));
                let ok = (0..self.npairs).all(|q| {
                    let c = counts[q] as usize + ((ma >> q) & 1) as usize + ((mb >> q) & 1) as usize;
                    c < self.n
                });
                if ok {
                    let mut flat = Vec::with_capacity(x.flat().len() + r);
                    flat.extend_from_slice(&x.flat()[..k * r]);
                    flat.extend_from_slice(&self.walker.perms()[p].0);
                    flat.extend_from_slice(&x.flat()[k * r..]);
                    out.push((k, PermSimplex::from_flat(r, flat)));
                }
            }
            if let (Some(a), Some(b)) = (a, b) {
                add(&mut counts, self.walker.mask(a, b), 1);
            }
        }
        out
    }
}

/// All `s ∈ E_n(r)` with `σ̃(s) = c·t`, paired with `c`, where
/// `σ̃(s) = (-1)^{(r-1)|s|} sgn ∩ s`.
pub fn sigma_preimages(n: usize, t: &PermSimplex) -> Vec<(PermSimplex, i64)> {
    let r = t.arity();
    let walker = Walker::new(n, r);
    let npairs = r * (r - 1) / 2;
    let idx: Vec<usize> = t.vertices().map(|v| Perm(v.to_vec()).rank()).collect();
    let mut counts = vec![0u8; npairs];
    for w in idx.windows(2) {
        add(&mut counts, walker.mask(w[0], w[1]), 1);
    }
    if counts.iter().any(|&c| c as usize >= n) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut prefix = vec![idx[0]];
    let mut used = vec![false; r + 1];
    used[t.vertex(0)[0] as usize] = true;
    preimage_rec(&walker, n, t, &mut prefix, &mut used, &mut counts, &mut out);
    out
}

fn preimage_rec(
    walker: &Walker,
    n: usize,
    t: &PermSimplex,
    rev: &mut Vec<usize>,
    used: &mut [bool],
    counts: &mut [u8],
    out: &mut Vec<(PermSimplex, i64)>,
) {
    let r = t.arity();
    if rev.len() == r {
        let mut flat = Vec::with_capacity(t.flat().len() + r * (r - 1));
        for &k in rev[1..].iter().rev() {
            flat.extend_from_slice(&walker.perms()[k].0);
        }
        flat.extend_from_slice(t.flat());
        let s = PermSimplex::from_flat(r, flat);
        let (c, rest) = s.cap_sgn().expect("first entries are distinct");
        debug_assert_eq!(&rest, t);
        let flip = if (r - 1) * s.degree() % 2 == 1 { -1 } else { 1 };
        out.push((s, c * flip));
        return;
    }
    let next = *rev.last().unwrap();
    for (p, perm) in walker.perms().iter().enumerate() {
        let first = perm.0[0] as usize;
        if used[first] {
            continue;
        }
        let m = walker.mask(p, next);
        let ok = (0..counts.len()).all(|q| (counts[q] as usize + ((m >> q) & 1) as usize) < n);
        if !ok {
            continue;
        }
        add(counts, m, 1);
        used[first] = true;
        rev.push(p);
        preimage_rec(walker, n, t, rev, used, counts, out);
        rev.pop();
        used[first] = false;
        add(counts, m, -1);
    }
}

fn add(counts: &mut [u8], mut bits: u64, delta: i8) {
    while bits != 0 {
        let k = bits.trailing_zeros() as usize;
        counts[k] = (counts[k] as i8 + delta) as u8;
        bits &= bits - 1;
    }
}
