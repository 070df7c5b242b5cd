//! The cobar differential on dual basis elements of `Λ^{-n}E_n^∨`, computed by
//! factoring simplices through two-vertex trees.

use crate::barratt_eccles::PermSimplex;
use crate::operad_core::{suspension_sign, two_vertex_slot};
use crate::perm::Perm;

/// `ρ^{-1}·s = u ∘_e v` along one lattice path, where `ρ` lists the leaves of
/// the two-vertex tree in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub root: PermSimplex,
    pub inner: PermSimplex,
    pub slot: usize,
    /// Coefficient of `(u ⊗ v)^∨` in `∂(s^∨)`.
    pub sign: i64,
}

/// The leaves of the canonical two-vertex tree in input order, as a
/// permutation sending positions to leaves.
pub fn tree_leaf_order(r: usize, inner: &[u8]) -> Perm {
    let e = two_vertex_slot(inner, r);
    let outer: Vec<u8> = (1..=r as u8).filter(|l| !inner.contains(l)).collect();
    let mut order = outer[..e - 1].to_vec();
    order.extend_from_slice(inner);
    order.extend_from_slice(&outer[e - 1..]);
    Perm(order)
}

/// Splits one vertex `w` of `ρ^{-1}·s` into `(u_k, v_k)` when the block
/// `{e, ..., e+t-1}` occupies consecutive positions.
pub fn split_vertex(w: &[u8], e: usize, t: usize) -> Option<(Vec<u8>, Vec<u8>)> {
    let (lo, hi) = (e as u8, (e + t - 1) as u8);
    let first = w.iter().position(|&x| x >= lo && x <= hi)?;
    if w[first..first + t].iter().any(|&x| x < lo || x > hi) {
        return None;
    }
    let v: Vec<u8> = w[first..first + t].iter().map(|&x| x - lo + 1).collect();
    let mut u = Vec::with_capacity(w.len() - t + 1);
    for (k, &x) in w.iter().enumerate() {
        if k == first {
            u.push(lo);
        } else if k > first && k < first + t {
            continue;
        } else if x > hi {
            u.push(x - (t as u8 - 1));
        } else {
            u.push(x);
        }
    }
    Some((u, v))
}

/// The coefficient of `(T; u, v)^∨` in `∂(s^∨)` for the two-vertex tree `T`
/// with inner leaves `inner`, in `B^c(Λ^{-n}E_n^∨)`; `None` when `s` does
/// not factor through `T`.
pub fn cobar_dual_basis_differential(s: &PermSimplex, inner: &[u8], n: usize) -> Option<Factorization> {
    let r = s.arity();
    let t = inner.len();
    let e = two_vertex_slot(inner, r);
    let rho = tree_leaf_order(r, inner);
    let x = s.act(&rho.inverse());
    let (mut u, mut v): (Vec<Vec<u8>>, Vec<Vec<u8>>) = (Vec::new(), Vec::new());
    let mut vsteps = 0usize;
    let mut parity = 0usize;
    for w in x.vertices() {
        let (a, b) = split_vertex(w, e, t)?;
        match (u.last() != Some(&a), v.last() != Some(&b), u.is_empty()) {
            (_, _, true) => {
                u.push(a);
                v.push(b);
            }
            (true, true, _) => return None,
            (true, false, _) => {
                parity += vsteps;
                u.push(a);
            }
            (false, true, _) => {
                vsteps += 1;
                v.push(b);
            }
            (false, false, _) => unreachable!("non-degenerate simplices move at every step"),
        }
    }
    let root = PermSimplex::new(&u.into_iter().map(Perm).collect::<Vec<_>>()).ok()?;
    let inner_s = PermSimplex::new(&v.into_iter().map(Perm).collect::<Vec<_>>()).ok()?;
    let sign = factor_sign(n, r, inner, root.degree(), inner_s.degree(), parity);
    Some(Factorization { root, inner: inner_s, slot: e, sign })
}

/// Sign of the factorization term with root degree `du`, inner degree `dv`
/// and lattice-path parity `parity`, all in `E_n`.
pub(crate) fn factor_sign(n: usize, r: usize, inner: &[u8], du: usize, dv: usize, parity: usize) -> i64 {
    let t = inner.len();
    let s = r - t + 1;
    let e = two_vertex_slot(inner, r);
    let k = n as i64;
    let shift = k * (1 - s as i64);
    let mut sign = suspension_sign(k, s, t, e);
    if (du as i64 + shift + shift * dv as i64 + parity as i64).rem_euclid(2) == 1 {
        sign = -sign;
    }
    if n % 2 == 1 {
        sign *= tree_leaf_order(r, inner).sign();
    }
    sign
}
