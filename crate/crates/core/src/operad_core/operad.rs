use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::tree::Tree;
use crate::barratt_eccles::{compose_simplices, en_basis_capped, EnBasis, PermSimplex, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Sparse integer vector on a basis, sorted by index without zeros.
pub type SparseVec = Vec<(u32, i64)>;

/// Sorts, merges and drops zero entries.
pub fn normalize(mut v: SparseVec) -> SparseVec {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += c,
            _ => out.push((i, c)),
        }
        if out.last().is_some_and(|l| l.1 == 0) {
            out.pop();
        }
    }
    out
}

/// A connected graded operad with a finite basis in each arity up to
/// [`Operad::max_arity`]. Arity 1 is spanned by the unit, index 0.
pub trait Operad: Sync {
    fn max_arity(&self) -> usize;
    fn dim(&self, r: usize) -> usize;
    fn degree(&self, r: usize, i: u32) -> i64;
    fn label(&self, r: usize, i: u32) -> String;
    fn differential(&self, r: usize, i: u32) -> SparseVec;
    /// Left action: input `j` is renamed `w(j)`.
    fn act(&self, r: usize, w: &Perm, i: u32) -> SparseVec;
    /// Partial composite of basis elements `a ∈ P(s)`, `b ∈ P(t)`.
    fn compose(&self, s: usize, a: u32, e: usize, t: usize, b: u32) -> SparseVec;
}

/// Bilinear extension of [`Operad::compose`].
pub fn compose_vec<O: Operad + ?Sized>(op: &O, s: usize, x: &SparseVec, e: usize, t: usize, y: &SparseVec) -> SparseVec {
    let mut out = Vec::new();
    for &(a, ca) in x {
        for &(b, cb) in y {
            out.extend(op.compose(s, a, e, t, b).into_iter().map(|(i, c)| (i, c * ca * cb)));
        }
    }
    normalize(out)
}

pub fn act_vec<O: Operad + ?Sized>(op: &O, r: usize, w: &Perm, x: &SparseVec) -> SparseVec {
    normalize(x.iter().flat_map(|&(a, c)| op.act(r, w, a).into_iter().map(move |(i, d)| (i, c * d))).collect())
}

pub fn differential_vec<O: Operad + ?Sized>(op: &O, r: usize, x: &SparseVec) -> SparseVec {
    normalize(x.iter().flat_map(|&(a, c)| op.differential(r, a).into_iter().map(move |(i, d)| (i, c * d))).collect())
}

fn scale(x: &SparseVec, k: i64) -> SparseVec {
    x.iter().map(|&(i, c)| (i, c * k)).collect()
}

fn add(x: &SparseVec, y: &SparseVec) -> SparseVec {
    normalize(x.iter().chain(y.iter()).copied().collect())
}

/// One arity of a [`GradedOperadTruncation`].
#[derive(Clone, Debug, Default)]
pub struct Component {
    pub degrees: Vec<i64>,
    pub labels: Vec<String>,
    /// `differential[i]` is `d(b_i)`.
    pub differential: Vec<SparseVec>,
    /// `action[w.rank()][i]` is `w·b_i`.
    pub action: Vec<Vec<SparseVec>>,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Number of basis elements in each degree, keyed by degree.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }
}

/// An operad truncated at arity `R`, stored as explicit structure tables.
#[derive(Clone, Debug)]
pub struct GradedOperadTruncation {
    max_arity: usize,
    components: Vec<Component>,
    /// `(s, e, t) -> table[a * dim(t) + b]`, for `s + t - 1 <= R`, `s, t >= 2`.
    compositions: HashMap<(usize, usize, usize), Vec<SparseVec>>,
}

impl GradedOperadTruncation {
    pub fn new(
        max_arity: usize,
        components: Vec<Component>,
        compositions: HashMap<(usize, usize, usize), Vec<SparseVec>>,
    ) -> Result<GradedOperadTruncation> {
        if components.len() != max_arity + 1 {
            return Err(Error::Dimension(format!("{} components for arity bound {}", components.len(), max_arity)));
        }
        if max_arity >= 1 && components[1].dim() != 1 {
            return Err(Error::Invalid("arity 1 must be spanned by the unit".into()));
        }
        Ok(GradedOperadTruncation { max_arity, components, compositions })
    }

    /// Materializes any [`Operad`] up to arity `max_arity`.
    pub fn from_operad<O: Operad + ?Sized>(op: &O, max_arity: usize) -> GradedOperadTruncation {
        let max_arity = max_arity.min(op.max_arity());
        let mut components = vec![Component::default()];
        for r in 1..=max_arity {
            let dim = op.dim(r) as u32;
            let perms = Perm::all(r);
            components.push(Component {
                degrees: (0..dim).map(|i| op.degree(r, i)).collect(),
                labels: (0..dim).map(|i| op.label(r, i)).collect(),
                differential: (0..dim).map(|i| op.differential(r, i)).collect(),
                action: perms.iter().map(|w| (0..dim).map(|i| op.act(r, w, i)).collect()).collect(),
            });
        }
        let mut compositions = HashMap::new();
        for s in 2..=max_arity {
            for t in 2..=max_arity + 1 - s {
                for e in 1..=s {
                    let (ds, dt) = (op.dim(s) as u32, op.dim(t) as u32);
                    let mut table = Vec::with_capacity((ds * dt) as usize);
                    for a in 0..ds {
                        for b in 0..dt {
                            table.push(op.compose(s, a, e, t, b));
                        }
                    }
                    compositions.insert((s, e, t), table);
                }
            }
        }
        GradedOperadTruncation { max_arity, components, compositions }
    }

    pub fn component(&self, r: usize) -> &Component {
        &self.components[r]
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }
}

impl Operad for GradedOperadTruncation {
    fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn dim(&self, r: usize) -> usize {
        self.components.get(r).map_or(0, Component::dim)
    }

    fn degree(&self, r: usize, i: u32) -> i64 {
        self.components[r].degrees[i as usize]
    }

    fn label(&self, r: usize, i: u32) -> String {
        self.components[r].labels[i as usize].clone()
    }

    fn differential(&self, r: usize, i: u32) -> SparseVec {
        self.components[r].differential[i as usize].clone()
    }

    fn act(&self, r: usize, w: &Perm, i: u32) -> SparseVec {
        self.components[r].action[w.rank()][i as usize].clone()
    }

    fn compose(&self, s: usize, a: u32, e: usize, t: usize, b: u32) -> SparseVec {
        if s == 1 {
            return vec![(b, 1)];
        }
        if t == 1 {
            return vec![(a, 1)];
        }
        let table = self.compositions.get(&(s, e, t)).unwrap_or_else(|| panic!("composite ({}, {}, {}) beyond truncation", s, e, t));
        table[a as usize * self.dim(t) + b as usize].clone()
    }
}

/// `c_k(s, t, e)`: the sign of `e_s ∘_e e_t` in `Λ^k`.
pub fn suspension_sign(k: i64, s: usize, t: usize, e: usize) -> i64 {
    let c1 = ((t - 1) * (e - 1)) % 2 == 1;
    let cross = (((s - 1) * (t - 1)) % 2 == 1) && (k * (k - 1) / 2).rem_euclid(2) == 1;
    let odd = (c1 && k.rem_euclid(2) == 1) ^ cross;
    if odd {
        -1
    } else {
        1
    }
}

/// The `k`-fold operadic suspension `Λ^k P`: arity `r` is shifted by `k(1 - r)`
/// and the action is twisted by `sgn^k`.
pub fn operadic_suspension(p: &GradedOperadTruncation, k: i64) -> GradedOperadTruncation {
    let mut components = vec![Component::default()];
    for r in 1..=p.max_arity {
        let c = &p.components[r];
        let shift = k * (1 - r as i64);
        let perms = Perm::all(r);
        components.push(Component {
            degrees: c.degrees.iter().map(|d| d + shift).collect(),
            labels: c.labels.clone(),
            differential: c.differential.clone(),
            action: perms
                .iter()
                .zip(&c.action)
                .map(|(w, m)| {
                    let sg = if k.rem_euclid(2) == 1 { w.sign() } else { 1 };
                    m.iter().map(|v| scale(v, sg)).collect()
                })
                .collect(),
        });
    }
    let mut compositions = HashMap::new();
    for (&(s, e, t), table) in &p.compositions {
        let dt = p.dim(t);
        let base = suspension_sign(k, s, t, e);
        let moved = k * (1 - s as i64);
        let new_table = table
            .iter()
            .enumerate()
            .map(|(ab, v)| {
                let b = (ab % dt) as u32;
                let yd = p.degree(t, b);
                let sg = if (moved * yd).rem_euclid(2) == 1 { -base } else { base };
                scale(v, sg)
            })
            .collect();
        compositions.insert((s, e, t), new_table);
    }
    GradedOperadTruncation { max_arity: p.max_arity, components, compositions }
}

/// `Λ^k P` computed on the fly from any [`Operad`], with the same signs as
/// [`operadic_suspension`].
pub struct Suspended<'a, O: ?Sized> {
    inner: &'a O,
    k: i64,
}

impl<'a, O: Operad + ?Sized> Suspended<'a, O> {
    pub fn new(inner: &'a O, k: i64) -> Self {
        Suspended { inner, k }
    }

    pub fn inner(&self) -> &O {
        self.inner
    }
}

impl<O: Operad + ?Sized> Operad for Suspended<'_, O> {
    fn max_arity(&self) -> usize {
        self.inner.max_arity()
    }

    fn dim(&self, r: usize) -> usize {
        self.inner.dim(r)
    }

    fn degree(&self, r: usize, i: u32) -> i64 {
        self.inner.degree(r, i) + self.k * (1 - r as i64)
    }

    fn label(&self, r: usize, i: u32) -> String {
        self.inner.label(r, i)
    }

    fn differential(&self, r: usize, i: u32) -> SparseVec {
        self.inner.differential(r, i)
    }

    fn act(&self, r: usize, w: &Perm, i: u32) -> SparseVec {
        let v = self.inner.act(r, w, i);
        if self.k.rem_euclid(2) == 1 {
            scale(&v, w.sign())
        } else {
            v
        }
    }

    fn compose(&self, s: usize, a: u32, e: usize, t: usize, b: u32) -> SparseVec {
        let v = self.inner.compose(s, a, e, t, b);
        let moved = self.k * (1 - s as i64) * self.inner.degree(t, b);
        let sg = suspension_sign(self.k, s, t, e) * if moved.rem_euclid(2) == 1 { -1 } else { 1 };
        scale(&v, sg)
    }
}

/// `E_n` truncated by arity, indexed degree-major inside each arity.
pub struct EnOperad {
    n: usize,
    bases: Vec<Arc<EnBasis>>,
    offsets: Vec<Vec<usize>>,
}

impl EnOperad {
    pub fn new(n: usize, max_arity: usize) -> Result<EnOperad> {
        EnOperad::with_cap(n, max_arity, DEFAULT_CAP)
    }

    pub fn with_cap(n: usize, max_arity: usize, cap: u64) -> Result<EnOperad> {
        let mut bases = Vec::new();
        let mut offsets = Vec::new();
        for r in 1..=max_arity {
            let b = en_basis_capped(n, r, cap)?;
            let mut off = vec![0];
            for d in b.dims() {
                off.push(off.last().unwrap() + d);
            }
            offsets.push(off);
            bases.push(b);
        }
        Ok(EnOperad { n, bases, offsets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self, r: usize) -> &EnBasis {
        &self.bases[r - 1]
    }

    pub fn element(&self, r: usize, i: u32) -> &PermSimplex {
        let off = &self.offsets[r - 1];
        let d = off.partition_point(|&o| o <= i as usize) - 1;
        &self.bases[r - 1].basis(d)[i as usize - off[d]]
    }

    pub fn index(&self, s: &PermSimplex) -> Option<u32> {
        let r = s.arity();
        let k = self.bases.get(r - 1)?.index_of(s)?;
        Some((self.offsets[r - 1][s.degree()] + k) as u32)
    }
}

impl Operad for EnOperad {
    fn max_arity(&self) -> usize {
        self.bases.len()
    }

    fn dim(&self, r: usize) -> usize {
        self.bases.get(r - 1).map_or(0, |b| b.len())
    }

    fn degree(&self, r: usize, i: u32) -> i64 {
        self.element(r, i).degree() as i64
    }

    fn label(&self, r: usize, i: u32) -> String {
        self.element(r, i).to_string()
    }

    fn differential(&self, r: usize, i: u32) -> SparseVec {
        let s = self.element(r, i);
        let mut out = Vec::new();
        for k in 0..=s.degree() {
            if let Some(f) = s.face(k) {
                out.push((self.index(&f).expect("faces stay in E_n"), if k % 2 == 0 { 1 } else { -1 }));
            }
        }
        normalize(out)
    }

    fn act(&self, r: usize, w: &Perm, i: u32) -> SparseVec {
        vec![(self.index(&self.element(r, i).act(w)).expect("E_n is Σ-stable"), 1)]
    }

    fn compose(&self, s: usize, a: u32, e: usize, t: usize, b: u32) -> SparseVec {
        let (u, v) = (self.element(s, a), self.element(t, b));
        normalize(
            compose_simplices(u, e, v)
                .into_iter()
                .map(|(w, c)| (self.index(&w).expect("E_n is a suboperad"), c))
                .collect(),
        )
    }
}

/// Evaluates a canonical tree whose vertex labels are basis indices of `op`
/// at the vertex arity. Children are composed left to right, so the
/// preorder tensor order needs no Koszul reordering.
pub fn evaluate_tree<O: Operad + ?Sized>(op: &O, tree: &Tree) -> Result<SparseVec> {
    let r = tree.arity();
    if r > op.max_arity() {
        return Err(Error::Dimension(format!("tree of arity {} beyond the truncation {}", r, op.max_arity())));
    }
    Ok(eval_rec(op, tree).1)
}

fn eval_rec<O: Operad + ?Sized>(op: &O, tree: &Tree) -> (Vec<u8>, SparseVec) {
    match tree {
        Tree::Leaf(l) => (vec![*l], vec![(0, 1)]),
        Tree::Node { label, children } => {
            let k = children.len();
            let mut x: SparseVec = vec![(*label, 1)];
            let mut arity = k;
            let mut pos = 1;
            let mut order: Vec<u8> = Vec::new();
            for c in children {
                let (leaves, y) = eval_rec(op, c);
                let t = leaves.len();
                x = compose_vec(op, arity, &x, pos, t, &y);
                arity += t - 1;
                pos += t;
                order.extend(leaves);
            }
            let mut sorted = order.clone();
            sorted.sort_unstable();
            let rho = Perm(order.iter().map(|l| sorted.binary_search(l).unwrap() as u8 + 1).collect());
            if !rho.is_identity() {
                x = act_vec(op, arity, &rho, &x);
            }
            (sorted, x)
        }
    }
}

/// Canonicalizes a tree labeled by basis elements of `op`, with Koszul signs
/// for the operad degrees.
pub fn canonical_tree<O: Operad + ?Sized>(op: &O, tree: &Tree) -> Vec<(Tree, i64)> {
    tree.canonicalize(&|k, l| op.degree(k, l), &|k, l, w| op.act(k, w, l))
}

fn koszul(a: i64, b: i64) -> i64 {
    if (a * b).rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// Failure of an operad axiom on explicit basis elements.
fn violation(what: &str, detail: String) -> Error {
    Error::Verification(format!("{} fails: {}", what, detail))
}

/// Random checks of associativity, equivariance, units, the action and the
/// Leibniz rule on basis elements with `arity <= max_arity`.
pub fn check_axioms<O: Operad + ?Sized>(op: &O, max_arity: usize, cases: usize, rng: &mut impl Rng) -> Result<()> {
    let max_arity = max_arity.min(op.max_arity());
    let pick = |rng: &mut dyn rand::RngCore, r: usize| -> u32 { rng.gen_range(0..op.dim(r) as u32) };
    for r in 1..=max_arity {
        for i in 0..op.dim(r) as u32 {
            if op.compose(1, 0, 1, r, i) != vec![(i, 1)] {
                return Err(violation("left unit", op.label(r, i)));
            }
            for e in 1..=r {
                if op.compose(r, i, e, 1, 0) != vec![(i, 1)] {
                    return Err(violation("right unit", op.label(r, i)));
                }
            }
        }
    }
    if max_arity < 2 {
        return Ok(());
    }
    for _ in 0..cases {
        let s = rng.gen_range(2..=max_arity);
        let t = rng.gen_range(1..=max_arity + 1 - s);
        let a = pick(rng, s);
        let b = pick(rng, t);
        let e = rng.gen_range(1..=s);
        let r = s + t - 1;
        let ab = op.compose(s, a, e, t, b);
        let da = op.degree(s, a);
        // Leibniz rule
        let lhs = differential_vec(op, r, &ab);
        let left = compose_vec(op, s, &op.differential(s, a), e, t, &vec![(b, 1)]);
        let right = compose_vec(op, s, &vec![(a, 1)], e, t, &op.differential(t, b));
        let rhs = add(&left, &scale(&right, if da % 2 == 0 { 1 } else { -1 }));
        if lhs != rhs {
            return Err(violation("Leibniz rule", format!("{} o_{} {}", op.label(s, a), e, op.label(t, b))));
        }
        // equivariance
        let rho = Perm::all(s).choose(rng).unwrap().clone();
        let pi = Perm::all(t).choose(rng).unwrap().clone();
        let lhs = compose_vec(op, s, &op.act(s, &rho, a), rho.at(e) as usize, t, &op.act(t, &pi, b));
        let rhs = act_vec(op, r, &rho.block(e, &pi), &ab);
        if lhs != rhs {
            return Err(violation("equivariance", format!("{} o_{} {}", op.label(s, a), e, op.label(t, b))));
        }
        // action
        let w1 = Perm::all(s).choose(rng).unwrap().clone();
        let lhs = act_vec(op, s, &w1, &op.act(s, &rho, a));
        if lhs != op.act(s, &w1.compose(&rho), a) {
            return Err(violation("action", op.label(s, a)));
        }
        // associativity, when a third element fits
        if r < max_arity {
            let q = rng.gen_range(1..=max_arity - r + 1);
            let c = pick(rng, q);
            let f = rng.gen_range(1..=t);
            let lhs = compose_vec(op, r, &ab, e + f - 1, q, &vec![(c, 1)]);
            let bc = op.compose(t, b, f, q, c);
            let rhs = compose_vec(op, s, &vec![(a, 1)], e, t + q - 1, &bc);
            if lhs != rhs {
                return Err(violation("sequential associativity", format!("{} o_{} {} o_{} {}", op.label(s, a), e, op.label(t, b), f, op.label(q, c))));
            }
            {
                let e2 = rng.gen_range(1..=s);
                if e2 != e {
                    let (e1, e2, x1, t1, x2, t2) = if e < e2 { (e, e2, b, t, c, q) } else { (e2, e, c, q, b, t) };
                    let (d1, d2) = (op.degree(t1, x1), op.degree(t2, x2));
                    let first = compose_vec(op, s, &vec![(a, 1)], e2, t2, &vec![(x2, 1)]);
                    let lhs = compose_vec(op, s + t2 - 1, &first, e1, t1, &vec![(x1, 1)]);
                    let second = compose_vec(op, s, &vec![(a, 1)], e1, t1, &vec![(x1, 1)]);
                    let rhs = compose_vec(op, s + t1 - 1, &second, e2 + t1 - 1, t2, &vec![(x2, 1)]);
                    if lhs != scale(&rhs, koszul(d1, d2)) {
                        return Err(violation("parallel associativity", format!("{} with slots {}, {}", op.label(s, a), e1, e2)));
                    }
                }
            }
        }
    }
    Ok(())
}
