use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// A rooted tree with leaves labeled by `1..r` and vertices carrying an index
/// into a generating object. Children of a vertex are listed in input order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(u8),
    Node { label: u32, children: Vec<Tree> },
}

impl Tree {
    /// The corolla with leaves `1..r` in order.
    pub fn corolla(label: u32, r: usize) -> Tree {
        Tree::Node { label, children: (1..=r as u8).map(Tree::Leaf).collect() }
    }

    pub fn node(label: u32, children: Vec<Tree>) -> Tree {
        Tree::Node { label, children }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node { children, .. } => children.iter().map(Tree::arity).sum(),
        }
    }

    pub fn min_leaf(&self) -> u8 {
        match self {
            Tree::Leaf(l) => *l,
            Tree::Node { children, .. } => children.iter().map(Tree::min_leaf).min().expect("vertex with inputs"),
        }
    }

    /// Leaf labels in planar order.
    pub fn leaves(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u8>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node { children, .. } => 1 + children.iter().map(Tree::vertex_count).sum::<usize>(),
        }
    }

    /// Vertices in preorder as `(arity, label)`.
    pub fn vertices(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<(usize, u32)>) {
        if let Tree::Node { label, children } = self {
            out.push((children.len(), *label));
            children.iter().for_each(|c| c.collect_vertices(out));
        }
    }

    /// Every vertex has at least two inputs.
    /// The same shape with vertex labels replaced, in preorder.
    pub fn with_labels(&self, labels: &[u32]) -> Tree {
        let mut k = 0;
        let t = self.with_labels_rec(labels, &mut k);
        assert_eq!(k, labels.len(), "label count does not match the vertex count");
        t
    }

    fn with_labels_rec(&self, labels: &[u32], k: &mut usize) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(*l),
            Tree::Node { children, .. } => {
                let label = labels[*k];
                *k += 1;
                Tree::Node { label, children: children.iter().map(|c| c.with_labels_rec(labels, k)).collect() }
            }
        }
    }

    pub fn is_reduced(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Node { children, .. } => children.len() >= 2 && children.iter().all(Tree::is_reduced),
        }
    }

    /// Children recursively ordered by minimal leaf.
    pub fn is_canonical(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Node { children, .. } => {
                children.windows(2).all(|w| w[0].min_leaf() < w[1].min_leaf()) && children.iter().all(Tree::is_canonical)
            }
        }
    }

    /// Renames leaf `l` to `w(l)`.
    pub fn relabel(&self, w: &Perm) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(w.at(*l as usize)),
            Tree::Node { label, children } => {
                Tree::Node { label: *label, children: children.iter().map(|c| c.relabel(w)).collect() }
            }
        }
    }

    /// Replaces leaf labels through `f`.
    pub fn map_leaves(&self, f: &impl Fn(u8) -> u8) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Node { label, children } => {
                Tree::Node { label: *label, children: children.iter().map(|c| c.map_leaves(f)).collect() }
            }
        }
    }

    /// Grafts `other` into leaf `e`, shifting the leaves of `other` by
    /// `j ↦ e + j - 1` and the leaves `i > e` of `self` by `i ↦ i + t - 1`.
    /// The result is not canonicalized.
    pub fn graft(&self, e: usize, other: &Tree) -> Result<Tree> {
        let (s, t) = (self.arity(), other.arity());
        if e == 0 || e > s {
            return Err(Error::Invalid(format!("slot {} out of range for arity {}", e, s)));
        }
        let shifted = other.map_leaves(&|j| j + e as u8 - 1);
        Ok(self.graft_rec(e as u8, &shifted, t as u8))
    }

    fn graft_rec(&self, e: u8, inner: &Tree, t: u8) -> Tree {
        match self {
            Tree::Leaf(l) if *l == e => inner.clone(),
            Tree::Leaf(l) if *l > e => Tree::Leaf(l + t - 1),
            Tree::Leaf(l) => Tree::Leaf(*l),
            Tree::Node { label, children } => Tree::Node {
                label: *label,
                children: children.iter().map(|c| c.graft_rec(e, inner, t)).collect(),
            },
        }
    }

    /// Canonical form with signs. `degree(arity, label)` is the degree used
    /// for Koszul signs when subtrees are permuted; `act(arity, label, ρ)`
    /// returns `ρ·label` where input `i` is renamed `ρ(i)`.
    pub fn canonicalize<D, A>(&self, degree: &D, act: &A) -> Vec<(Tree, i64)>
    where
        D: Fn(usize, u32) -> i64,
        A: Fn(usize, u32, &Perm) -> Vec<(u32, i64)>,
    {
        match self {
            Tree::Leaf(_) => vec![(self.clone(), 1)],
            Tree::Node { label, children } => {
                let k = children.len();
                let mins: Vec<u8> = children.iter().map(Tree::min_leaf).collect();
                let mut order: Vec<usize> = (0..k).collect();
                order.sort_by_key(|&i| mins[i]);
                // rank[i] = new position of child i
                let mut rank = vec![0u8; k];
                for (pos, &i) in order.iter().enumerate() {
                    rank[i] = pos as u8 + 1;
                }
                let degs: Vec<i64> = children.iter().map(|c| c.total_degree(degree)).collect();
                let mut sign = 1i64;
                for i in 0..k {
                    for j in i + 1..k {
                        if rank[i] > rank[j] && degs[i] % 2 != 0 && degs[j] % 2 != 0 {
                            sign = -sign;
                        }
                    }
                }
                let rho = Perm(rank);
                let labels = if rho.is_identity() { vec![(*label, 1)] } else { act(k, *label, &rho) };
                // expand the product of children combinations in the new order
                let mut partial: Vec<(Vec<Tree>, i64)> = vec![(Vec::with_capacity(k), sign)];
                for &i in &order {
                    let options = children[i].canonicalize(degree, act);
                    let mut next = Vec::with_capacity(partial.len() * options.len());
                    for (prefix, c) in &partial {
                        for (t, d) in &options {
                            let mut v = prefix.clone();
                            v.push(t.clone());
                            next.push((v, c * d));
                        }
                    }
                    partial = next;
                }
                let mut out = Vec::new();
                for (l, a) in labels {
                    for (ch, c) in &partial {
                        out.push((Tree::Node { label: l, children: ch.clone() }, a * c));
                    }
                }
                out
            }
        }
    }

    /// Sum of `degree(arity, label)` over vertices.
    pub fn total_degree<D: Fn(usize, u32) -> i64>(&self, degree: &D) -> i64 {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node { label, children } => {
                degree(children.len(), *label) + children.iter().map(|c| c.total_degree(degree)).sum::<i64>()
            }
        }
    }

    /// Text form `label(child, ...)` with leaves as integers.
    pub fn render(&self, name: &impl Fn(usize, u32) -> String) -> String {
        match self {
            Tree::Leaf(l) => l.to_string(),
            Tree::Node { label, children } => {
                let inner: Vec<String> = children.iter().map(|c| c.render(name)).collect();
                format!("{}({})", name(children.len(), *label), inner.join(","))
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|_, l| format!("x{}", l)))
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Unlabeled reduced tree shapes on leaves `1..r` with exactly `m` vertices,
/// in canonical form, with every vertex labeled 0.
pub fn reduced_shapes(r: usize, m: usize) -> Vec<Tree> {
    let leaves: Vec<u8> = (1..=r as u8).collect();
    let mut out = shapes_on(&leaves, m);
    out.sort();
    out
}

fn shapes_on(leaves: &[u8], m: usize) -> Vec<Tree> {
    if leaves.len() == 1 {
        return if m == 0 { vec![Tree::Leaf(leaves[0])] } else { Vec::new() };
    }
    if m == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // the root partitions the leaves into at least two blocks; blocks are
    // listed by minimal element
    for blocks in set_partitions(leaves) {
        if blocks.len() < 2 {
            continue;
        }
        distribute(&blocks, m - 1, &mut Vec::new(), &mut out);
    }
    out
}

fn distribute(blocks: &[Vec<u8>], budget: usize, acc: &mut Vec<Tree>, out: &mut Vec<Tree>) {
    let k = acc.len();
    if k == blocks.len() {
        if budget == 0 {
            out.push(Tree::Node { label: 0, children: acc.clone() });
        }
        return;
    }
    for used in 0..=budget {
        for t in shapes_on(&blocks[k], used) {
            acc.push(t);
            distribute(blocks, budget - used, acc, out);
            acc.pop();
        }
    }
}

/// Set partitions of `items`, each block sorted, blocks ordered by minimum.
pub(crate) fn set_partitions(items: &[u8]) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u8>> = Vec::new();
    partitions_rec(items, 0, &mut blocks, &mut out);
    out
}

fn partitions_rec(items: &[u8], k: usize, blocks: &mut Vec<Vec<u8>>, out: &mut Vec<Vec<Vec<u8>>>) {
    if k == items.len() {
        out.push(blocks.clone());
        return;
    }
    for b in 0..blocks.len() {
        blocks[b].push(items[k]);
        partitions_rec(items, k + 1, blocks, out);
        blocks[b].pop();
    }
    blocks.push(vec![items[k]]);
    partitions_rec(items, k + 1, blocks, out);
    blocks.pop();
}

/// The canonical two-vertex tree whose inner vertex has leaf set `inner`
/// (sorted, `2 <= |inner| < r`): the root has the remaining leaves and the
/// inner vertex as inputs ordered by minimal leaf.
pub fn two_vertex_tree(r: usize, inner: &[u8], root_label: u32, inner_label: u32) -> Tree {
    let slot = two_vertex_slot(inner, r);
    let mut children: Vec<Tree> = (1..=r as u8).filter(|l| !inner.contains(l)).map(Tree::Leaf).collect();
    let sub = Tree::Node { label: inner_label, children: inner.iter().map(|&l| Tree::Leaf(l)).collect() };
    children.insert(slot - 1, sub);
    Tree::Node { label: root_label, children }
}

/// Slot of the inner vertex among the root inputs: `1 + #{i ∉ T : i < min T}`.
pub fn two_vertex_slot(inner: &[u8], r: usize) -> usize {
    let m = inner[0];
    1 + (1..=r as u8).filter(|l| *l < m && !inner.contains(l)).count()
}

/// Inner leaf sets of the two-vertex reduced trees on `r` leaves, in
/// lexicographic order.
pub fn two_vertex_sets(r: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << r) {
        let k = mask.count_ones() as usize;
        if k >= 2 && k < r {
            out.push((1..=r as u8).filter(|l| mask & (1 << (l - 1)) != 0).collect::<Vec<u8>>());
        }
    }
    out.sort();
    out
}
