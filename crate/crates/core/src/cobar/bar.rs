//! The bar differential on labeled trees. The cobar differential is its
//! transpose under the dual-basis pairing.

use crate::operad_core::{Operad, Tree};

/// Flattened tree: vertices in preorder.
struct Arena {
    nodes: Vec<ArenaNode>,
}

#[derive(Clone)]
struct ArenaNode {
    label: u32,
    children: Vec<Child>,
}

#[derive(Clone, Copy)]
enum Child {
    Leaf(u8),
    Vertex(usize),
}

impl Arena {
    fn from_tree(t: &Tree) -> Arena {
        let mut nodes = Vec::new();
        push(t, &mut nodes);
        Arena { nodes }
    }

    fn to_tree(&self, i: usize) -> Tree {
        let n = &self.nodes[i];
        Tree::Node {
            label: n.label,
            children: n
                .children
                .iter()
                .map(|c| match c {
                    Child::Leaf(l) => Tree::Leaf(*l),
                    Child::Vertex(j) => self.to_tree(*j),
                })
                .collect(),
        }
    }

    fn arity(&self, i: usize) -> usize {
        self.nodes[i].children.len()
    }
}

fn push(t: &Tree, nodes: &mut Vec<ArenaNode>) -> usize {
    let Tree::Node { label, children } = t else { panic!("a leaf has no vertices") };
    let me = nodes.len();
    nodes.push(ArenaNode { label: *label, children: Vec::new() });
    let mut kids = Vec::with_capacity(children.len());
    for c in children {
        kids.push(match c {
            Tree::Leaf(l) => Child::Leaf(*l),
            Tree::Node { .. } => Child::Vertex(push(c, nodes)),
        });
    }
    nodes[me].children = kids;
    me
}

fn parity(x: i64) -> i64 {
    if x.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// Degree of `⊗ s x_v` in the bar construction.
pub fn bar_degree<O: Operad + ?Sized>(op: &O, t: &Tree) -> i64 {
    t.total_degree(&|k, l| op.degree(k, l) + 1)
}

/// `Σ_i ± s x_1 ⊗ ... ⊗ s(d x_i) ⊗ ...` with `d(sx) = -s(dx)`.
pub fn internal_part<O: Operad + ?Sized>(op: &O, t: &Tree) -> Vec<(Tree, i64)> {
    let arena = Arena::from_tree(t);
    let mut out = Vec::new();
    let mut prefix = 0i64;
    for i in 0..arena.nodes.len() {
        let k = arena.arity(i);
        let x = arena.nodes[i].label;
        let sign = -parity(prefix);
        for (y, c) in op.differential(k, x) {
            let mut a = Arena { nodes: arena.nodes.clone() };
            a.nodes[i].label = y;
            out.push((a.to_tree(0), sign * c));
        }
        prefix += op.degree(k, x) + 1;
    }
    out
}

/// Edge contractions `s x_a ⊗ s x_b ↦ (-1)^{|x_a|} s(x_a ∘_e x_b)` after
/// moving `s x_b` next to `s x_a`, followed by canonicalization. The
/// contraction has degree -1 and passes the vertices before `a`.
pub fn twist_part<O: Operad + ?Sized>(op: &O, t: &Tree) -> Vec<(Tree, i64)> {
    let arena = Arena::from_tree(t);
    let bdeg: Vec<i64> = arena.nodes.iter().enumerate().map(|(i, n)| op.degree(arena.arity(i), n.label) + 1).collect();
    let mut out = Vec::new();
    for a in 0..arena.nodes.len() {
        for (pos, child) in arena.nodes[a].children.iter().enumerate() {
            let Child::Vertex(b) = *child else { continue };
            let before: i64 = bdeg[..a].iter().sum();
            let between: i64 = bdeg[a + 1..b].iter().sum();
            let (ka, kb) = (arena.arity(a), arena.arity(b));
            let (xa, xb) = (arena.nodes[a].label, arena.nodes[b].label);
            let sign = parity(before + bdeg[b] * between + op.degree(ka, xa));
            let mut merged_children = arena.nodes[a].children[..pos].to_vec();
            merged_children.extend(arena.nodes[b].children.iter().copied());
            merged_children.extend(arena.nodes[a].children[pos + 1..].iter().copied());
            for (z, c) in op.compose(ka, xa, pos + 1, kb, xb) {
                let mut nodes = arena.nodes.clone();
                nodes[a] = ArenaNode { label: z, children: merged_children.clone() };
                let tree = Arena { nodes }.to_tree(0);
                for (u, d) in tree.canonicalize(&|k, l| op.degree(k, l) + 1, &|k, l, w| op.act(k, w, l)) {
                    out.push((u, sign * c * d));
                }
            }
        }
    }
    out
}

/// Full bar differential.
pub fn bar_differential<O: Operad + ?Sized>(op: &O, t: &Tree) -> Vec<(Tree, i64)> {
    let mut out = internal_part(op, t);
    out.extend(twist_part(op, t));
    out
}

/// Sums terms with equal trees and drops zeros.
pub fn collect(terms: Vec<(Tree, i64)>) -> Vec<(Tree, i64)> {
    let mut map: std::collections::BTreeMap<Tree, i64> = std::collections::BTreeMap::new();
    for (t, c) in terms {
        *map.entry(t).or_insert(0) += c;
    }
    map.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Applies `f` to every term of `x` and collects.
pub fn apply_linear(x: &[(Tree, i64)], f: impl Fn(&Tree) -> Vec<(Tree, i64)>) -> Vec<(Tree, i64)> {
    let mut out = Vec::new();
    for (t, c) in x {
        out.extend(f(t).into_iter().map(|(u, d)| (u, c * d)));
    }
    collect(out)
}
