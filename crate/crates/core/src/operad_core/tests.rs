use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::perm::Perm;

fn random_labels(rng: &mut impl Rng, op: &impl Operad, shape: &Tree) -> Tree {
    match shape {
        Tree::Leaf(l) => Tree::Leaf(*l),
        Tree::Node { children, .. } => {
            let k = children.len();
            let label = rng.gen_range(0..op.dim(k) as u32);
            Tree::Node { label, children: children.iter().map(|c| random_labels(rng, op, c)).collect() }
        }
    }
}

#[test]
fn barratt_eccles_truncation_is_an_operad() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let e2 = EnOperad::new(2, 4).unwrap();
    check_axioms(&e2, 4, 3000, &mut rng).unwrap();
    let t = GradedOperadTruncation::from_operad(&EnOperad::new(3, 3).unwrap(), 3);
    check_axioms(&t, 3, 2000, &mut rng).unwrap();
}

#[test]
fn suspensions_are_operads() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let t = GradedOperadTruncation::from_operad(&EnOperad::new(2, 3).unwrap(), 3);
    for k in [-3i64, -2, -1, 1, 2, 3] {
        let s = operadic_suspension(&t, k);
        check_axioms(&s, 3, 1500, &mut rng).unwrap_or_else(|e| panic!("k = {}: {}", k, e));
    }
    let a = Presentation::associative().quotient(4).unwrap().truncation().unwrap();
    check_axioms(&operadic_suspension(&a, -1), 4, 1500, &mut rng).unwrap();
}

#[test]
fn suspension_round_trip() {
    let t = GradedOperadTruncation::from_operad(&EnOperad::new(2, 3).unwrap(), 3);
    let same = operadic_suspension(&t, 0);
    let back = operadic_suspension(&operadic_suspension(&t, 1), -1);
    let twice = operadic_suspension(&operadic_suspension(&t, 2), -2);
    for r in 1..=3 {
        for other in [&same, &back, &twice] {
            assert_eq!(other.component(r).degrees, t.component(r).degrees);
            assert_eq!(other.component(r).action, t.component(r).action);
        }
    }
    for s in 2..=3 {
        for tt in 2..=4 - s {
            for e in 1..=s {
                for a in 0..t.dim(s) as u32 {
                    for b in 0..t.dim(tt) as u32 {
                        let x = t.compose(s, a, e, tt, b);
                        assert_eq!(back.compose(s, a, e, tt, b), x);
                        assert_eq!(twice.compose(s, a, e, tt, b), x);
                    }
                }
            }
        }
    }
}

#[test]
fn corolla_and_two_vertex_evaluation() {
    let e = EnOperad::new(2, 4).unwrap();
    for i in 0..e.dim(3) as u32 {
        assert_eq!(evaluate_tree(&e, &Tree::corolla(i, 3)).unwrap(), vec![(i, 1)]);
    }
    // interval leaf sets give plain partial composites
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let p = rng.gen_range(0..e.dim(3) as u32);
        let q = rng.gen_range(0..e.dim(2) as u32);
        let slot = rng.gen_range(1..=3);
        let inner: Vec<u8> = vec![slot as u8, slot as u8 + 1];
        let t = two_vertex_tree(4, &inner, p, q);
        assert_eq!(evaluate_tree(&e, &t).unwrap(), e.compose(3, p, slot, 2, q));
    }
}

#[test]
fn evaluation_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let e = GradedOperadTruncation::from_operad(&EnOperad::new(2, 4).unwrap(), 4);
    let se = operadic_suspension(&e, 2);
    let g = Presentation::gerstenhaber(2).quotient(4).unwrap().truncation().unwrap();
    for op in [&e, &se, &g] {
        for _ in 0..300 {
            let r = rng.gen_range(2..=4);
            let m = rng.gen_range(1..r);
            let shapes = reduced_shapes(r, m);
            let shape = shapes.choose(&mut rng).unwrap();
            let t = random_labels(&mut rng, op, shape);
            let w = Perm::all(r).choose(&mut rng).unwrap().clone();
            let mut lhs = Vec::new();
            for (u, c) in canonical_tree(op, &t.relabel(&w)) {
                lhs.extend(evaluate_tree(op, &u).unwrap().into_iter().map(|(i, x)| (i, x * c)));
            }
            let rhs = act_vec(op, r, &w, &evaluate_tree(op, &t).unwrap());
            assert_eq!(normalize(lhs), rhs, "tree {} under {}", t, w);
        }
    }
}

#[test]
fn two_parenthesizations_agree() {
    // ((a o_1 b) o_1 c) against a o_1 (b o_1 c) through tree evaluation
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let e = EnOperad::new(2, 4).unwrap();
    for _ in 0..100 {
        let (a, b, c) = (rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(0..4));
        let t = Tree::node(a, vec![Tree::node(b, vec![Tree::node(c, vec![Tree::Leaf(1), Tree::Leaf(2)]), Tree::Leaf(3)]), Tree::Leaf(4)]);
        let direct = compose_vec(&e, 3, &e.compose(2, a, 1, 2, b), 1, 2, &vec![(c, 1)]);
        let nested = compose_vec(&e, 2, &vec![(a, 1)], 1, 3, &e.compose(2, b, 1, 2, c));
        assert_eq!(direct, nested);
        assert_eq!(evaluate_tree(&e, &t).unwrap(), direct);
    }
}

#[test]
fn two_vertex_count_oracle() {
    // brute force: trees obtained by grafting a t-corolla into an s-corolla
    // and relabeling, modulo canonicalization
    for r in 3..=5 {
        let mut seen = std::collections::BTreeSet::new();
        for s in 2..r {
            let t = r + 1 - s;
            for e in 1..=s {
                let g = Tree::corolla(0, s).graft(e, &Tree::corolla(0, t)).unwrap();
                for w in Perm::all(r) {
                    let c = g.relabel(&w).canonicalize(&|_, _| 0, &|_, l, _| vec![(l, 1)]);
                    seen.insert(c[0].0.clone());
                }
            }
        }
        // C(r, k) inner leaf sets for 2 <= k < r
        let expected: usize = (2..r).map(|k| crate::barratt_eccles::binomial(r, k)).sum();
        assert_eq!(seen.len(), expected);
        assert_eq!(reduced_shapes(r, 2).len(), expected);
    }
}
