use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::barratt_eccles::compose_simplices;
use crate::barratt_eccles::tests::random_below;
use crate::linalg::Ring;
use crate::perm::Perm;

pub(crate) fn random_kappa(rng: &mut impl Rng, n: usize, r: usize) -> WeightSystem {
    let mu = (0..r * (r - 1) / 2).map(|_| rng.gen_range(0..n as i64)).collect();
    WeightSystem::new(mu, Perm::all(r).choose(rng).unwrap().clone()).unwrap()
}

/// A weight system above `k`: raise some weights, and reorient only raised pairs.
fn random_above(rng: &mut impl Rng, k: &WeightSystem) -> WeightSystem {
    let r = k.arity();
    loop {
        let mu: Vec<i64> = k.weights().iter().map(|&w| w + rng.gen_range(0..2)).collect();
        let sigma = Perm::all(r).choose(rng).unwrap().clone();
        let cand = WeightSystem::new(mu, sigma).unwrap();
        if k.leq(&cand).unwrap() {
            return cand;
        }
    }
}

#[test]
fn operad_axioms_exhaustive() {
    let small: Vec<WeightSystem> = (1..=3).flat_map(|r| enumerate_kn(2, r)).collect();
    let unit = WeightSystem::unit();
    for a in &small {
        for e in 1..=a.arity() {
            assert_eq!(&a.compose(e, &unit).unwrap(), a);
        }
        assert_eq!(&unit.compose(1, a).unwrap(), a);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3000 {
        let a = small.choose(&mut rng).unwrap();
        let b = small.choose(&mut rng).unwrap();
        let c = small.choose(&mut rng).unwrap();
        let (s, t) = (a.arity(), b.arity());
        let e = rng.gen_range(1..=s);
        let f = rng.gen_range(1..=t);
        // sequential
        let lhs = a.compose(e, b).unwrap().compose(e + f - 1, c).unwrap();
        let rhs = a.compose(e, &b.compose(f, c).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // parallel
        if s >= 2 {
            let (e1, e2) = loop {
                let x = rng.gen_range(1..=s);
                let y = rng.gen_range(1..=s);
                if x < y {
                    break (x, y);
                }
            };
            let lhs = a.compose(e2, c).unwrap().compose(e1, b).unwrap();
            let rhs = a.compose(e1, b).unwrap().compose(e2 + t - 1, c).unwrap();
            assert_eq!(lhs, rhs);
        }
        // equivariance
        let rho = Perm::all(s).choose(&mut rng).unwrap().clone();
        let pi = Perm::all(t).choose(&mut rng).unwrap().clone();
        let lhs = a.act(&rho).unwrap().compose(rho.at(e) as usize, &b.act(&pi).unwrap()).unwrap();
        let rhs = a.compose(e, b).unwrap().act(&rho.block(e, &pi)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn kappa_is_functorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let (s, t) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let u = random_below(&mut rng, s, 4);
        let v = random_below(&mut rng, t, 4);
        let e = rng.gen_range(1..=s);
        let expected = WeightSystem::of_simplex(&u).compose(e, &WeightSystem::of_simplex(&v)).unwrap();
        for (w, _) in compose_simplices(&u, e, &v) {
            assert_eq!(WeightSystem::of_simplex(&w), expected, "{} o_{} {}", u, e, v);
        }
        let rho = Perm::all(s).choose(&mut rng).unwrap().clone();
        assert_eq!(WeightSystem::of_simplex(&u.act(&rho)), WeightSystem::of_simplex(&u).act(&rho).unwrap());
        for k in 0..=u.degree() {
            if let Some(f) = u.face(k) {
                assert!(WeightSystem::of_simplex(&f).leq(&WeightSystem::of_simplex(&u)).unwrap());
            }
        }
    }
}

#[test]
fn union_of_cells() {
    for (n, r) in [(1, 3), (2, 3), (3, 3), (2, 4)] {
        let all: std::collections::HashSet<_> = crate::barratt_eccles::en_basis(n, r).unwrap().iter().cloned().collect();
        assert_eq!(union_cells(n, r).unwrap(), all, "n = {}, r = {}", n, r);
    }
}

#[test]
fn cells_are_acyclic_and_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let sampled: Vec<WeightSystem> = (0..6).map(|_| random_kappa(&mut rng, 3, 3)).collect();
    for kappa in enumerate_kn(2, 3).iter().step_by(5).chain(&sampled) {
        let h = build_cell(CellKind::E, 0, kappa).unwrap().complex().unwrap().homology(Ring::Z);
        assert_eq!(h.support(), vec![0], "{}", kappa);
        assert_eq!(h.betti(0), 1);
        build_cell(CellKind::D, 2, kappa).unwrap().check_closed().unwrap();
    }
}

#[test]
fn all_weights_top_latching() {
    // κ with every weight n - 1: the latching object is every dual basis
    // element except those whose complement weight system is κ itself
    let n = 2;
    for sigma in Perm::all(3) {
        let kappa = WeightSystem::new(vec![1; 3], sigma).unwrap();
        let l = latching(n, &kappa).unwrap();
        let expected: Vec<_> = crate::barratt_eccles::en_basis(n, 3)
            .unwrap()
            .iter()
            .filter(|s| {
                let k = dual_kappa(s, n);
                k != kappa && k.leq(&kappa).unwrap()
            })
            .cloned()
            .collect();
        let mut got = l.basis.clone();
        got.sort();
        let mut expected = expected;
        expected.sort();
        assert_eq!(got, expected);
    }
}

#[test]
fn minimal_kappa_has_no_latching() {
    // in E_1(2) every complement is (0, σ), never strictly below (0, id)
    let kappa = WeightSystem::new(vec![0], Perm::identity(2)).unwrap();
    let l = latching(1, &kappa).unwrap();
    assert!(l.basis.is_empty());
}

proptest! {
    #[test]
    fn composition_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, t) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let a = random_kappa(&mut rng, 2, s);
        let b = random_kappa(&mut rng, 2, t);
        let c = random_above(&mut rng, &a);
        let d = random_above(&mut rng, &b);
        let e = rng.gen_range(1..=s);
        prop_assert!(a.compose(e, &b).unwrap().leq(&c.compose(e, &d).unwrap()).unwrap());
    }

    #[test]
    fn action_is_a_poset_morphism(seed in any::<u64>(), r in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_kappa(&mut rng, 3, r);
        let b = random_above(&mut rng, &a);
        let w = Perm::all(r).choose(&mut rng).unwrap().clone();
        let (wa, wb) = (a.act(&w).unwrap(), b.act(&w).unwrap());
        prop_assert!(wa.leq(&wb).unwrap());
        prop_assert_eq!(wa.total_degree(), a.total_degree());
        prop_assert_eq!(a.act(&Perm::identity(r)).unwrap(), a.clone());
        if a.lt(&b) {
            prop_assert!(a.total_degree() < b.total_degree());
        }
    }

    #[test]
    fn complement_reverses_order(seed in any::<u64>(), r in 2usize..5, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_kappa(&mut rng, n, r);
        let b = random_kappa(&mut rng, n, r);
        prop_assert_eq!(a.complement(n).complement(n), a.clone());
        prop_assert!(a.complement(n).in_kn(n));
        prop_assert_eq!(a.leq(&b).unwrap(), b.complement(n).leq(&a.complement(n)).unwrap());
    }

    #[test]
    fn dual_cells_are_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_kappa(&mut rng, 2, 3);
        let b = random_above(&mut rng, &a);
        let da = build_cell(CellKind::D, 2, &a).unwrap();
        let db = build_cell(CellKind::D, 2, &b).unwrap();
        prop_assert!(da.iter().all(|s| db.contains(s)));
    }
}
