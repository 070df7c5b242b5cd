use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::barratt_eccles::tests::random_simplex;
use crate::barratt_eccles::{en_basis, mu, tau_mu, Chain};
use crate::cobar::{cobar, en_dual};
use crate::linalg::{IntMatrix, Ring};
use crate::operad_core::EnOperad;
use crate::perm::Perm;

fn unit_vector(len: usize, i: usize) -> Vec<BigInt> {
    (0..len).map(|k| BigInt::from(i64::from(k == i))).collect()
}

#[test]
fn arity_two_coinvariants_have_rank_one_below_n() {
    for n in 1..=4 {
        for chi in 0..2 {
            let c = coinvariants(n, 2, chi).unwrap();
            for d in 0..n + 2 {
                assert_eq!(c.basis(d).len(), usize::from(d < n), "n={} chi={} d={}", n, chi, d);
            }
            if n > 1 {
                assert_eq!(c.basis(n - 1), &[mu(n - 1)]);
            }
        }
    }
}

#[test]
fn arity_two_coinvariants_mod_two() {
    for n in 1..=4 {
        let h = coinvariants(n, 2, 0).unwrap().complex().homology(Ring::Fp(2));
        for d in 0..n as i64 + 1 {
            assert_eq!(h.betti(d), usize::from(d < n as i64), "n={} d={}", n, d);
        }
    }
}

#[test]
fn arity_two_coinvariants_over_integers() {
    // E_n(2)_{Σ_2} computes the homology of RP^{n-1}
    for n in 1..=5 {
        let h = coinvariants(n, 2, 0).unwrap().complex().homology(Ring::Z);
        assert_eq!(h.betti(0), 1);
        for d in 1..n as i64 {
            let top_free = d == n as i64 - 1 && n % 2 == 0;
            assert_eq!(h.betti(d), usize::from(top_free), "n={} d={}", n, d);
            let torsion = if d % 2 == 1 && !top_free { vec![BigInt::from(2)] } else { vec![] };
            assert_eq!(h.torsion(d), torsion, "n={} d={}", n, d);
        }
    }
}

#[test]
fn three_strands_mod_three() {
    let trivial = coinvariants(2, 3, 0).unwrap().complex().homology(Ring::Fp(3));
    assert_eq!(trivial.betti_vector(0..=2), vec![1, 1, 0]);
    let signed = coinvariants(2, 3, 1).unwrap().complex().homology(Ring::Fp(3));
    assert_eq!(signed.betti_vector(0..=2), vec![0, 1, 1]);
}

#[test]
fn action_is_free_in_small_arities() {
    for (n, r) in [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        assert!(action_is_free(n, r).unwrap(), "n={} r={}", n, r);
    }
}

#[test]
fn projection_splits_the_section() {
    for (n, r, chi) in [(2, 3, 0), (2, 3, 1), (3, 3, 1)] {
        let c = coinvariants(n, r, chi).unwrap();
        for d in 0..=n * (r - 1) {
            let len = c.basis(d).len();
            for i in 0..len {
                let e = unit_vector(len, i);
                assert_eq!(c.project(&c.section(d, &e).unwrap()).unwrap(), e);
            }
        }
        for x in en_basis(n, r).unwrap().iter() {
            let (k, rep) = orbit_rep(x, chi);
            let g = Perm(x.vertex(0).to_vec());
            assert_eq!(rep.act(&g), *x);
            assert_eq!(k, character(&g.0, chi));
            let mut diff = Chain::from_simplex(x.clone());
            diff.add_term(rep, -k);
            assert!(c.project(&diff).unwrap().iter().all(|v| *v == BigInt::from(0)));
        }
    }
}

#[test]
fn coinvariant_differential_matches_boundary() {
    let c = coinvariants(2, 3, 1).unwrap();
    for d in 1..=3 {
        let m = c.complex().differential(d as i64);
        for (j, x) in c.basis(d).iter().enumerate() {
            let proj = c.project(&Chain::from_simplex(x.clone()).differential()).unwrap();
            let col: Vec<BigInt> = (0..m.rows()).map(|i| m.get(i, j)).collect();
            assert_eq!(col, proj);
            let mut by_rep = vec![BigInt::from(0); proj.len()];
            for (y, k) in coinvariant_boundary(x, 1) {
                by_rep[c.find(&y).unwrap()] += k;
            }
            assert_eq!(by_rep, proj);
        }
    }
}

#[test]
fn zero_omega_has_zero_adjoint() {
    let w = CoinvariantChain::zero(2, 3, 0, 3);
    assert!(w.is_zero());
    let th = adjoint(&w, 2, 3).unwrap();
    assert!(th.on_basis().unwrap().iter().all(|v| *v == 0));
}

#[test]
fn omega_base_cases() {
    let fam = solve_omega(3, 3).unwrap();
    let w = fam.get(1, 2).unwrap();
    assert_eq!(w.terms.iter().collect::<Vec<_>>(), vec![(&mu(0), &1)]);
    assert_eq!(w.support_orbit().len(), 2);
    assert!(fam.get(1, 3).unwrap().is_zero());
    for n in 1..=3 {
        let w = fam.get(n, 2).unwrap();
        let terms: Vec<_> = w.terms.iter().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, &mu(n - 1));
        assert_eq!(terms[0].1.abs(), 1);
        assert_eq!(w.chi, (n % 2) as u8);
    }
}

#[test]
fn omega_two_three_sits_in_degree_three() {
    let fam = solve_omega(2, 3).unwrap();
    let w = fam.get(2, 3).unwrap();
    assert_eq!(w.degree, 3);
    assert!(!w.is_zero());
    let checks = verify_omega(&fam).unwrap();
    assert!(checks.iter().any(|c| (c.n, c.r, c.degree) == (2, 3, 3)));
}

#[test]
fn arity_two_omega_is_a_cycle() {
    let fam = solve_omega(3, 2).unwrap();
    for n in 2..=3 {
        let w = fam.get(n, 2).unwrap();
        let c = coinvariants(n, 2, w.chi).unwrap();
        let v: Vec<BigInt> = c.basis(w.degree).iter().map(|x| BigInt::from(w.theta(x))).collect();
        let boundary = c.complex().differential(w.degree as i64).mul_vec(&v);
        assert!(boundary.iter().all(|b| *b == BigInt::from(0)), "n={}", n);
    }
}

#[test]
fn sigma_kernel_dimensions_add_up() {
    let k = sigma_kernel(2, 3, 2, 4).unwrap();
    let src = coinvariants(2, 3, 0).unwrap();
    let tgt = coinvariants(1, 3, 1).unwrap();
    for d in 2..=4usize {
        let mut tvec = Vec::new();
        for (j, s) in src.basis(d).iter().enumerate() {
            let image = s.cap_sgn().map(|(c, t)| {
                let (k, rep) = orbit_rep(&t, 1);
                (tgt.find(&rep).unwrap(), c * k)
            });
            if let Some((i, c)) = image {
                tvec.push((i, j, c));
            }
        }
        let rows = if d >= 2 { tgt.basis(d - 2).len() } else { 0 };
        let m = IntMatrix::from_triplets(rows, src.basis(d).len(), tvec);
        let rank = crate::linalg::rank_torsion(&m).rank;
        assert_eq!(k.complex.dim(d as i64), src.basis(d).len() - rank, "d={}", d);
    }
}

#[test]
fn obstruction_groups_vanish() {
    for (n, r) in [(2, 3), (3, 3)] {
        let top = n * (r - 1) - 1;
        let k = sigma_kernel(n, r, top - 2, top).unwrap();
        let h = k.complex.homology_in(&[top as i64 - 1], Ring::Z);
        assert_eq!(h.betti(top as i64 - 1), 0);
        assert!(h.torsion(top as i64 - 1).is_empty());
    }
}

#[test]
fn phi_one_factors_through_psi_one() {
    let fam = solve_omega(1, 3).unwrap();
    let psi = lift_psi(&fam, 1, 3).unwrap();
    for r in 2..=3 {
        let op = EnOperad::new(1, r).unwrap();
        let c = cobar(&en_dual(1, r).unwrap(), r).unwrap();
        for t in c.basis(0) {
            let lifted = psi.level(1).on_tree(&op, t).unwrap().augmentation();
            assert_eq!(lifted, phi_on_tree(&fam, &op, 1, t), "{}", t);
        }
    }
}

#[test]
fn arity_two_restriction_is_the_augmentation() {
    let fam = solve_omega(3, 2).unwrap();
    for n in 1..=3 {
        let level = &arity_two(n, fam.theta(n, &mu(n - 1)));
        for (x, y) in level {
            if generator_degree(n, x) == 0 {
                assert_eq!(y.augmentation(), fam.theta(n, x));
            } else {
                assert_eq!(y.augmentation(), 0);
            }
        }
    }
}

#[test]
fn arity_two_images_generate_homology() {
    let fam = solve_omega(3, 3).unwrap();
    let psi = lift_psi(&fam, 3, 2).unwrap();
    for n in 2..=3 {
        let level = psi.level(n);
        let product = level.image(&mu(n - 1));
        assert_eq!(product.degree(), 0);
        assert_eq!(product.augmentation().abs(), 1);
        let mut bracket = level.image(&mu(0));
        bracket.add(&level.image(&tau_mu(0)));
        assert_eq!(bracket.degree(), n - 1);
        assert!(bracket.differential().is_zero());
        let coeffs = [bracket.coefficient(&mu(n - 1)), bracket.coefficient(&tau_mu(n - 1))];
        assert_eq!(coeffs.map(i64::abs), [1, 1], "n={}", n);
    }
}

#[test]
fn arity_two_orientation_alternates() {
    let tau = Perm(vec![2, 1]);
    for n in 1..=5 {
        let images = arity_two(n, 1);
        for d in 0..n {
            let y = &images[&mu(n - 1 - d)];
            let target = if n % 2 == 1 { mu(d) } else { mu(d).act(&tau) };
            assert_eq!(y.len(), 1);
            assert_eq!(y.coefficient(&target).abs(), 1, "n={} d={}", n, d);
        }
    }
    assert!(arity_two(2, 0).is_empty());
}

#[test]
fn psi_two_three_verifies() {
    let fam = solve_omega(2, 3).unwrap();
    let psi = lift_psi(&fam, 2, 3).unwrap();
    let checks = verify_psi(&fam, &psi).unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(PsiCheck::all), "{:?}", checks);
}

#[test]
fn lift_rejects_unsolved_range() {
    let fam = solve_omega(2, 3).unwrap();
    assert!(lift_psi(&fam, 3, 3).is_err());
    assert!(lift_psi(&fam, 2, 4).is_err());
    assert!(build_phi(&fam, 2, 4).is_err());
}

#[test]
fn generator_degrees() {
    assert_eq!(generator_degree(2, &mu(0)), 1);
    assert_eq!(generator_degree(2, &mu(1)), 0);
    assert_eq!(generator_degree(3, &mu(0)), 2);
    assert_eq!(twisting_degree(2, 3), Some(3));
    assert_eq!(twisting_degree(3, 4), Some(8));
}

#[test]
fn omega_serializes() {
    let fam = solve_omega(2, 3).unwrap();
    let json = serde_json::to_string(&fam).unwrap();
    let back: TwistingElement = serde_json::from_str(&json).unwrap();
    assert_eq!(back.get(2, 3), fam.get(2, 3));
}

proptest! {
    #[test]
    fn orbit_rep_is_constant_on_orbits(seed in any::<u64>(), r in 2usize..5, d in 0usize..5, chi in 0u8..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_simplex(&mut rng, r, d);
        let (c, rep) = orbit_rep(&x, chi);
        prop_assert!(rep.is_identity_start());
        for g in Perm::all(r) {
            let (k, other) = orbit_rep(&x.act(&g), chi);
            prop_assert_eq!(&other, &rep);
            prop_assert_eq!(k, c * character(&g.0, chi));
        }
    }

    #[test]
    fn theta_is_equivariant(seed in any::<u64>(), d in 0usize..4) {
        let fam = omega_2_3();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_simplex(&mut rng, 3, d);
        prop_assume!(x.in_en(2));
        for g in Perm::all(3) {
            prop_assert_eq!(fam.theta(2, &x.act(&g)), fam.theta(2, &x));
        }
    }
}

fn omega_2_3() -> &'static TwistingElement {
    static FAM: std::sync::OnceLock<TwistingElement> = std::sync::OnceLock::new();
    FAM.get_or_init(|| solve_omega(2, 3).unwrap())
}
