use std::collections::BTreeMap;

use super::*;
use crate::barratt_eccles::{en_basis, PermSimplex};
use crate::linalg::Ring;
use crate::operad_core::{two_vertex_sets, two_vertex_tree, EnOperad, Operad, Presentation, Suspended, Tree};

fn graded_betti(c: &CobarComplex) -> (BTreeMap<i64, usize>, bool) {
    let h = c.homology(Ring::Z);
    let ranks = c.degrees().filter(|&d| h.betti(d) > 0).map(|d| (d, h.betti(d))).collect();
    (ranks, h.is_torsion_free())
}

#[test]
fn dual_of_e2_in_arity_two() {
    let d = en_dual(2, 2).unwrap();
    let c = d.component_complex(2).unwrap();
    // Λ² moves E_2(2) to degrees -2, -1, so the duals sit in 1 and 2
    assert_eq!(d.graded_dims(2), BTreeMap::from([(1, 2), (2, 2)]));
    let h = c.homology(Ring::Z);
    assert_eq!((h.betti(1), h.betti(2)), (1, 1));
    assert!(h.is_torsion_free());
}

#[test]
fn arity_two_has_no_twist() {
    for n in 1..=3 {
        let c = cobar(&en_dual(n, 2).unwrap(), 2).unwrap();
        for d in c.degrees() {
            assert!(c.twist(d).is_zero());
        }
    }
}

#[test]
fn square_zero_and_weights_small() {
    for (n, r) in [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2), (3, 3)] {
        let d = en_dual(n, r).unwrap();
        let c = cobar(&d, r).unwrap_or_else(|e| panic!("n={} r={}: {}", n, r, e));
        c.check_weights().unwrap();
    }
}

#[test]
fn associative_dual_is_koszul() {
    let a = Presentation::associative();
    let d = presented_dual(&a, 1, 4).unwrap();
    for r in 2..=4usize {
        let c = cobar(&d, r).unwrap();
        let (ranks, free) = graded_betti(&c);
        let fact: usize = (1..=r).product();
        assert_eq!(ranks, BTreeMap::from([(0, fact)]), "arity {}", r);
        assert!(free);
        // weight of the degree-0 trees is r - 1
        assert!(c.basis(0).iter().all(|t| t.vertex_count() == r - 1));
    }
}

#[test]
fn factorization_example() {
    let s = PermSimplex::parse("15234").unwrap();
    let f = cobar_dual_basis_differential(&s, &[2, 3, 5], 0).unwrap();
    assert_eq!(f.slot, 2);
    assert_eq!(f.root, PermSimplex::parse("123").unwrap());
    assert_eq!(f.inner, PermSimplex::parse("312").unwrap());
    // a block split in two never factors
    assert!(cobar_dual_basis_differential(&PermSimplex::parse("213").unwrap(), &[2, 3], 0).is_none());
    assert!(cobar_dual_basis_differential(&PermSimplex::parse("123|213").unwrap(), &[1, 3], 0).is_none());
}

/// Both computations of `∂` on corolla generators, as sorted entries
/// `(corolla, set, root, inner, coefficient)`.
fn routes(n: usize, r: usize) -> (Vec<(u32, usize, u32, u32, i64)>, Vec<(u32, usize, u32, u32, i64)>) {
    let en = EnOperad::new(n, r).unwrap();
    let op = Suspended::new(&en, n as i64);
    let sets = two_vertex_sets(r);
    let mut transpose = Vec::new();
    for (si, set) in sets.iter().enumerate() {
        let t = set.len();
        for u in 0..en.dim(r - t + 1) as u32 {
            for v in 0..en.dim(t) as u32 {
                for (tree, c) in collect(twist_part(&op, &two_vertex_tree(r, set, u, v))) {
                    let Tree::Node { label, .. } = tree else { unreachable!() };
                    transpose.push((label, si, u, v, c));
                }
            }
        }
    }
    transpose.sort_unstable();
    let mut factored = Vec::new();
    for x in 0..en.dim(r) as u32 {
        for (si, set) in sets.iter().enumerate() {
            if let Some(f) = cobar_dual_basis_differential(en.element(r, x), set, n) {
                factored.push((x, si, en.index(&f.root).unwrap(), en.index(&f.inner).unwrap(), f.sign));
            }
        }
    }
    factored.sort_unstable();
    (transpose, factored)
}

#[test]
fn routes_agree_on_e2_arity_three() {
    let (a, b) = routes(2, 3);
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn routes_agree_small() {
    for (n, r) in [(1, 3), (1, 4), (3, 3)] {
        let (a, b) = routes(n, r);
        assert_eq!(a, b, "n={} r={}", n, r);
    }
}

#[test]
fn rho2_matches_composition() {
    let d = en_dual(2, 3).unwrap();
    let comps = d.rho2_components(3).unwrap();
    assert_eq!(comps.len(), 3);
    for (_, _, m) in &comps {
        assert_eq!(m.rows(), 16);
        assert_eq!(m.cols(), en_basis(2, 3).unwrap().len());
        assert!(!m.is_zero());
    }
}

#[test]
fn lazy_matches_indexed() {
    let lazy = LazyEn::new(2, 3).unwrap();
    let en = EnOperad::new(2, 3).unwrap();
    for a in 0..en.dim(2) as u32 {
        for b in 0..en.dim(2) as u32 {
            for e in 1..=2 {
                let x: BTreeMap<PermSimplex, i64> =
                    lazy.compose(2, a, e, 2, b).into_iter().map(|(i, c)| (lazy.element(3, i), c)).collect();
                let y: BTreeMap<PermSimplex, i64> =
                    en.compose(2, a, e, 2, b).into_iter().map(|(i, c)| (en.element(3, i).clone(), c)).collect();
                assert_eq!(x, y);
            }
        }
    }
}

#[test]
fn stream_matches_small_case() {
    let rep = stream_check(2, 3).unwrap();
    assert_eq!(rep.corollas, 84);
    assert_eq!(rep.trees, 3 * 4 * 4);
    let (a, _) = routes(2, 3);
    assert_eq!(rep.route_entries as usize, a.len());
}

#[test]
fn en_cobar_matches_gerstenhaber_small() {
    for n in 1..=2usize {
        let d = en_dual(n, 3).unwrap();
        let g = if n == 1 { Presentation::associative() } else { Presentation::gerstenhaber(n) }.quotient(3).unwrap();
        for r in 2..=3 {
            let c = cobar(&d, r).unwrap();
            let (ranks, free) = graded_betti(&c);
            let expected: BTreeMap<i64, usize> = g.graded_ranks(r).into_iter().filter(|(_, k)| *k > 0).collect();
            assert_eq!(ranks, expected, "n={} r={}", n, r);
            assert!(free);
        }
    }
}

#[test]
fn gerstenhaber_dual_is_koszul_in_arity_three() {
    for n in 2..=3usize {
        let g = Presentation::gerstenhaber(n);
        let d = presented_dual(&g, n as i64, 3).unwrap();
        let q = g.quotient(3).unwrap();
        let c = cobar(&d, 3).unwrap();
        let (ranks, free) = graded_betti(&c);
        assert!(free);
        assert_eq!(ranks, q.graded_ranks(3).into_iter().filter(|(_, k)| *k > 0).collect());
        for (s, piece) in c.split_by_internal_degree(d.predual()).unwrap() {
            let h = piece.complex.homology(Ring::Z);
            for deg in piece.complex.degrees() {
                if h.betti(deg) > 0 {
                    assert_eq!(piece.weight(deg), 2, "n={} S={} degree {}", n, s, deg);
                }
            }
        }
    }
}

#[test]
fn sigma_star_is_a_retracted_chain_map() {
    for (n, r) in [(2, 2), (2, 3), (3, 3)] {
        let s = sigma_star(n, r).unwrap_or_else(|e| panic!("n={} r={}: {}", n, r, e));
        s.map.check(s.source.complex(), s.target.complex()).unwrap();
    }
}

#[test]
fn sigma_star_in_arity_two_shifts_mu() {
    use crate::barratt_eccles::{mu, tau_mu};
    let n = 3;
    let v = vertex_maps(n, 2).unwrap();
    let (lo, hi) = (EnOperad::new(n - 1, 2).unwrap(), EnOperad::new(n, 2).unwrap());
    for d in 0..n - 1 {
        let image = &v.sigma[2][lo.index(&mu(d)).unwrap() as usize];
        assert_eq!(image.len(), 1);
        assert_eq!(image[0].0, hi.index(&tau_mu(d + 1)).unwrap());
        let image = &v.sigma[2][lo.index(&tau_mu(d)).unwrap() as usize];
        assert_eq!(image[0].0, hi.index(&mu(d + 1)).unwrap());
    }
}

#[test]
fn edge_is_a_quasi_isomorphism_for_e2() {
    let n = 2;
    let h = presented_dual(&Presentation::gerstenhaber(n), n as i64, 3).unwrap();
    let d = en_dual(n, 3).unwrap();
    let gens = gerstenhaber_generators(n, &h).unwrap();
    assert!(homology_ranks_match(&h, &d, 2).unwrap());
    for r in 2..=3 {
        let rep = edge_morphism(&h, &d, &gens, r).unwrap();
        assert!(rep.is_quasi_isomorphism(), "arity {}: {:?}", r, rep.degrees);
    }
}
