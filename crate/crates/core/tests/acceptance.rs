//! Acceptance run: one PASS/FAIL line per criterion. Budgets are wall-clock
//! seconds; a criterion passes only if it is exact and within budget.
//! Set `OPKZ_ACCEPTANCE_STRICT=1` to exit nonzero on any failure.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opkz::barratt_eccles::{
    compose, compose_simplices, en_basis, mu, sphere_action, suspension_morphism, suspension_sigma, tau_mu, unit, Chain,
    PermSimplex,
};
use opkz::cobar::{cobar, cobar_dual_basis_differential, collect, en_dual, presented_dual, stream_check, twist_part};
use opkz::complete_graph::{build_cell, enumerate_kn, latching, latching_by_colimit, latching_split, union_cells, CellKind, WeightSystem};
use opkz::linalg::Ring;
use opkz::operad_core::{suspension_sign, two_vertex_sets, two_vertex_tree, EnOperad, Operad, Presentation, Suspended, Tree};
use opkz::perm::Perm;
use opkz::twisting::{build_phi, coinvariants, lift_psi, sigma_kernel, solve_omega, twisting_degree, verify_omega, verify_psi};

type Check = Result<String, String>;

const SEED: u64 = 20;
const RANDOM_CASES: usize = 10_000;
const SAMPLED_KAPPAS: usize = 20;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ch(s: &PermSimplex) -> Chain {
    Chain::from_simplex(s.clone())
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Every simplex of `E(r)` of degree `d`.
fn all_simplices(r: usize, d: usize) -> Vec<PermSimplex> {
    let perms = Perm::all(r);
    if r == 1 {
        return if d == 0 { vec![PermSimplex::new(&perms).unwrap()] } else { vec![] };
    }
    let mut seqs: Vec<Vec<usize>> = (0..perms.len()).map(|i| vec![i]).collect();
    for _ in 0..d {
        seqs = seqs
            .into_iter()
            .flat_map(|s| {
                let last = *s.last().unwrap();
                (0..perms.len()).filter(move |&i| i != last).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    seqs.iter().map(|s| PermSimplex::new(&s.iter().map(|&i| perms[i].clone()).collect::<Vec<_>>()).unwrap()).collect()
}

fn random_simplex(rng: &mut impl Rng, r: usize, d: usize) -> PermSimplex {
    let perms = Perm::all(r);
    let mut seq = vec![perms.choose(rng).unwrap().clone()];
    while r > 1 && seq.len() < d + 1 {
        let p = perms.choose(rng).unwrap().clone();
        if Some(&p) != seq.last() {
            seq.push(p);
        }
    }
    PermSimplex::new(&seq).unwrap()
}

fn random_in_en(rng: &mut impl Rng, n: usize, r: usize, d: usize) -> PermSimplex {
    loop {
        let s = random_simplex(rng, r, d);
        if s.in_en(n) {
            return s;
        }
    }
}

/// Ranks of `G_n(r)` from its Poincaré polynomial `Π_{k<r} (1 + k t^{n-1})`,
/// keyed by degree; `n = 1` gives the associative operad.
fn gerstenhaber_ranks(n: usize, r: usize) -> BTreeMap<i64, usize> {
    let mut coeffs = vec![1usize];
    for k in 1..r {
        let mut next = vec![0; coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j] += c;
            next[j + 1] += c * k;
        }
        coeffs = next;
    }
    let mut out = BTreeMap::new();
    for (j, c) in coeffs.into_iter().enumerate() {
        *out.entry((j * (n - 1)) as i64).or_insert(0) += c;
    }
    out
}

fn c1_homology_en2() -> Check {
    for n in 1..=5 {
        let h = en_basis(n, 2).map_err(|e| e.to_string())?.complex().homology(Ring::Z);
        for d in 0..=n as i64 + 1 {
            let expected = usize::from(d == 0) + usize::from(d == n as i64 - 1);
            ensure(h.betti(d) == expected && h.torsion(d).is_empty(), || format!("H_{}(E_{}(2)) has rank {}", d, n, h.betti(d)))?;
        }
    }
    Ok("n = 1..5".into())
}

fn c2_axioms() -> Check {
    let e = |x: opkz::Error| x.to_string();
    let mut checked = 0usize;
    let small: Vec<Vec<PermSimplex>> = (0..=3).map(|r| (0..=3).flat_map(|d| all_simplices(r.max(1), d)).collect()).collect();
    // units at arity <= 3
    for r in 1..=3 {
        for u in &small[r] {
            for i in 1..=r {
                ensure(compose(&ch(u), i, &unit()).map_err(e)? == ch(u), || format!("right unit at {}", u))?;
            }
            ensure(compose(&unit(), 1, &ch(u)).map_err(e)? == ch(u), || format!("left unit at {}", u))?;
            checked += r + 1;
        }
    }
    // Leibniz and equivariance for every composite landing in arity <= 3
    let p2 = Perm::all(2);
    for u in &small[2] {
        for v in &small[2] {
            for i in 1..=2 {
                let (cu, cv) = (ch(u), ch(v));
                let lhs = compose(&cu, i, &cv).map_err(e)?.differential();
                let mut rhs = if u.degree() > 0 { compose(&cu.differential(), i, &cv).map_err(e)? } else { Chain::zero(3, lhs.degree()) };
                if v.degree() > 0 {
                    rhs.add_scaled(&compose(&cu, i, &cv.differential()).map_err(e)?, sign(u.degree()));
                }
                ensure(lhs == rhs || (lhs.is_zero() && rhs.is_zero()), || format!("Leibniz at {} ∘_{} {}", u, i, v))?;
                for rho in &p2 {
                    for pi in &p2 {
                        let a = compose(&cu.act(rho).map_err(e)?, rho.at(i) as usize, &cv.act(pi).map_err(e)?).map_err(e)?;
                        let b = compose(&cu, i, &cv).map_err(e)?.act(&rho.block(i, pi)).map_err(e)?;
                        ensure(a == b, || format!("equivariance at {} ∘_{} {}", u, i, v))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    // random cases up to arity 4
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..RANDOM_CASES {
        let s = rng.gen_range(2..=3);
        let t = rng.gen_range(1..=5 - s);
        let q = rng.gen_range(1..=6 - s - t);
        let (da, db, dc) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let a = ch(&random_simplex(&mut rng, s, da));
        let b = ch(&random_simplex(&mut rng, t, db));
        let c = ch(&random_simplex(&mut rng, q, dc));
        let i = rng.gen_range(1..=s);
        let j = rng.gen_range(1..=t);
        let seq_l = compose(&compose(&a, i, &b).map_err(e)?, i + j - 1, &c).map_err(e)?;
        let seq_r = compose(&a, i, &compose(&b, j, &c).map_err(e)?).map_err(e)?;
        ensure(seq_l == seq_r, || "sequential associativity".to_string())?;
        let (i1, i2) = (1, rng.gen_range(2..=s));
        let par_l = compose(&compose(&a, i2, &c).map_err(e)?, i1, &b).map_err(e)?;
        let par_r = compose(&compose(&a, i1, &b).map_err(e)?, i2 + t - 1, &c).map_err(e)?.scaled(sign(b.degree() * c.degree()));
        ensure(par_l == par_r, || "parallel associativity".to_string())?;
        let rho = Perm::all(s).choose(&mut rng).unwrap().clone();
        let pi = Perm::all(t).choose(&mut rng).unwrap().clone();
        let eq_l = compose(&a.act(&rho).map_err(e)?, rho.at(i) as usize, &b.act(&pi).map_err(e)?).map_err(e)?;
        let eq_r = compose(&a, i, &b).map_err(e)?.act(&rho.block(i, &pi)).map_err(e)?;
        ensure(eq_l == eq_r, || "equivariance".to_string())?;
        let ab = compose(&a, i, &b).map_err(e)?;
        let mut leib = if a.degree() > 0 { compose(&a.differential(), i, &b).map_err(e)? } else { Chain::zero(ab.arity(), ab.degree().saturating_sub(1)) };
        if b.degree() > 0 {
            leib.add_scaled(&compose(&a, i, &b.differential()).map_err(e)?, sign(a.degree()));
        }
        let d_ab = ab.differential();
        ensure(d_ab == leib || (d_ab.is_zero() && leib.is_zero()), || "Leibniz".to_string())?;
        checked += 4;
    }
    Ok(format!("{} identities, 0 failures", checked))
}

fn c3_kappa() -> Check {
    let e = |x: opkz::Error| x.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    for _ in 0..RANDOM_CASES {
        let s = rng.gen_range(1..=4);
        let t = rng.gen_range(1..=5 - s);
        let (du, dv) = (rng.gen_range(0..5), rng.gen_range(0..5));
        let u = random_simplex(&mut rng, s, du);
        let v = random_simplex(&mut rng, t, dv);
        let i = rng.gen_range(1..=s);
        let ku = WeightSystem::of_simplex(&u);
        let expected = ku.compose(i, &WeightSystem::of_simplex(&v)).map_err(e)?;
        for (w, _) in compose_simplices(&u, i, &v) {
            ensure(WeightSystem::of_simplex(&w) == expected, || format!("κ({} ∘_{} {})", u, i, v))?;
        }
        let rho = Perm::all(s).choose(&mut rng).unwrap().clone();
        ensure(WeightSystem::of_simplex(&u.act(&rho)) == ku.act(&rho).map_err(e)?, || format!("κ(ρ·{})", u))?;
        for k in 0..=u.degree() {
            if let Some(f) = u.face(k) {
                ensure(WeightSystem::of_simplex(&f).leq(&ku).map_err(e)?, || format!("κ(d_{} {})", k, u))?;
            }
        }
    }
    Ok(format!("{} cases", RANDOM_CASES))
}

fn c4_cells() -> Check {
    let mut sizes = Vec::new();
    for (n, r) in [(1, 3), (2, 3), (3, 3), (2, 4)] {
        let basis: HashSet<PermSimplex> = en_basis(n, r).map_err(|e| e.to_string())?.iter().cloned().collect();
        let union = union_cells(n, r).map_err(|e| e.to_string())?;
        ensure(union == basis, || format!("union of cells differs from E_{}({})", n, r))?;
        let kn: HashSet<WeightSystem> = enumerate_kn(n, r).into_iter().collect();
        ensure(basis.iter().all(|s| kn.contains(&WeightSystem::of_simplex(s))), || format!("κ leaves K_{}({})", n, r))?;
        sizes.push(basis.len());
    }
    Ok(format!("basis sizes {:?}", sizes))
}

fn acyclic(kappa: &WeightSystem) -> Result<(), String> {
    let cell = build_cell(CellKind::E, 0, kappa).map_err(|e| e.to_string())?;
    let h = cell.complex().map_err(|e| e.to_string())?.homology(Ring::Z);
    ensure(h.support() == vec![0] && h.betti(0) == 1 && h.is_torsion_free(), || format!("E({}) is not acyclic", kappa))
}

fn c5_acyclic() -> Check {
    let mut count = 0;
    for r in 2..=3 {
        for kappa in enumerate_kn(2, r) {
            acyclic(&kappa)?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut k3 = enumerate_kn(3, 3);
    k3.shuffle(&mut rng);
    for kappa in k3.iter().take(SAMPLED_KAPPAS) {
        acyclic(kappa)?;
        count += 1;
    }
    Ok(format!("{} cells", count))
}

fn c6_suspension() -> Check {
    let e = |x: opkz::Error| x.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut nonzero = 0;
    for _ in 0..RANDOM_CASES {
        let n = rng.gen_range(2..=4);
        let r = rng.gen_range(2..=4);
        let d = rng.gen_range(0..=(n - 1) * (r - 1));
        let s = random_in_en(&mut rng, n, r, d);
        let image = suspension_sigma(&ch(&s));
        ensure(image.in_en(n - 1), || format!("σ({}) leaves E_{}", s, n - 1))?;
        let back = suspension_sigma(&ch(&s.section_t()));
        ensure(back == ch(&s) || back == ch(&s).scaled(-1), || format!("σ(section_t({})) ≠ ±s", s))?;
    }
    for _ in 0..RANDOM_CASES {
        let s = rng.gen_range(2..=3);
        let t = rng.gen_range(2..=3);
        let i = rng.gen_range(1..=s);
        let (du, dv) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let u = random_simplex(&mut rng, s, du).section_t();
        let v = random_simplex(&mut rng, t, dv).section_t();
        let lhs = suspension_morphism(&compose(&ch(&u), i, &ch(&v)).map_err(e)?);
        let (su, sv) = (suspension_morphism(&ch(&u)), suspension_morphism(&ch(&v)));
        let moved = (s - 1) * sv.degree();
        let rhs = compose(&su, i, &sv).map_err(e)?.scaled(suspension_sign(-1, s, t, i) * sign(moved));
        ensure(lhs == rhs, || format!("σ̃({} ∘_{} {})", u, i, v))?;
        nonzero += usize::from(!lhs.is_zero());
    }
    ensure(nonzero > RANDOM_CASES / 4, || "too few nonzero composites".into())?;
    Ok(format!("{} + {} cases, {} nonzero composites", RANDOM_CASES, RANDOM_CASES, nonzero))
}

/// Both computations of `∂` on corolla generators, as sorted entries.
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

fn c7_cobar() -> Check {
    let mut notes = Vec::new();
    for n in 1..=3 {
        for r in 2..=4 {
            if (n, r) == (3, 4) {
                let rep = stream_check(n, r).map_err(|e| e.to_string())?;
                notes.push(format!("(3,4) streamed: {} trees, {} corollas", rep.trees, rep.corollas));
                continue;
            }
            let c = cobar(&en_dual(n, r).map_err(|e| e.to_string())?, r).map_err(|e| e.to_string())?;
            c.complex().check_square_zero().map_err(|e| format!("n={} r={}: {}", n, r, e))?;
            if r >= 3 {
                let (a, b) = routes(n, r);
                ensure(a == b, || format!("routes differ at n={} r={}", n, r))?;
            }
        }
    }
    Ok(notes.join("; "))
}

fn c8_koszul() -> Check {
    for n in 2..=3usize {
        let p = Presentation::gerstenhaber(n);
        let d = presented_dual(&p, n as i64, 4).map_err(|e| e.to_string())?;
        let q = p.quotient(4).map_err(|e| e.to_string())?;
        for r in 2..=4 {
            let expected: BTreeMap<i64, usize> = q.graded_ranks(r).into_iter().filter(|(_, k)| *k > 0).collect();
            ensure(expected == gerstenhaber_ranks(n, r), || format!("G_{}({}) quotient ranks {:?}", n, r, expected))?;
            let c = cobar(&d, r).map_err(|e| e.to_string())?;
            let h = c.homology(Ring::Z);
            ensure(h.is_torsion_free(), || format!("torsion at n={} r={}", n, r))?;
            let got: BTreeMap<i64, usize> = c.degrees().filter(|&k| h.betti(k) > 0).map(|k| (k, h.betti(k))).collect();
            ensure(got == expected, || format!("n={} r={}: {:?} vs {:?}", n, r, got, expected))?;
            for (_, piece) in c.split_by_internal_degree(d.predual()).map_err(|e| e.to_string())? {
                let ph = piece.complex.homology(Ring::Z);
                for k in piece.complex.degrees() {
                    ensure(ph.betti(k) == 0 || piece.weight(k) == r as i64 - 1, || format!("weight {} at n={} r={}", piece.weight(k), n, r))?;
                }
            }
        }
    }
    Ok("n = 2, 3; r <= 4".into())
}

fn c9_cobar_homology() -> Check {
    let mut table = Vec::new();
    for n in 1..=3 {
        let d = en_dual(n, 3).map_err(|e| e.to_string())?;
        for r in 2..=3 {
            let c = cobar(&d, r).map_err(|e| e.to_string())?;
            let h = c.homology(Ring::Z);
            ensure(h.is_torsion_free(), || format!("torsion at n={} r={}", n, r))?;
            let got: BTreeMap<i64, usize> = c.degrees().filter(|&k| h.betti(k) > 0).map(|k| (k, h.betti(k))).collect();
            let expected = gerstenhaber_ranks(n, r);
            ensure(got == expected, || format!("n={} r={}: {:?} vs {:?}", n, r, got, expected))?;
            table.push(format!("({},{}):{:?}", n, r, got.values().collect::<Vec<_>>()));
        }
    }
    Ok(table.join(" "))
}

fn c10_omega() -> Check {
    let fam = solve_omega(3, 4).map_err(|e| e.to_string())?;
    let checks = verify_omega(&fam).map_err(|e| e.to_string())?;
    for w in fam.iter() {
        ensure(Some(w.degree) == twisting_degree(w.n, w.r), || format!("ω_{}({}) in degree {}", w.n, w.r, w.degree))?;
        ensure(checks.iter().any(|c| (c.n, c.r) == (w.n, w.r)), || format!("ω_{}({}) not re-verified", w.n, w.r))?;
    }
    let mut matrix = Vec::new();
    for n in 1..=3 {
        let phi = build_phi(&fam, n, 4).map_err(|e| e.to_string())?;
        matrix.push(format!("φ_{} matrix-checked in arities {:?}", n, phi.matrix_checked));
    }
    Ok(format!("{} components; {}", checks.len(), matrix.join(", ")))
}

fn c11_obstruction() -> Check {
    for (n, r) in [(2, 3), (3, 3), (2, 4)] {
        let top = n * (r - 1) - 1;
        let k = sigma_kernel(n, r, top - 2, top).map_err(|e| e.to_string())?;
        let d = top as i64 - 1;
        let h = k.complex.homology_in(&[d], Ring::Z);
        ensure(h.betti(d) == 0 && h.torsion(d).is_empty(), || format!("H_{} ≠ 0 at n={} r={}", d, n, r))?;
    }
    Ok("(2,3), (3,3), (2,4)".into())
}

fn c12_mod_p() -> Check {
    for n in 1..=4 {
        let h = coinvariants(n, 2, 0).map_err(|e| e.to_string())?.complex().homology(Ring::Fp(2));
        for d in 0..=n as i64 {
            ensure(h.betti(d) == usize::from(d < n as i64), || format!("H_{}((E_{}⊗F_2)(2)_Σ2) has rank {}", d, n, h.betti(d)))?;
        }
    }
    let (n, p) = (2i64, 3i64);
    let top = (n - 1) * (p - 1);
    let mut expected: Vec<i64> = (0..=top).flat_map(|i| [0, 1].map(|eps| 2 * i * (p - 1) - eps)).filter(|d| (0..=top).contains(d)).collect();
    expected.sort_unstable();
    expected.dedup();
    let mut found = Vec::new();
    for chi in 0..2u8 {
        let h = coinvariants(2, 3, chi).map_err(|e| e.to_string())?.complex().homology(Ring::Fp(3));
        found.push((0..=top).filter(|&d| h.betti(d) > 0).collect::<Vec<_>>());
    }
    ensure(found[0] == expected, || {
        format!("F_2 part exact; F_3 support {:?} (sign twist {:?}), formula gives {:?}", found[0], found[1], expected)
    })?;
    Ok(format!("F_3 support {:?}", found[0]))
}

fn c13_latching() -> Check {
    let e = |x: opkz::Error| x.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 13);
    let mut k3 = enumerate_kn(2, 3);
    k3.shuffle(&mut rng);
    let kappas: Vec<WeightSystem> = enumerate_kn(2, 2).into_iter().chain(k3.into_iter().take(SAMPLED_KAPPAS)).collect();
    for kappa in &kappas {
        let by_span: HashSet<PermSimplex> = latching(2, kappa).map_err(e)?.basis.into_iter().collect();
        ensure(by_span == latching_by_colimit(2, kappa).map_err(e)?, || format!("latching object at {}", kappa))?;
        ensure(latching_split(2, kappa).map_err(e)?.is_split_injective(), || format!("not split injective at {}", kappa))?;
    }
    Ok(format!("{} weight systems", kappas.len()))
}

fn c14_lifting() -> Check {
    let n = 2;
    let fam = solve_omega(n, 3).map_err(|e| e.to_string())?;
    let psi = lift_psi(&fam, n, 3).map_err(|e| e.to_string())?;
    let checks = verify_psi(&fam, &psi).map_err(|e| e.to_string())?;
    for c in &checks {
        ensure(c.chain_map && c.cells && c.tower && c.augmentation, || format!("constraints fail at level {} arity {}: {:?}", c.n, c.r, c))?;
        ensure(c.homology_iso, || format!("H_*(ψ_{}) is not an isomorphism in arity {}", c.n, c.r))?;
    }
    let level = psi.level(n);
    let mut literal = Vec::new();
    for d in 0..n {
        let y = level.image(&mu(n - 1 - d));
        let ok = y.len() == 1 && y.coefficient(&mu(d)).abs() == 1;
        if !ok {
            let shown: Vec<String> = y.terms().map(|(s, k)| format!("{}·({})", k, s)).collect();
            literal.push(format!("η(μ_{}^∨) = {}", n - 1 - d, shown.join(" + ")));
        }
    }
    let tau_form = (0..n).all(|d| level.image(&mu(n - 1 - d)).coefficient(&tau_mu(d)).abs() == 1);
    ensure(literal.is_empty(), || {
        format!(
            "constraints and H_* iso exact; arity-2 images are ±τμ_d ({}), not μ_d: {}",
            if tau_form { "forced by the cells" } else { "unexpected form" },
            literal.join(", ")
        )
    })?;
    Ok("constraints, H_* iso and arity-2 prescription exact".into())
}

fn c15_sphere() -> Check {
    let mut signs = Vec::new();
    for m in 1..=2 {
        for r in 2..=3 {
            let cup = sphere_action(m, r);
            let mut global = 0;
            for s in all_simplices(r, m * (r - 1)) {
                let lhs = cup.eval(&s);
                let mut c = ch(&s);
                for _ in 0..m {
                    c = suspension_sigma(&c);
                }
                let rhs = c.augmentation();
                if global == 0 && rhs != 0 {
                    global = lhs * rhs;
                }
                ensure(lhs == global * rhs && (lhs == 0) == (rhs == 0), || format!("m={} r={} at {}", m, r, s))?;
                if s.in_en(m) {
                    ensure(lhs == 0, || format!("sgn^∪{} is nonzero on {} ∈ E_{}", m, s, m))?;
                }
            }
            ensure(global != 0, || format!("no nonzero value for m={} r={}", m, r))?;
            signs.push(format!("(m={},r={}):{}", m, r, if global > 0 { "+" } else { "-" }));
        }
    }
    Ok(signs.join(" "))
}

fn main() {
    type Criterion = (u32, &'static str, f64, fn() -> Check);
    let criteria: [Criterion; 15] = [
        (1, "H_*(E_n(2)) over Z, n <= 5", 1.0, c1_homology_en2),
        (2, "operad axioms on E, arity <= 4", 60.0, c2_axioms),
        (3, "κ functoriality", 30.0, c3_kappa),
        (4, "cell decomposition", 120.0, c4_cells),
        (5, "cell acyclicity", 120.0, c5_acyclic),
        (6, "suspension", 30.0, c6_suspension),
        (7, "cobar ∂² = 0 and route agreement", 300.0, c7_cobar),
        (8, "Koszulness of G_n", 300.0, c8_koszul),
        (9, "H_*(B^c(Λ^-n E_n^∨)) ≅ G_n, r <= 3", 600.0, c9_cobar_homology),
        (10, "ω solver at (3, 4)", 600.0, c10_omega),
        (11, "obstruction vanishing", 600.0, c11_obstruction),
        (12, "mod-p coinvariant ranks", 300.0, c12_mod_p),
        (13, "latching", 120.0, c13_latching),
        (14, "lifting ψ_2 up to arity 3", 900.0, c14_lifting),
        (15, "sphere action", 60.0, c15_sphere),
    ];
    let mut failed = Vec::new();
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match outcome {
            Ok(d) if secs <= budget => (true, d),
            Ok(d) => (false, format!("{} (over budget)", d)),
            Err(d) => (false, d),
        };
        if !ok {
            failed.push(id);
        }
        println!("{} {:>2} {} [{:.1}s / {:.0}s] {}", if ok { "PASS" } else { "FAIL" }, id, name, secs, budget, detail);
    }
    println!("{}/15 criteria pass{}", 15 - failed.len(), if failed.is_empty() { String::new() } else { format!("; failing: {:?}", failed) });
    if !failed.is_empty() && std::env::var_os("OPKZ_ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}
