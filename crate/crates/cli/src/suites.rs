//! Verification suites behind `opkz check`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opkz::barratt_eccles::{compose_simplices, en_basis_capped, sphere_action, suspension_sigma, Chain, PermSimplex};
use opkz::cobar::{cobar, en_dual, presented_dual};
use opkz::complete_graph::{build_cell, enumerate_kn, latching, latching_by_colimit, latching_split, union_cells, CellKind, WeightSystem};
use opkz::linalg::Ring;
use opkz::operad_core::{check_axioms, EnOperad, Presentation};
use opkz::perm::Perm;

use crate::commands::precheck;
use crate::config::{RunConfig, Suite};
use crate::error::{CliError, Result};
use crate::report::Report;

/// Cap on exhaustively checked weight systems before sampling kicks in.
const KAPPA_BUDGET: usize = 200;

struct Outcome<'a> {
    rep: &'a mut Report,
}

impl Outcome<'_> {
    fn record(&mut self, property: &str, cases: usize, failure: Option<String>) {
        let status = if failure.is_some() { "FAIL" } else { "pass" };
        self.rep.passed &= failure.is_none();
        self.rep.row(vec![property.into(), cases.to_string(), status.into(), failure.unwrap_or_default()]);
    }
}

pub fn run(cfg: &RunConfig, suite: Suite, m: usize, cases: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rep = Report::new(format!("check {:?}, n = {}, arity <= {}", suite, cfg.n, cfg.arity), &["property", "cases", "status", "counterexample"]);
    let mut out = Outcome { rep: &mut rep };
    match suite {
        Suite::Axioms => axioms(cfg, cases, &mut rng, &mut out)?,
        Suite::Kgraph => kgraph(cfg, cases, &mut rng, &mut out)?,
        Suite::Cobar => cobar_suite(cfg, &mut out)?,
        Suite::Koszul => koszul(cfg, &mut out)?,
        Suite::Latching => latching_suite(cfg, &mut rng, &mut out)?,
        Suite::Sphere => sphere(cfg, m, &mut out)?,
    }
    Ok(rep)
}

fn axioms(cfg: &RunConfig, cases: usize, rng: &mut ChaCha8Rng, out: &mut Outcome) -> Result<()> {
    precheck(cfg, cfg.n, cfg.arity)?;
    let op = EnOperad::with_cap(cfg.n, cfg.arity, cfg.simplex_cap)?;
    let failure = check_axioms(&op, cfg.arity, cases, rng).err().map(|e| e.to_string());
    out.record(&format!("operad axioms on E_{}", cfg.n), cases, failure);
    Ok(())
}

fn random_simplex(rng: &mut impl Rng, r: usize, d: usize) -> PermSimplex {
    let perms = Perm::all(r);
    let mut seq = vec![perms.choose(rng).expect("nonempty").clone()];
    while r > 1 && seq.len() < d + 1 {
        let p = perms.choose(rng).expect("nonempty").clone();
        if Some(&p) != seq.last() {
            seq.push(p);
        }
    }
    PermSimplex::new(&seq).expect("distinct neighbours")
}

fn sample_kappas(cfg: &RunConfig, rng: &mut impl Rng, budget: usize) -> Vec<WeightSystem> {
    let mut all = enumerate_kn(cfg.n, cfg.arity);
    if all.len() > budget {
        all.shuffle(rng);
        all.truncate(budget);
    }
    all
}

fn kgraph(cfg: &RunConfig, cases: usize, rng: &mut ChaCha8Rng, out: &mut Outcome) -> Result<()> {
    if cfg.arity < 2 {
        return Err(CliError::Usage("kgraph needs --arity >= 2".into()));
    }
    precheck(cfg, cfg.n, cfg.arity)?;
    let mut failure = None;
    for _ in 0..cases {
        let s = rng.gen_range(1..=cfg.arity);
        let t = rng.gen_range(1..=cfg.arity + 1 - s);
        let (du, dv) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let u = random_simplex(rng, s, du);
        let v = random_simplex(rng, t, dv);
        let e = rng.gen_range(1..=s);
        let expected = WeightSystem::of_simplex(&u).compose(e, &WeightSystem::of_simplex(&v))?;
        if let Some((w, _)) = compose_simplices(&u, e, &v).into_iter().find(|(w, _)| WeightSystem::of_simplex(w) != expected) {
            failure = Some(format!("κ({} ∘_{} {}) differs at {}", u, e, v, w));
            break;
        }
        let rho = Perm::all(s).choose(rng).expect("nonempty").clone();
        if WeightSystem::of_simplex(&u.act(&rho)) != WeightSystem::of_simplex(&u).act(&rho)? {
            failure = Some(format!("κ is not equivariant at {}", u));
            break;
        }
        let ku = WeightSystem::of_simplex(&u);
        for k in 0..=u.degree() {
            if let Some(f) = u.face(k) {
                if !WeightSystem::of_simplex(&f).leq(&ku)? {
                    failure = Some(format!("κ(d_{} {}) is not below κ({})", k, u, u));
                }
            }
        }
        if failure.is_some() {
            break;
        }
    }
    out.record("κ functoriality", cases, failure);

    let kappas = sample_kappas(cfg, rng, KAPPA_BUDGET);
    let mut acyclic = None;
    let mut closed = None;
    for kappa in &kappas {
        let h = build_cell(CellKind::E, 0, kappa)?.complex()?.homology(Ring::Z);
        if acyclic.is_none() && (h.support() != vec![0] || h.betti(0) != 1 || !h.is_torsion_free()) {
            acyclic = Some(format!("E({}) is not acyclic", kappa));
        }
        if closed.is_none() {
            closed = build_cell(CellKind::D, cfg.n, kappa)?.check_closed().err().map(|e| format!("D({}): {}", kappa, e));
        }
    }
    out.record("cell acyclicity", kappas.len(), acyclic);
    out.record("dual cell closure", kappas.len(), closed);

    let basis: HashSet<PermSimplex> = en_basis_capped(cfg.n, cfg.arity, cfg.simplex_cap)?.iter().cloned().collect();
    let union = union_cells(cfg.n, cfg.arity)?;
    let failure = (union != basis).then(|| format!("{} simplices in the union, {} in E_{}({})", union.len(), basis.len(), cfg.n, cfg.arity));
    out.record("cells cover E_n(r)", basis.len(), failure);
    Ok(())
}

fn cobar_suite(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    precheck(cfg, cfg.n, cfg.arity)?;
    let d = en_dual(cfg.n, cfg.arity)?;
    for r in 2..=cfg.arity {
        let failure = match cobar(&d, r) {
            Ok(c) => c.check_weights().err().map(|e| e.to_string()),
            Err(e) => Some(e.to_string()),
        };
        out.record(&format!("∂² = 0 and weights in arity {}", r), 1, failure);
    }
    Ok(())
}

fn koszul(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let n = cfg.n;
    let p = if n == 1 { Presentation::associative() } else { Presentation::gerstenhaber(n) };
    let d = presented_dual(&p, n as i64, cfg.arity)?;
    let q = p.quotient(cfg.arity)?;
    for r in 2..=cfg.arity {
        let c = cobar(&d, r)?;
        let h = c.homology(Ring::Z);
        let mut failure = None;
        if !h.is_torsion_free() {
            failure = Some("torsion in the cobar homology".to_string());
        }
        for (deg, rank) in q.graded_ranks(r) {
            if h.betti(deg) != rank {
                failure = Some(format!("rank {} in degree {}, expected {}", h.betti(deg), deg, rank));
            }
        }
        for (_, piece) in c.split_by_internal_degree(d.predual())? {
            let ph = piece.complex.homology(Ring::Z);
            for deg in piece.complex.degrees() {
                if ph.betti(deg) > 0 && piece.weight(deg) != r as i64 - 1 {
                    failure = Some(format!("homology of weight {} in degree {}", piece.weight(deg), deg));
                }
            }
        }
        out.record(&format!("Koszul in arity {}", r), 1, failure);
    }
    Ok(())
}

fn latching_suite(cfg: &RunConfig, rng: &mut ChaCha8Rng, out: &mut Outcome) -> Result<()> {
    precheck(cfg, cfg.n, cfg.arity)?;
    let kappas = sample_kappas(cfg, rng, 20);
    let mut span = None;
    let mut split = None;
    for kappa in &kappas {
        let l = latching(cfg.n, kappa)?;
        let by_span: HashSet<PermSimplex> = l.basis.iter().cloned().collect();
        if span.is_none() && by_span != latching_by_colimit(cfg.n, kappa)? {
            span = Some(format!("latching object of {} differs from the colimit", kappa));
        }
        if cfg.n >= 2 && split.is_none() && !latching_split(cfg.n, kappa)?.is_split_injective() {
            split = Some(format!("latching morphism at {} is not split injective", kappa));
        }
    }
    out.record("latching span", kappas.len(), span);
    if cfg.n >= 2 {
        out.record("split injective", kappas.len(), split);
    }
    Ok(())
}

/// Every simplex of `E(r)` of degree `d`.
pub fn all_simplices(r: usize, d: usize) -> Vec<PermSimplex> {
    let perms = Perm::all(r);
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..perms.len()).map(|i| vec![i]).collect();
    while let Some(seq) = stack.pop() {
        if seq.len() == d + 1 {
            let ps: Vec<Perm> = seq.iter().map(|&i| perms[i].clone()).collect();
            out.push(PermSimplex::new(&ps).expect("distinct neighbours"));
            continue;
        }
        let last = *seq.last().expect("nonempty");
        for i in (0..perms.len()).filter(|&i| i != last) {
            let mut next = seq.clone();
            next.push(i);
            stack.push(next);
        }
    }
    out
}

fn sphere(cfg: &RunConfig, m: usize, out: &mut Outcome) -> Result<()> {
    if m == 0 {
        return Err(CliError::Usage("--m must be positive".into()));
    }
    for r in 2..=cfg.arity {
        let d = m * (r - 1);
        let simplices = all_simplices(r, d);
        if simplices.len() as u64 > cfg.simplex_cap {
            return Err(CliError::ResourceCap(format!("{} simplices of E({}) in degree {}", simplices.len(), r, d)));
        }
        let cup = sphere_action(m, r);
        let mut sign = 0;
        let mut failure = None;
        let mut vanishing = None;
        for s in &simplices {
            let lhs = cup.eval(s);
            let mut c = Chain::from_simplex(s.clone());
            for _ in 0..m {
                c = suspension_sigma(&c);
            }
            let rhs = c.augmentation();
            if lhs != 0 && s.max_variation() < m {
                vanishing = Some(format!("sgn^∪{} is nonzero on {} in E_{}", m, s, m));
            }
            if sign == 0 && rhs != 0 {
                sign = lhs * rhs;
            }
            if lhs != sign * rhs || (lhs == 0) != (rhs == 0) {
                failure = Some(format!("{}: sgn^∪{} = {}, ε σ^{} = {}", s, m, lhs, m, rhs));
                break;
            }
        }
        out.record(&format!("sgn^∪{} = {} ε σ^{} in arity {}", m, if sign < 0 { "-" } else { "+" }, m, r), simplices.len(), failure);
        out.record(&format!("vanishing on E_{} in arity {}", m, r), simplices.len(), vanishing);
    }
    Ok(())
}
