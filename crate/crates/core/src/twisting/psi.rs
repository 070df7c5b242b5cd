//! Lifts `ψ_n: B^c(D_n) → E_n` of `φ_n` through the augmentation
//! `E_n → Com`, determined by generator images `η_n(x^∨) ∈ E(κ^∨(x))`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::cofaces::{sigma_preimages, Cofaces};
use super::coinvariants::{orbit_rep, representatives};
use super::omega::TwistingElement;
use crate::barratt_eccles::{en_basis, mu, Chain, PermSimplex};
use crate::cobar::{cobar, cobar_dual_basis_differential, en_dual, vertex_maps, CobarComplex};
use crate::complete_graph::{build_cell, dual_kappa, enumerate_kn, CellKind};
use crate::error::{Error, Result};
use crate::linalg::{solve_integer, ChainComplex, ChainMap, IntMatrix, Ring, Solution};
use crate::operad_core::{evaluate_tree, two_vertex_sets, two_vertex_tree, EnOperad, Tree};
use crate::perm::Perm;

/// Cobar degree `n(r-1) - 1 - |x|` of the generator `x^∨`.
pub fn generator_degree(n: usize, x: &PermSimplex) -> i64 {
    (n * (x.arity() - 1)) as i64 - 1 - x.degree() as i64
}

/// `η_m` on the orbit representatives of `E_m(r)`, `2 <= r <= max_arity`.
#[derive(Clone, Debug)]
pub struct PsiLevel {
    pub n: usize,
    pub max_arity: usize,
    images: Vec<BTreeMap<PermSimplex, Chain>>,
}

impl PsiLevel {
    /// `η(x^∨)` for any simplex, by `η((g·ρ)^∨) = sgn(g)^n g·η(ρ^∨)`.
    pub fn image(&self, x: &PermSimplex) -> Chain {
        let r = x.arity();
        let deg = generator_degree(self.n, x).max(0) as usize;
        let (c, rep) = orbit_rep(x, (self.n % 2) as u8);
        match self.images.get(r).and_then(|m| m.get(&rep)) {
            Some(ch) => ch.act(&Perm(x.vertex(0).to_vec())).expect("same arity").scaled(c),
            None => Chain::zero(r, deg),
        }
    }

    /// Nonzero images on representatives in arity `r`.
    pub fn representatives(&self, r: usize) -> impl Iterator<Item = (&PermSimplex, &Chain)> {
        self.images.get(r).into_iter().flatten()
    }

    /// `ψ(T)` for a tree labeled by basis indices of `op`.
    pub fn on_tree(&self, op: &EnOperad, t: &Tree) -> Result<Chain> {
        let verts = t.vertices();
        let mut expansions: Vec<(Vec<u32>, i64)> = vec![(Vec::new(), 1)];
        let mut degree = 0;
        for &(k, l) in &verts {
            let img = self.image(op.element(k, l));
            degree += img.degree();
            let mut next = Vec::new();
            for (labels, c) in &expansions {
                for (s, d) in img.terms() {
                    let i = op.index(s).ok_or_else(|| Error::Verification(format!("η image {} leaves E_{}", s, self.n)))?;
                    let mut ls = labels.clone();
                    ls.push(i);
                    next.push((ls, c * d));
                }
            }
            expansions = next;
        }
        let r = t.arity();
        let mut out = Chain::zero(r, degree);
        for (labels, c) in expansions {
            for (z, e) in evaluate_tree(op, &t.with_labels(&labels))? {
                out.add_term(op.element(r, z).clone(), c * e);
            }
        }
        Ok(out)
    }
}

/// The lifts `ψ_1, ..., ψ_n` up to `max_arity`.
#[derive(Clone, Debug)]
pub struct Psi {
    pub n: usize,
    pub max_arity: usize,
    pub levels: Vec<PsiLevel>,
}

impl Psi {
    pub fn level(&self, m: usize) -> &PsiLevel {
        &self.levels[m - 1]
    }
}

/// `η_m(μ_j^∨) = ±τ^{m-1} μ_{m-1-j}`, the arity-2 images. The orientation
/// `τ^{m-1}` is forced by the cells, the sign by `ε η = θ` and the chain-map
/// equation.
pub fn arity_two(m: usize, theta_top: i64) -> BTreeMap<PermSimplex, Chain> {
    let tau = Perm(vec![2, 1]);
    let mut out = BTreeMap::new();
    for j in 0..m {
        let d = m - 1 - j;
        let sign = if (m + 1) * d % 2 == 1 { -1 } else { 1 };
        let mut target = mu(d);
        if (m - 1) % 2 == 1 {
            target = target.act(&tau);
        }
        if theta_top != 0 {
            out.insert(mu(j), Chain::from_term(target, sign * theta_top));
        }
    }
    out
}

/// Solves for `ψ_1, ..., ψ_n` up to `max_arity`, from a family `ω` that
/// reaches `(n, max_arity)`.
pub fn lift_psi(fam: &TwistingElement, n: usize, max_arity: usize) -> Result<Psi> {
    if n == 0 || n > fam.n_max || max_arity < 2 || max_arity > fam.r_max {
        return Err(Error::Invalid(format!("ψ_{} up to arity {} needs ω beyond the solved range", n, max_arity)));
    }
    let mut levels: Vec<PsiLevel> = Vec::new();
    for m in 1..=n {
        let op = EnOperad::new(m, max_arity)?;
        let mut level = PsiLevel { n: m, max_arity, images: vec![BTreeMap::new(); max_arity + 1] };
        level.images[2] = arity_two(m, fam.theta(m, &mu(m - 1)));
        for r in 3..=max_arity {
            let images = solve_arity(fam, &op, &level, levels.last(), m, r)?;
            level.images[r] = images;
        }
        levels.push(level);
    }
    Ok(Psi { n, max_arity, levels })
}

/// Builder for a sparse system with rows keyed by `(equation, simplex)`.
#[derive(Default)]
struct System {
    rows: HashMap<(usize, PermSimplex), usize>,
    trip: Vec<(usize, usize, i64)>,
    rhs: Vec<i64>,
}

impl System {
    fn row(&mut self, eq: usize, z: PermSimplex) -> usize {
        let next = self.rows.len();
        let i = *self.rows.entry((eq, z)).or_insert(next);
        if i == self.rhs.len() {
            self.rhs.push(0);
        }
        i
    }

    fn add(&mut self, eq: usize, z: PermSimplex, col: usize, c: i64) {
        let i = self.row(eq, z);
        self.trip.push((i, col, c));
    }

    fn add_rhs(&mut self, eq: usize, z: PermSimplex, c: i64) {
        let i = self.row(eq, z);
        self.rhs[i] += c;
    }
}

fn solve_arity(
    fam: &TwistingElement,
    op: &EnOperad,
    level: &PsiLevel,
    below: Option<&PsiLevel>,
    m: usize,
    r: usize,
) -> Result<BTreeMap<PermSimplex, Chain>> {
    let top = op.basis(r).max_degree();
    let reps: Vec<PermSimplex> = representatives(m, r, top).into_iter().flatten().collect();
    let rep_index: HashMap<&PermSimplex, usize> = reps.iter().enumerate().map(|(i, x)| (x, i)).collect();
    // unknown blocks: the cell basis of E(κ^∨(x)) in the degree of x^∨
    let mut blocks: Vec<Vec<PermSimplex>> = Vec::with_capacity(reps.len());
    let mut starts = Vec::with_capacity(reps.len());
    let mut ncols = 0;
    for x in &reps {
        let g = generator_degree(m, x);
        let block = if g < 0 {
            Vec::new()
        } else {
            let cell = build_cell(CellKind::E, m, &dual_kappa(x, m))?;
            cell.basis.get(g as usize).cloned().unwrap_or_default()
        };
        starts.push(ncols);
        ncols += block.len();
        blocks.push(block);
    }
    let chi = (m % 2) as u8;
    let mut sys = System::default();
    let cf = Cofaces::new(m, r);
    let sets = two_vertex_sets(r);
    let neq = reps.len();

    for (xi, x) in reps.iter().enumerate() {
        let g = generator_degree(m, x);
        if g == 0 {
            // ε η(x^∨) = θ(x)
            let z = mu(0);
            for k in 0..blocks[xi].len() {
                sys.add(neq + xi, z.clone(), starts[xi] + k, 1);
            }
            sys.add_rhs(neq + xi, z, fam.theta(m, x));
        }
        if g < 1 {
            continue;
        }
        // d η(x^∨) + Σ (-1)^k η(y^∨) = Σ_J s_J ψ(T_J) over cofaces d_k y = x
        for (k, b) in blocks[xi].iter().enumerate() {
            for (f, c) in Chain::from_simplex(b.clone()).differential().terms() {
                sys.add(xi, f.clone(), starts[xi] + k, c);
            }
        }
        for (k, y) in cf.of(x) {
            let (c, rho) = orbit_rep(&y, chi);
            let gp = Perm(y.vertex(0).to_vec());
            let ri = rep_index[&rho];
            let sign = if k % 2 == 0 { c } else { -c };
            for (bi, b) in blocks[ri].iter().enumerate() {
                sys.add(xi, b.act(&gp), starts[ri] + bi, sign);
            }
        }
        for set in &sets {
            if let Some(f) = cobar_dual_basis_differential(x, set, m) {
                let (iu, iv) = (op.index(&f.root).expect("in E_m"), op.index(&f.inner).expect("in E_m"));
                let t = two_vertex_tree(r, set, iu, iv);
                for (z, c) in level.on_tree(op, &t)?.terms() {
                    sys.add_rhs(xi, z.clone(), f.sign * c);
                }
            }
        }
    }
    // η_m(σ^* t^∨) = η_{m-1}(t^∨)
    if let Some(prev) = below {
        let ttop = en_basis(m - 1, r)?.max_degree();
        for (ti, t) in representatives(m - 1, r, ttop).into_iter().flatten().enumerate() {
            if generator_degree(m - 1, &t) < 0 {
                continue;
            }
            let eq = 2 * neq + ti;
            for (s, c) in sigma_preimages(m, &t) {
                let (cs, rho) = orbit_rep(&s, chi);
                let gp = Perm(s.vertex(0).to_vec());
                let ri = rep_index[&rho];
                for (bi, b) in blocks[ri].iter().enumerate() {
                    sys.add(eq, b.act(&gp), starts[ri] + bi, c * cs);
                }
            }
            for (z, c) in prev.image(&t).terms() {
                sys.add_rhs(eq, z.clone(), c);
            }
            // keep the row present even when both sides vanish
            let _ = sys.row(eq, mu(0));
        }
    }
    let a = IntMatrix::from_triplets(sys.rhs.len(), ncols, sys.trip);
    let b: Vec<BigInt> = sys.rhs.iter().map(|&v| BigInt::from(v)).collect();
    match solve_integer(&a, &b)? {
        Solution::Solved(sol) => {
            let mut out = BTreeMap::new();
            for (xi, x) in reps.iter().enumerate() {
                let g = generator_degree(m, x);
                if g < 0 {
                    continue;
                }
                let terms = blocks[xi].iter().enumerate().filter(|(k, _)| !sol[starts[xi] + k].is_zero()).map(|(k, b)| {
                    let v = i64::try_from(&sol[starts[xi] + k]).map_err(|_| Error::Invalid("coefficient out of range".into()))?;
                    Ok((b.clone(), v))
                });
                let chain = Chain::from_terms(r, g as usize, terms.collect::<Result<Vec<_>>>()?);
                if !chain.is_zero() {
                    out.insert(x.clone(), chain);
                }
            }
            Ok(out)
        }
        Solution::Unsolvable { pivot, residue } => Err(Error::Unsolvable(format!(
            "η_{}({}): {} unknowns, {} equations, pivot {} against residue {}",
            m,
            r,
            ncols,
            a.rows(),
            pivot,
            residue
        ))),
    }
}

/// Outcome of [`verify_psi`] for one level and arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiCheck {
    pub n: usize,
    pub r: usize,
    pub chain_map: bool,
    pub cells: bool,
    pub tower: bool,
    pub augmentation: bool,
    /// `H_*(ψ)` is an isomorphism onto `H_*(E_n(r))`.
    pub homology_iso: bool,
}

impl PsiCheck {
    pub fn all(&self) -> bool {
        self.chain_map && self.cells && self.tower && self.augmentation && self.homology_iso
    }
}

/// Re-checks every level of `ψ` on the assembled cobar complexes, all
/// simplices and all cells.
pub fn verify_psi(fam: &TwistingElement, psi: &Psi) -> Result<Vec<PsiCheck>> {
    let mut out = Vec::new();
    for m in 1..=psi.n {
        let level = psi.level(m);
        let op = EnOperad::new(m, psi.max_arity)?;
        let maps = if m >= 2 { Some(vertex_maps(m, psi.max_arity)?) } else { None };
        let lower = if m >= 2 { Some((psi.level(m - 1), EnOperad::new(m - 1, psi.max_arity)?)) } else { None };
        for r in 2..=psi.max_arity {
            let basis = op.basis(r);
            let c = cobar(&en_dual(m, r)?, r)?;
            let (map, target) = psi_matrix(level, &op, &c, r)?;
            let chain_map = map.check(c.complex(), &target).is_ok();
            let homology_iso = chain_map && is_quasi_iso(c.complex(), &target, &map)?;

            let mut cells = true;
            for kappa in enumerate_kn(m, r) {
                let cell = build_cell(CellKind::E, m, &kappa)?;
                for x in basis.iter() {
                    if dual_kappa(x, m).leq(&kappa)? && !level.image(x).terms().all(|(s, _)| cell.contains(s)) {
                        cells = false;
                    }
                }
            }

            let augmentation = basis
                .iter()
                .filter(|x| generator_degree(m, x) == 0)
                .all(|x| level.image(x).augmentation() == fam.theta(m, x));

            let mut tower = true;
            if let (Some(maps), Some((prev, lop))) = (&maps, &lower) {
                for (ti, images) in maps.sigma[r].iter().enumerate() {
                    let t = lop.element(r, ti as u32);
                    if generator_degree(m - 1, t) < 0 {
                        continue;
                    }
                    let mut lhs = Chain::zero(r, generator_degree(m - 1, t) as usize);
                    for &(s, k) in images {
                        lhs.add_scaled(&level.image(op.element(r, s)), k);
                    }
                    if lhs != prev.image(t) {
                        tower = false;
                    }
                }
            }
            out.push(PsiCheck { n: m, r, chain_map, cells, tower, augmentation, homology_iso });
        }
    }
    Ok(out)
}

/// `ψ` as a degreewise matrix from `B^c(D_m)(r)` to `E_m(r)`.
fn psi_matrix(level: &PsiLevel, op: &EnOperad, c: &CobarComplex, r: usize) -> Result<(ChainMap, ChainComplex)> {
    let basis = op.basis(r);
    let target = basis.complex();
    let lo = *c.degrees().start();
    let mut maps = Vec::new();
    for d in c.degrees() {
        let rows = if d >= 0 { basis.basis(d as usize).len() } else { 0 };
        let mut trip = Vec::new();
        for (j, t) in c.basis(d).iter().enumerate() {
            let img = level.on_tree(op, t)?;
            if d < 0 && !img.is_zero() {
                return Err(Error::Verification(format!("ψ({}) is nonzero in negative degree", t)));
            }
            for (s, k) in img.terms() {
                let i = basis.basis(d as usize).binary_search(s).map_err(|_| Error::Verification(format!("ψ({}) leaves E_{}", t, level.n)))?;
                trip.push((i, j, k));
            }
        }
        maps.push(IntMatrix::from_triplets(rows, c.basis(d).len(), trip));
    }
    Ok((ChainMap { min_degree: lo, maps }, target))
}

/// `f` induces isomorphisms `H_*(C) ≅ H_*(C')` over ℤ: equal homology, and
/// `f(cycles) + boundaries` is saturated of full rank in the cycles.
pub fn is_quasi_iso(source: &ChainComplex, target: &ChainComplex, f: &ChainMap) -> Result<bool> {
    let lo = source.min_degree().min(target.min_degree());
    let hi = source.max_degree().max(target.max_degree());
    let hs = source.homology(Ring::Z);
    let ht = target.homology(Ring::Z);
    for d in lo..=hi {
        let (a, b) = (hs.betti(d), ht.betti(d));
        if a != b || hs.torsion(d) != ht.torsion(d) {
            return Ok(false);
        }
        if b == 0 && ht.torsion(d).is_empty() {
            continue;
        }
        let zero = |rows: usize, cols: usize| IntMatrix::zero(rows, cols);
        let fd = f.at(d).cloned().unwrap_or_else(|| zero(target.dim(d), source.dim(d)));
        let zs = crate::linalg::kernel_basis(&source.differential(d));
        let zt = crate::linalg::kernel_basis(&target.differential(d));
        let image = fd.mul(&zs)?;
        let bounds = target.differential(d + 1);
        // express f(Z) + B in the basis of Z' and compare with ℤ^{rank Z'}
        let gens = image.hstack(&bounds);
        let mut coords = Vec::new();
        for col in 0..gens.cols() {
            let y: Vec<BigInt> = (0..gens.rows()).map(|i| gens.get(i, col)).collect();
            match solve_integer(&zt, &y)? {
                Solution::Solved(x) => coords.push(x),
                Solution::Unsolvable { .. } => return Ok(false),
            }
        }
        let k = zt.cols();
        let trip = coords.iter().enumerate().flat_map(|(j, x)| x.iter().enumerate().map(move |(i, v)| (i, j, v.clone())));
        let m = IntMatrix::from_triplets(k, coords.len(), trip);
        let rt = crate::linalg::rank_torsion(&m);
        if rt.rank != k || !rt.torsion.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}
