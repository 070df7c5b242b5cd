//! Twisting elements `ω_n(r) ∈ E_n(r)_{Σ_r}` of degree `n(r-1) - 1`, solved
//! arity by arity from the twisting equation and the tower condition
//! `σ_*(ω_n) = ω_{n-1}`, and re-verified through the bar construction.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cofaces::{sigma_preimages, Cofaces};
use super::coinvariants::{character, orbit_rep, representatives};
use crate::barratt_eccles::{mu, PermSimplex};
use crate::cobar::{bar_differential, cobar_dual_basis_differential, collect, labeled_trees_in, twist_part, LazyEn};
use crate::error::{Error, Result};
use crate::linalg::{solve_sparse_i64, Solution};
use crate::operad_core::{two_vertex_sets, two_vertex_tree, Operad, Suspended, Tree};
use crate::perm::Perm;

/// `n(r-1) - 1`, the degree of `ω_n(r)`.
pub fn twisting_degree(n: usize, r: usize) -> Option<usize> {
    (n * (r - 1)).checked_sub(1)
}

/// The character `sgn^χ` under which `ω_n` is taken: `χ = n mod 2`.
pub fn twisting_character(n: usize) -> u8 {
    (n % 2) as u8
}

/// An element of `E_n(r)_{Σ_r}` in one degree, as coefficients on orbit
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinvariantChain {
    pub n: usize,
    pub r: usize,
    pub chi: u8,
    pub degree: usize,
    #[serde(with = "pairs")]
    pub terms: BTreeMap<PermSimplex, i64>,
}

mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::barratt_eccles::PermSimplex;

    pub fn serialize<S: Serializer>(m: &BTreeMap<PermSimplex, i64>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<PermSimplex, i64>, D::Error> {
        Ok(Vec::<(PermSimplex, i64)>::deserialize(d)?.into_iter().collect())
    }
}

impl CoinvariantChain {
    pub fn zero(n: usize, r: usize, chi: u8, degree: usize) -> CoinvariantChain {
        CoinvariantChain { n, r, chi, degree, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The pairing `θ(y)` of this chain with a simplex `y` of `E_n(r)`.
    pub fn theta(&self, y: &PermSimplex) -> i64 {
        if y.arity() != self.r || y.degree() != self.degree {
            return 0;
        }
        let (c, rep) = orbit_rep(y, self.chi);
        c * self.terms.get(&rep).copied().unwrap_or(0)
    }

    /// Every simplex `y` with `θ(y) != 0`, with its value.
    pub fn support_orbit(&self) -> Vec<(PermSimplex, i64)> {
        let perms = Perm::all(self.r);
        let mut out = Vec::with_capacity(self.terms.len() * perms.len());
        for (rep, &a) in &self.terms {
            for g in &perms {
                out.push((rep.act(g), character(&g.0, self.chi) * a));
            }
        }
        out
    }
}

/// The family `ω_n(r)` for `1 <= n <= n_max`, `2 <= r <= r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistingElement {
    pub n_max: usize,
    pub r_max: usize,
    elements: Vec<CoinvariantChain>,
}

impl TwistingElement {
    pub fn get(&self, n: usize, r: usize) -> Option<&CoinvariantChain> {
        if n == 0 || n > self.n_max || r < 2 || r > self.r_max {
            return None;
        }
        self.elements.get((n - 1) * (self.r_max - 1) + r - 2)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CoinvariantChain> {
        self.elements.iter()
    }

    /// `θ_n(y)` for a simplex of any arity in range.
    pub fn theta(&self, n: usize, y: &PermSimplex) -> i64 {
        self.get(n, y.arity()).map_or(0, |w| w.theta(y))
    }
}

/// Solves for `ω_n(r)` for all `n <= n_max`, `r <= r_max`.
pub fn solve_omega(n_max: usize, r_max: usize) -> Result<TwistingElement> {
    if n_max == 0 || r_max < 2 || r_max > 8 {
        return Err(Error::Invalid(format!("solve_omega needs n_max >= 1 and 2 <= r_max <= 8, got ({}, {})", n_max, r_max)));
    }
    let mut fam = TwistingElement { n_max, r_max, elements: Vec::new() };
    for n in 1..=n_max {
        for r in 2..=r_max {
            let w = if n == 1 { base_case(r) } else { solve_step(&fam, n, r)? };
            fam.elements.push(w);
        }
    }
    Ok(fam)
}

/// `ω_1(2) = [μ_0]`, `ω_1(r) = 0` for `r > 2`.
fn base_case(r: usize) -> CoinvariantChain {
    let mut w = CoinvariantChain::zero(1, r, twisting_character(1), r - 2);
    if r == 2 {
        w.terms.insert(mu(0), 1);
    }
    w
}

/// The rows of the twisting equation at `(n, r)`: for each representative `x`
/// of degree `N - 1`, `-Σ ⟨dy, x⟩ θ(y) = -Σ_J s_J θ(u) θ(v)`.
fn twisting_rows(
    fam: &TwistingElement,
    n: usize,
    r: usize,
    cols: &HashMap<PermSimplex, u32>,
    lower: &[PermSimplex],
) -> Vec<(Vec<(u32, i64)>, i64)> {
    let chi = twisting_character(n);
    let cf = Cofaces::new(n, r);
    let sets = two_vertex_sets(r);
    lower
        .par_iter()
        .map(|x| {
            let mut row: Vec<(u32, i64)> = Vec::new();
            for (k, y) in cf.of(x) {
                let (c, rep) = orbit_rep(&y, chi);
                let sign = if k % 2 == 0 { -1 } else { 1 };
                row.push((cols[&rep], sign * c));
            }
            row.sort_unstable();
            let mut merged: Vec<(u32, i64)> = Vec::with_capacity(row.len());
            for (j, v) in row {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            let mut rhs = 0i64;
            for set in &sets {
                if let Some(f) = cobar_dual_basis_differential(x, set, n) {
                    rhs -= f.sign * fam.theta(n, &f.root) * fam.theta(n, &f.inner);
                }
            }
            (merged, rhs)
        })
        .collect()
}

fn solve_step(fam: &TwistingElement, n: usize, r: usize) -> Result<CoinvariantChain> {
    let chi = twisting_character(n);
    let big_n = twisting_degree(n, r).expect("n, r >= 1");
    let reps = representatives(n, r, big_n);
    let unknowns = &reps[big_n];
    let cols: HashMap<PermSimplex, u32> = unknowns.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    let mut rows: Vec<Vec<(u32, i64)>> = Vec::new();
    let mut rhs: Vec<i64> = Vec::new();
    if big_n >= 1 {
        for (row, b) in twisting_rows(fam, n, r, &cols, &reps[big_n - 1]) {
            rows.push(row);
            rhs.push(b);
        }
    }
    // σ_*(ω_n(r)) = ω_{n-1}(r) on the coinvariants of E_{n-1}(r)
    let prev = fam.get(n - 1, r).expect("lower level solved first");
    let tchi = twisting_character(n - 1);
    let mut tower: BTreeMap<PermSimplex, Vec<(u32, i64)>> = BTreeMap::new();
    if let Some(tdeg) = big_n.checked_sub(r - 1) {
        for t in representatives(n - 1, r, tdeg).swap_remove(tdeg) {
            tower.insert(t, Vec::new());
        }
    }
    for (j, s) in unknowns.iter().enumerate() {
        if let Some((c, t)) = s.cap_sgn() {
            let flip = if (r - 1) * big_n % 2 == 1 { -1 } else { 1 };
            let (k, rep) = orbit_rep(&t, tchi);
            let row = tower.get_mut(&rep).ok_or_else(|| Error::Verification(format!("σ({}) leaves E_{}", s, n - 1)))?;
            row.push((j as u32, c * flip * k));
        }
    }
    for (t, row) in tower {
        rhs.push(prev.terms.get(&t).copied().unwrap_or(0));
        rows.push(row);
    }
    let dump = (rows.len() <= 200_000).then(|| (rows.clone(), rhs.clone()));
    match solve_sparse_i64(rows, unknowns.len(), &rhs)? {
        Solution::Solved(x) => {
            let mut w = CoinvariantChain::zero(n, r, chi, big_n);
            for (s, v) in unknowns.iter().zip(x) {
                if v != BigInt::from(0) {
                    let v = i64::try_from(&v).map_err(|_| Error::Invalid(format!("coefficient {} of ω_{}({}) out of range", v, n, r)))?;
                    w.terms.insert(s.clone(), v);
                }
            }
            Ok(w)
        }
        Solution::Unsolvable { pivot, residue } => {
            let path = dump.map(|(rows, rhs)| dump_system(n, r, unknowns, &rows, &rhs));
            Err(Error::Unsolvable(format!(
                "ω_{}({}): pivot {} against residue {}{}",
                n,
                r,
                pivot,
                residue,
                match path {
                    Some(Ok(p)) => format!("; system written to {}", p),
                    _ => String::new(),
                }
            )))
        }
    }
}

fn dump_system(n: usize, r: usize, unknowns: &[PermSimplex], rows: &[Vec<(u32, i64)>], rhs: &[i64]) -> std::io::Result<String> {
    let path = std::env::temp_dir().join(format!("omega_system_n{}_r{}.txt", n, r));
    let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
    for (j, s) in unknowns.iter().enumerate() {
        writeln!(f, "x{} = {}", j, s)?;
    }
    for (row, b) in rows.iter().zip(rhs) {
        let terms: Vec<String> = row.iter().map(|(j, v)| format!("{}*x{}", v, j)).collect();
        writeln!(f, "{} = {}", terms.join(" + "), b)?;
    }
    Ok(path.display().to_string())
}

/// Counts gathered by [`verify_omega`] for one `(n, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaCheck {
    pub n: usize,
    pub r: usize,
    pub degree: usize,
    pub support: usize,
    pub corollas_checked: usize,
    pub trees_checked: usize,
    pub tower_checked: usize,
}

/// Re-checks every `ω_n(r)` without the solver's equations:
///
/// * `d_B Φ = 0` for `Φ = Σ φ(T) T` in `B(Λ^n E_n)(r)`, with corolla
///   coefficients taken at orbit representatives and all other trees exactly;
/// * `Σ_{σ̃(s) = c t} c θ_n(s) = θ_{n-1}(t)` for the representatives `t` of
///   `E_{n-1}(r)`, through the preimages of the signed cap.
pub fn verify_omega(fam: &TwistingElement) -> Result<Vec<OmegaCheck>> {
    let mut out = Vec::new();
    for n in 1..=fam.n_max {
        for r in 2..=fam.r_max {
            out.push(verify_one(fam, n, r)?);
        }
    }
    Ok(out)
}

fn verify_one(fam: &TwistingElement, n: usize, r: usize) -> Result<OmegaCheck> {
    let w = fam.get(n, r).ok_or_else(|| Error::Invalid(format!("ω_{}({}) not in the family", n, r)))?;
    let big_n = twisting_degree(n, r).expect("n, r >= 1");
    if w.degree != big_n || w.chi != twisting_character(n) {
        return Err(Error::Verification(format!("ω_{}({}) has degree {} and character {}", n, r, w.degree, w.chi)));
    }
    if let Some(s) = w.terms.keys().find(|s| !s.in_en(n) || !s.is_identity_start() || s.degree() != big_n) {
        return Err(Error::Verification(format!("ω_{}({}) has the bad term {}", n, r, s)));
    }
    let mut check = OmegaCheck { n, r, degree: big_n, support: w.terms.len(), corollas_checked: 0, trees_checked: 0, tower_checked: 0 };
    let mut corolla: HashMap<PermSimplex, i64> = HashMap::new();

    // internal part of corollas, read off the faces of the support orbit
    let perms = Perm::all(r);
    for (rho, &a) in &w.terms {
        for g in &perms {
            let y = rho.act(g);
            let th = character(&g.0, w.chi) * a;
            for k in 0..=y.degree() {
                if k > 0 && !g.is_identity() {
                    break;
                }
                if let Some(f) = y.face(k).filter(PermSimplex::is_identity_start) {
                    let sign = if k % 2 == 0 { -1 } else { 1 };
                    *corolla.entry(f).or_insert(0) += sign * th;
                }
            }
        }
    }

    if r >= 3 {
        let lazy = LazyEn::new(n, r)?;
        let op = Suspended::new(&lazy, n as i64);
        let base = lazy.base();
        let label_theta = |k: usize, l: u32| fam.theta(n, base.element(k, l));
        let supports: Vec<Vec<(u32, i64)>> = (0..=r)
            .map(|k| {
                if (2..r).contains(&k) {
                    (0..base.dim(k) as u32).map(|l| (l, label_theta(k, l))).filter(|e| e.1 != 0).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        // contractions of two-vertex trees landing on representative corollas
        for set in two_vertex_sets(r) {
            let t = set.len();
            let s = r - t + 1;
            for &(u, tu) in &supports[s] {
                for &(v, tv) in &supports[t] {
                    for (tree, c) in collect(twist_part(&op, &two_vertex_tree(r, &set, u, v))) {
                        let Tree::Node { label, .. } = tree else { unreachable!() };
                        let z = lazy.element(r, label);
                        if z.is_identity_start() {
                            *corolla.entry(z).or_insert(0) += c * tu * tv;
                        }
                    }
                }
            }
        }
        // every tree with at least two vertices
        let mut phi: Vec<(Tree, i64)> = Vec::new();
        for tree in labeled_trees_in(base, r, 2..r) {
            let c: i64 = tree.vertices().iter().map(|&(k, l)| label_theta(k, l)).product();
            if c != 0 {
                phi.push((tree, c));
            }
        }
        check.trees_checked = phi.len();
        let mut image = Vec::new();
        for (tree, c) in &phi {
            for (u, d) in bar_differential(&op, tree) {
                if u.vertex_count() > 1 {
                    image.push((u, c * d));
                }
            }
        }
        if let Some((u, c)) = collect(image).into_iter().next() {
            return Err(Error::Verification(format!("d_B Φ has the coefficient {} on {} in arity {} for n = {}", c, u, r, n)));
        }
    }
    corolla.retain(|_, c| *c != 0);
    if let Some((x, c)) = corolla.iter().next() {
        return Err(Error::Verification(format!("d_B Φ has the coefficient {} on the corolla {} for n = {}", c, x, n)));
    }
    check.corollas_checked = big_n.checked_sub(1).map_or(0, |d| representatives(n, r, d)[d].len());

    if n >= 2 {
        let prev = fam.get(n - 1, r).expect("tower below");
        if let Some(tdeg) = big_n.checked_sub(r - 1) {
            let targets = representatives(n - 1, r, tdeg).swap_remove(tdeg);
            for t in &targets {
                let lhs: i64 = sigma_preimages(n, t).iter().map(|(s, c)| c * w.theta(s)).sum();
                if lhs != prev.theta(t) {
                    return Err(Error::Verification(format!("σ_* ω_{}({}) differs from ω_{}({}) at {}", n, r, n - 1, r, t)));
                }
            }
            check.tower_checked = targets.len();
        } else if !prev.is_zero() {
            return Err(Error::Verification(format!("ω_{}({}) must vanish", n - 1, r)));
        }
    }
    Ok(check)
}
