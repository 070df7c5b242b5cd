use std::collections::{HashMap, HashSet};

use super::weight::{enumerate_kn, WeightSystem};
use crate::barratt_eccles::{en_basis, PermSimplex};
use crate::error::{Error, Result};
use crate::linalg::{rank_torsion, ChainComplex, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// `E(κ) = Span{s : κ(s) ≤ κ}` inside `E(r)`.
    E,
    /// `D_n(κ) = Span{s^∨ : κ^∨(s) ≤ κ}` inside the dual of `E_n(r)`.
    D,
}

/// A cell of `E(r)` or of the dual module `D_n(r)`.
///
/// The ambient basis is the degree-major basis of `E_m(r)`, with `m` the
/// level of `κ` for E-cells and `m = n` for D-cells.
#[derive(Clone, Debug)]
pub struct Cell {
    pub kind: CellKind,
    pub level: usize,
    pub kappa: WeightSystem,
    /// Basis simplices by degree, sorted.
    pub basis: Vec<Vec<PermSimplex>>,
    /// `ambient x cell` inclusion matrix.
    pub inclusion: IntMatrix,
}

/// `κ^∨(s) = (n - 1 - μ(s), σ(s))`.
pub fn dual_kappa(s: &PermSimplex, n: usize) -> WeightSystem {
    WeightSystem::of_simplex(s).complement(n)
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.basis.iter().map(Vec::len).sum()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, s: &PermSimplex) -> bool {
        self.basis.get(s.degree()).is_some_and(|b| b.binary_search(s).is_ok())
    }

    pub fn iter(&self) -> impl Iterator<Item = &PermSimplex> {
        self.basis.iter().flatten()
    }

    /// The cell as a chain complex under the face differential of `E`.
    /// Only meaningful for E-cells.
    pub fn complex(&self) -> Result<ChainComplex> {
        let top = self.basis.len();
        let index: Vec<HashMap<&PermSimplex, usize>> =
            self.basis.iter().map(|b| b.iter().enumerate().map(|(k, s)| (s, k)).collect()).collect();
        let mut diffs = Vec::with_capacity(top);
        for d in 0..top {
            if d == 0 {
                diffs.push(IntMatrix::zero(0, self.basis[0].len()));
                continue;
            }
            let mut entries = Vec::new();
            for (c, s) in self.basis[d].iter().enumerate() {
                for k in 0..=d {
                    if let Some(f) = s.face(k) {
                        let row = *index[d - 1]
                            .get(&f)
                            .ok_or_else(|| Error::Verification(format!("face {} of {} leaves the cell", f, s)))?;
                        entries.push((row, c, if k % 2 == 0 { 1i64 } else { -1 }));
                    }
                }
            }
            diffs.push(IntMatrix::from_triplets(self.basis[d - 1].len(), self.basis[d].len(), entries));
        }
        ChainComplex::new(0, self.dims(), diffs)
    }

    /// Checks that the cell is closed under the ambient differential:
    /// faces for E-cells, cofaces for D-cells.
    pub fn check_closed(&self) -> Result<()> {
        match self.kind {
            CellKind::E => self.complex().map(|_| ()),
            CellKind::D => {
                let ambient = en_basis(self.level, self.kappa.arity())?;
                for d in 1..=ambient.max_degree() {
                    for t in ambient.basis(d) {
                        if self.contains(t) {
                            continue;
                        }
                        // the coboundary of s^∨ meets t^∨ with the sum of face signs
                        let mut hits: HashMap<PermSimplex, i64> = HashMap::new();
                        for k in 0..=d {
                            if let Some(f) = t.face(k) {
                                *hits.entry(f).or_default() += if k % 2 == 0 { 1 } else { -1 };
                            }
                        }
                        if let Some((s, _)) = hits.iter().find(|(s, c)| **c != 0 && self.contains(s)) {
                            return Err(Error::Verification(format!("coboundary of {}^∨ leaves the cell through {}", s, t)));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// Builds `E(κ)` (for `kind = E`, ignoring `n`) or `D_n(κ)`.
pub fn build_cell(kind: CellKind, n: usize, kappa: &WeightSystem) -> Result<Cell> {
    let r = kappa.arity();
    let level = match kind {
        CellKind::E => {
            if !kappa.is_valid() {
                return Err(Error::Invalid(format!("E-cell of {} with negative weights", kappa)));
            }
            kappa.level()
        }
        CellKind::D => n,
    };
    let ambient = en_basis(level, r)?;
    let member = |s: &PermSimplex| match kind {
        CellKind::E => WeightSystem::of_simplex(s).leq_unchecked(kappa),
        CellKind::D => dual_kappa(s, n).leq_unchecked(kappa),
    };
    let mut basis = Vec::new();
    let mut entries = Vec::new();
    let mut offset = 0;
    let mut col = 0;
    for d in 0..=ambient.max_degree() {
        let mut level_basis = Vec::new();
        for (k, s) in ambient.basis(d).iter().enumerate() {
            if member(s) {
                level_basis.push(s.clone());
                entries.push((offset + k, col, 1i64));
                col += 1;
            }
        }
        offset += ambient.basis(d).len();
        basis.push(level_basis);
    }
    while basis.len() > 1 && basis.last().is_some_and(Vec::is_empty) {
        basis.pop();
    }
    let inclusion = IntMatrix::from_triplets(ambient.len(), col, entries);
    Ok(Cell { kind, level, kappa: kappa.clone(), basis, inclusion })
}

/// Basis of `∪_{κ ∈ K_n(r)} E(κ)`, as a set.
pub fn union_cells(n: usize, r: usize) -> Result<HashSet<PermSimplex>> {
    let mut out = HashSet::new();
    for kappa in enumerate_kn(n, r) {
        let cell = build_cell(CellKind::E, n, &kappa)?;
        out.extend(cell.iter().cloned());
    }
    Ok(out)
}

/// The latching object `L D_n(κ) = Span{s^∨ : κ^∨(s) ⪇ κ}` and its inclusion
/// into `D_n(κ)`.
#[derive(Clone, Debug)]
pub struct Latching {
    pub cell: Cell,
    pub basis: Vec<PermSimplex>,
    /// `D_n(κ) x L D_n(κ)` inclusion.
    pub inclusion: IntMatrix,
}

pub fn latching(n: usize, kappa: &WeightSystem) -> Result<Latching> {
    let cell = build_cell(CellKind::D, n, kappa)?;
    let mut basis = Vec::new();
    let mut entries = Vec::new();
    for (k, s) in cell.iter().enumerate() {
        if dual_kappa(s, n).lt(kappa) {
            entries.push((k, basis.len(), 1i64));
            basis.push(s.clone());
        }
    }
    let inclusion = IntMatrix::from_triplets(cell.dim(), basis.len(), entries);
    Ok(Latching { cell, basis, inclusion })
}

/// The latching object as the union of the cells `D_n(α)`, `α ⪇ κ`, with
/// `α` running over the weight systems of the same arity whose weights lie
/// in `[min μ - n, max μ]`. Used to cross-check [`latching`].
pub fn latching_by_colimit(n: usize, kappa: &WeightSystem) -> Result<HashSet<PermSimplex>> {
    let r = kappa.arity();
    let lo = kappa.weights().iter().copied().min().unwrap_or(0).min(0) - n as i64;
    let hi = kappa.weights().iter().copied().max().unwrap_or(0);
    let span = (hi - lo + 1) as usize;
    let mut out = HashSet::new();
    for shifted in enumerate_kn(span, r) {
        let mu = shifted.weights().iter().map(|w| w + lo).collect();
        let alpha = WeightSystem::new(mu, shifted.sigma().clone())?;
        if alpha.lt(kappa) {
            out.extend(build_cell(CellKind::D, n, &alpha)?.iter().cloned());
        }
    }
    Ok(out)
}

/// Outcome of the split-injectivity check for the extended latching morphism
/// `D_{n-1}(κ) ⊕_{L D_{n-1}(κ)} L D_n(κ) → D_n(κ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    /// Dimension of the pushout.
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    /// `σ^*` sends `D_{n-1}(κ)` into `D_n(κ)` and `L D_{n-1}(κ)` into `L D_n(κ)`.
    pub preserves_cells: bool,
    pub torsion_free_cokernel: bool,
}

impl SplitReport {
    pub fn is_split_injective(&self) -> bool {
        self.preserves_cells && self.rank == self.source_dim && self.torsion_free_cokernel
    }
}

/// `σ^*: D_{n-1}(r) → D_n(r)` restricted to `D_{n-1}(κ)`, as a matrix with
/// rows indexed by the basis of `D_n(κ)` (`None` when the image leaves it).
fn sigma_star_on_cell(n: usize, kappa: &WeightSystem, source: &Cell, target: &Cell) -> Result<Option<IntMatrix>> {
    let r = kappa.arity();
    let ambient = en_basis(n, r)?;
    let source_index: HashMap<&PermSimplex, usize> = source.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let target_index: HashMap<&PermSimplex, usize> = target.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut entries = Vec::new();
    for s in ambient.iter() {
        let Some((sign, tail)) = s.cap_sgn() else { continue };
        let Some(&c) = source_index.get(&tail) else { continue };
        match target_index.get(s) {
            Some(&row) => entries.push((row, c, sign)),
            None => return Ok(None),
        }
    }
    Ok(Some(IntMatrix::from_triplets(target.dim(), source.dim(), entries)))
}

/// Checks that the extended latching morphism `(σ^*, λ)` is split injective.
pub fn latching_split(n: usize, kappa: &WeightSystem) -> Result<SplitReport> {
    if n < 2 {
        return Err(Error::Invalid("the latching extension needs n >= 2".into()));
    }
    let upper = latching(n, kappa)?;
    let lower = latching(n - 1, kappa)?;
    let target = &upper.cell;
    let source_dim = lower.cell.dim() + upper.basis.len() - lower.basis.len();
    let sigma = sigma_star_on_cell(n, kappa, &lower.cell, target)?;
    let Some(sigma) = sigma else {
        return Ok(SplitReport {
            source_dim,
            target_dim: target.dim(),
            rank: 0,
            preserves_cells: false,
            torsion_free_cokernel: false,
        });
    };
    // σ^* on L D_{n-1}(κ) must land in L D_n(κ)
    let upper_latching: HashSet<&PermSimplex> = upper.basis.iter().collect();
    let target_list: Vec<&PermSimplex> = target.iter().collect();
    let lower_index: HashMap<&PermSimplex, usize> = lower.cell.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let lower_latching: HashSet<usize> = lower.basis.iter().map(|s| lower_index[s]).collect();
    let preserves = sigma.triplets().all(|(row, col, _)| !lower_latching.contains(&col) || upper_latching.contains(target_list[row]));
    let m = sigma.hstack(&upper.inclusion);
    let rt = rank_torsion(&m);
    Ok(SplitReport {
        source_dim,
        target_dim: target.dim(),
        rank: rt.rank,
        preserves_cells: preserves,
        torsion_free_cokernel: rt.torsion.is_empty(),
    })
}
