//! Twisted coinvariants `E_n(r)_{Σ_r}` for the relation `w·x ~ sgn(w)^χ x`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::barratt_eccles::{Chain, PermSimplex, Walker};
use crate::error::{Error, Result};
use crate::linalg::{subcomplex_kernel, ChainComplex, ChainMap, IntMatrix, KernelComplex};
use crate::perm::{sign_of, Perm};

/// `sgn(w)^χ` for the permutation with value sequence `w`.
pub fn character(w: &[u8], chi: u8) -> i64 {
    if chi % 2 == 0 {
        1
    } else {
        sign_of(w)
    }
}

/// The orbit representative of `s` and the sign `c` with `[s] = c [rep]`.
/// The representative is the orbit member whose first vertex is the identity.
pub fn orbit_rep(s: &PermSimplex, chi: u8) -> (i64, PermSimplex) {
    let g = Perm(s.vertex(0).to_vec());
    (character(&g.0, chi), s.act(&g.inverse()))
}

/// Orbit representatives of `E_n(r)` in degrees `0..=max_degree`, sorted
/// within each degree.
pub fn representatives(n: usize, r: usize, max_degree: usize) -> Vec<Vec<PermSimplex>> {
    let walker = Walker::new(n, r);
    let mut out = vec![Vec::new(); max_degree + 1];
    walker.visit(&[0], Some(max_degree), |p| {
        if p.len() <= max_degree + 1 {
            out[p.len() - 1].push(walker.simplex(p));
        }
    });
    for v in &mut out {
        v.sort_unstable();
    }
    out
}

/// The complex `E_n(r)_{Σ_r}` with character `sgn^χ`, in the degree window
/// `lo..=hi` (the differential out of `lo` is dropped).
#[derive(Clone, Debug)]
pub struct CoinvariantComplex {
    pub n: usize,
    pub r: usize,
    pub chi: u8,
    lo: usize,
    reps: Vec<Vec<PermSimplex>>,
    index: HashMap<PermSimplex, usize>,
    complex: ChainComplex,
}

/// `E_n(r)_{Σ_r}` in all degrees.
pub fn coinvariants(n: usize, r: usize, chi: u8) -> Result<CoinvariantComplex> {
    if n == 0 || r == 0 {
        return Err(Error::Invalid("coinvariants need n >= 1 and r >= 1".into()));
    }
    coinvariants_in(n, r, chi, 0, (n - 1) * r * (r - 1) / 2)
}

/// `E_n(r)_{Σ_r}` restricted to degrees `lo..=hi`.
pub fn coinvariants_in(n: usize, r: usize, chi: u8, lo: usize, hi: usize) -> Result<CoinvariantComplex> {
    if n == 0 || r == 0 || lo > hi {
        return Err(Error::Invalid(format!("bad coinvariant window n={} r={} {}..={}", n, r, lo, hi)));
    }
    let all = representatives(n, r, hi);
    let reps: Vec<Vec<PermSimplex>> = all.into_iter().skip(lo).collect();
    let mut index = HashMap::new();
    for level in &reps {
        for (k, s) in level.iter().enumerate() {
            index.insert(s.clone(), k);
        }
    }
    let mut diffs = Vec::with_capacity(reps.len());
    for (k, level) in reps.iter().enumerate() {
        if k == 0 {
            diffs.push(IntMatrix::zero(0, level.len()));
            continue;
        }
        let mut trip = Vec::new();
        for (col, s) in level.iter().enumerate() {
            for (f, c) in coinvariant_boundary(s, chi) {
                trip.push((index[&f], col, c));
            }
        }
        diffs.push(IntMatrix::from_triplets(reps[k - 1].len(), level.len(), trip));
    }
    let dims = reps.iter().map(Vec::len).collect();
    let complex = ChainComplex::new(lo as i64, dims, diffs)?;
    Ok(CoinvariantComplex { n, r, chi, lo, reps, index, complex })
}

/// `δ[x] = Σ (-1)^k [d_k x]` on a representative, reduced to representatives.
pub fn coinvariant_boundary(x: &PermSimplex, chi: u8) -> Vec<(PermSimplex, i64)> {
    let mut out: Vec<(PermSimplex, i64)> = Vec::new();
    for k in 0..=x.degree() {
        let Some(f) = x.face(k) else { continue };
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let (c, rep) = if k == 0 { orbit_rep(&f, chi) } else { (1, f) };
        match out.iter_mut().find(|(s, _)| *s == rep) {
            Some(e) => e.1 += sign * c,
            None => out.push((rep, sign * c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out
}

impl CoinvariantComplex {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn basis(&self, d: usize) -> &[PermSimplex] {
        d.checked_sub(self.lo).and_then(|k| self.reps.get(k)).map_or(&[], Vec::as_slice)
    }

    pub fn find(&self, rep: &PermSimplex) -> Option<usize> {
        self.index.get(rep).copied()
    }

    /// `π: E_n(r) -> E_n(r)_{Σ_r}` on a homogeneous chain.
    pub fn project(&self, c: &Chain) -> Result<Vec<BigInt>> {
        let d = c.degree();
        let mut out = vec![BigInt::from(0); self.basis(d).len()];
        for (s, k) in c.terms() {
            let (sign, rep) = orbit_rep(s, self.chi);
            let i = self.find(&rep).ok_or_else(|| Error::Invalid(format!("{} lies outside the window", s)))?;
            out[i] += sign * k;
        }
        Ok(out)
    }

    /// The section sending `[x]` to the representative `x`.
    pub fn section(&self, d: usize, v: &[BigInt]) -> Result<Chain> {
        let basis = self.basis(d);
        if v.len() != basis.len() {
            return Err(Error::Dimension(format!("{} coordinates for {} representatives", v.len(), basis.len())));
        }
        let terms = basis.iter().zip(v).filter(|(_, c)| **c != BigInt::from(0)).map(|(s, c)| {
            let c = i64::try_from(c).map_err(|_| Error::Invalid("coefficient out of range".into()))?;
            Ok((s.clone(), c))
        });
        Ok(Chain::from_terms(self.r, d, terms.collect::<Result<Vec<_>>>()?))
    }
}

/// `σ_*: E_n(r)_{Σ_r} -> E_{n-1}(r)_{Σ_r}` for the characters `n` and `n - 1`,
/// in the degree window `lo..=hi` of the source, and its kernel.
pub fn sigma_kernel(n: usize, r: usize, lo: usize, hi: usize) -> Result<KernelComplex> {
    if n < 2 || r < 2 {
        return Err(Error::Invalid("σ_* needs n >= 2 and r >= 2".into()));
    }
    let source = coinvariants_in(n, r, (n % 2) as u8, lo, hi)?;
    // σ̃ lowers the degree by r - 1; the target is regraded to match
    let shift = r - 1;
    let tlo = lo.saturating_sub(shift);
    let thi = hi.saturating_sub(shift).max(tlo);
    let target = coinvariants_in(n - 1, r, ((n - 1) % 2) as u8, tlo, thi)?;
    let tcomplex = regrade(target.complex(), shift as i64, lo as i64, hi as i64)?;
    let mut maps = Vec::new();
    for d in lo..=hi {
        let mut trip = Vec::new();
        for (col, s) in source.basis(d).iter().enumerate() {
            if let Some((c, t)) = s.cap_sgn() {
                let flip = if (r - 1) * d % 2 == 1 { -1 } else { 1 };
                let (k, rep) = orbit_rep(&t, target.chi);
                let row = target.find(&rep).ok_or_else(|| Error::Verification(format!("σ({}) leaves E_{}", s, n - 1)))?;
                trip.push((row, col, c * flip * k));
            }
        }
        let rows = if d >= shift { target.basis(d - shift).len() } else { 0 };
        maps.push(IntMatrix::from_triplets(rows, source.basis(d).len(), trip));
    }
    subcomplex_kernel(source.complex(), &tcomplex, &ChainMap { min_degree: lo as i64, maps })
}

/// The complex `c` with degrees raised by `shift`, restricted to `lo..=hi`.
fn regrade(c: &ChainComplex, shift: i64, lo: i64, hi: i64) -> Result<ChainComplex> {
    let dims: Vec<usize> = (lo..=hi).map(|d| c.dim(d - shift)).collect();
    let diffs = (lo..=hi)
        .enumerate()
        .map(|(k, d)| if k == 0 { IntMatrix::zero(0, dims[0]) } else { c.differential(d - shift) })
        .collect();
    ChainComplex::new(lo, dims, diffs)
}

/// No non-identity permutation fixes a simplex of `E_n(r)`.
pub fn action_is_free(n: usize, r: usize) -> Result<bool> {
    let basis = crate::barratt_eccles::en_basis(n, r)?;
    let perms: Vec<Perm> = Perm::all(r).into_iter().filter(|p| !p.is_identity()).collect();
    let free = basis.iter().all(|s| perms.iter().all(|g| s.act(g) != *s));
    Ok(free)
}
