//! Chain complexes of finitely generated free abelian groups and their homology.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::matrix::IntMatrix;
use super::reduce::{rank_mod_p, rank_torsion, RankTorsion};
use crate::error::{Error, Result};

/// Coefficients for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Z,
    Fp(u64),
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        let p = match s {
            "Z" | "z" => return Ok(Ring::Z),
            "F2" => 2,
            "F3" => 3,
            _ => s
                .strip_prefix("Fp:")
                .and_then(|t| t.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown ring {:?}", s)))?,
        };
        if p < 2 || (2..p).take_while(|k| k * k <= p).any(|k| p % k == 0) {
            return Err(Error::Parse(format!("{} is not prime", p)));
        }
        Ok(Ring::Fp(p))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Fp(p) => write!(f, "F{}", p),
        }
    }
}

/// Degreewise free chain complex `C_d` for `d` in `min_degree..=max_degree`,
/// with `differential(d): C_d -> C_{d-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    min_degree: i64,
    dims: Vec<usize>,
    labels: Option<Vec<Vec<String>>>,
    diffs: Vec<IntMatrix>,
}

impl ChainComplex {
    /// `diffs[k]` is the differential out of degree `min_degree + k`; the
    /// first one must have zero rows.
    pub fn new(min_degree: i64, dims: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<ChainComplex> {
        let c = ChainComplex::new_unchecked(min_degree, dims, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Shape checks only; `δ² = 0` is left to the caller.
    pub fn new_unchecked(min_degree: i64, dims: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<ChainComplex> {
        if dims.len() != diffs.len() {
            return Err(Error::Dimension(format!("{} degrees but {} differentials", dims.len(), diffs.len())));
        }
        for (k, m) in diffs.iter().enumerate() {
            let target = if k == 0 { 0 } else { dims[k - 1] };
            if m.cols() != dims[k] || m.rows() != target {
                return Err(Error::Dimension(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    min_degree + k as i64,
                    m.rows(),
                    m.cols(),
                    target,
                    dims[k]
                )));
            }
        }
        Ok(ChainComplex { min_degree, dims, labels: None, diffs })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<ChainComplex> {
        if labels.len() != self.dims.len() || labels.iter().zip(&self.dims).any(|(l, d)| l.len() != *d) {
            return Err(Error::Dimension("label lists do not match the basis sizes".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn zero() -> ChainComplex {
        ChainComplex { min_degree: 0, dims: Vec::new(), labels: None, diffs: Vec::new() }
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_degree..=self.max_degree()
    }

    fn index(&self, d: i64) -> Option<usize> {
        let k = d - self.min_degree;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    pub fn dim(&self, d: i64) -> usize {
        self.index(d).map_or(0, |k| self.dims[k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self, d: i64) -> Option<&[String]> {
        let k = self.index(d)?;
        self.labels.as_ref().map(|l| l[k].as_slice())
    }

    /// The differential `C_d -> C_{d-1}` (a zero matrix outside the range).
    pub fn differential(&self, d: i64) -> IntMatrix {
        match self.index(d) {
            Some(k) => self.diffs[k].clone(),
            None => IntMatrix::zero(self.dim(d - 1), self.dim(d)),
        }
    }

    fn differential_ref(&self, d: i64) -> Option<&IntMatrix> {
        self.index(d).map(|k| &self.diffs[k])
    }

    pub fn check_square_zero(&self) -> Result<()> {
        let bad = (self.min_degree + 1..=self.max_degree()).collect::<Vec<_>>().into_par_iter().find_first(|&d| {
            let (Some(a), Some(b)) = (self.differential_ref(d - 1), self.differential_ref(d)) else { return false };
            !a.mul(b).map(|p| p.is_zero()).unwrap_or(false)
        });
        match bad {
            Some(d) => Err(Error::NotAComplex { degree: d }),
            None => Ok(()),
        }
    }

    /// Homology in every degree of the range.
    pub fn homology(&self, ring: Ring) -> HomologyReport {
        let degs: Vec<i64> = self.degrees().collect();
        self.homology_in(&degs, ring)
    }

    /// Homology in the listed degrees only.
    pub fn homology_in(&self, degrees: &[i64], ring: Ring) -> HomologyReport {
        let mut needed: Vec<i64> = degrees.iter().flat_map(|&d| [d, d + 1]).collect();
        needed.sort_unstable();
        needed.dedup();
        let ranks: Vec<(i64, RankTorsion)> = needed
            .par_iter()
            .map(|&d| {
                let rt = match self.differential_ref(d) {
                    None => RankTorsion { rank: 0, torsion: Vec::new() },
                    Some(m) => match ring {
                        Ring::Z => rank_torsion(m),
                        Ring::Fp(p) => RankTorsion { rank: rank_mod_p(m, p), torsion: Vec::new() },
                    },
                };
                (d, rt)
            })
            .collect();
        let get = |d: i64| &ranks.iter().find(|(e, _)| *e == d).expect("rank computed").1;
        let groups = degrees
            .iter()
            .map(|&d| {
                let out = get(d);
                let inc = get(d + 1);
                DegreeHomology { degree: d, betti: self.dim(d) - out.rank - inc.rank, torsion: inc.torsion.clone() }
            })
            .collect();
        HomologyReport { ring, groups }
    }
}

/// Homology in one degree: `ℤ^betti ⊕ ⊕ ℤ/t` (or a vector space of dimension
/// `betti` over a field).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub degree: i64,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl Serialize for DegreeHomology {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|t| match u64::try_from(t) {
                Ok(v) => serde_json::Value::from(v),
                Err(_) => serde_json::Value::from(t.to_string()),
            })
            .collect();
        let mut st = s.serialize_struct("DegreeHomology", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("betti", &self.betti)?;
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub ring: Ring,
    pub groups: Vec<DegreeHomology>,
}

impl HomologyReport {
    pub fn betti(&self, d: i64) -> usize {
        self.groups.iter().find(|g| g.degree == d).map_or(0, |g| g.betti)
    }

    pub fn torsion(&self, d: i64) -> Vec<BigInt> {
        self.groups.iter().find(|g| g.degree == d).map_or(Vec::new(), |g| g.torsion.clone())
    }

    /// Betti numbers for the listed degree range, zero outside the report.
    pub fn betti_vector(&self, degrees: std::ops::RangeInclusive<i64>) -> Vec<usize> {
        degrees.map(|d| self.betti(d)).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }

    /// Degrees with nonzero homology.
    pub fn support(&self) -> Vec<i64> {
        self.groups.iter().filter(|g| !g.is_zero()).map(|g| g.degree).collect()
    }

    /// JSON array `[{"degree", "betti", "torsion"}, ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.groups).expect("serializable")
    }
}

impl fmt::Display for HomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            write!(f, "H_{} = ", g.degree)?;
            let mut parts: Vec<String> = Vec::new();
            if g.betti > 0 {
                parts.push(match self.ring {
                    Ring::Z if g.betti == 1 => "Z".to_string(),
                    Ring::Z => format!("Z^{}", g.betti),
                    Ring::Fp(p) if g.betti == 1 => format!("F{}", p),
                    Ring::Fp(p) => format!("F{}^{}", p, g.betti),
                });
            }
            parts.extend(g.torsion.iter().map(|t| format!("Z/{}", t)));
            if parts.is_empty() {
                parts.push("0".into());
            }
            writeln!(f, "{}", parts.join(" + "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> ChainComplex {
        ChainComplex::new(0, vec![1], vec![IntMatrix::zero(0, 1)]).unwrap()
    }

    #[test]
    fn point_homology() {
        let h = point().homology(Ring::Z);
        assert_eq!(h.betti(0), 1);
        assert_eq!(h.to_json(), serde_json::json!([{"degree": 0, "betti": 1, "torsion": []}]));
    }

    #[test]
    fn projective_plane_cellular() {
        // Z <-0- Z <-2- Z
        let c = ChainComplex::new(
            0,
            vec![1, 1, 1],
            vec![IntMatrix::zero(0, 1), IntMatrix::zero(1, 1), IntMatrix::from_triplets(1, 1, vec![(0, 0, 2)])],
        )
        .unwrap();
        let h = c.homology(Ring::Z);
        assert_eq!(h.betti_vector(0..=2), vec![1, 0, 0]);
        assert_eq!(h.torsion(1), vec![BigInt::from(2)]);
        let h2 = c.homology(Ring::Fp(2));
        assert_eq!(h2.betti_vector(0..=2), vec![1, 1, 1]);
    }

    #[test]
    fn rejects_non_complex() {
        let one = IntMatrix::identity(1);
        let err = ChainComplex::new(0, vec![1, 1, 1], vec![IntMatrix::zero(0, 1), one.clone(), one]).unwrap_err();
        assert!(matches!(err, Error::NotAComplex { degree: 2 }));
    }

    #[test]
    fn ring_parsing() {
        assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Z);
        assert_eq!("F3".parse::<Ring>().unwrap(), Ring::Fp(3));
        assert_eq!("Fp:7".parse::<Ring>().unwrap(), Ring::Fp(7));
        assert!("Fp:9".parse::<Ring>().is_err());
    }
}
