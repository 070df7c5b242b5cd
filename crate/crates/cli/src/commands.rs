//! `dims`, `homology`, `omega`, `phi` and `psi`.

use serde_json::{json, Value};

use opkz::barratt_eccles::{en_basis_capped, Chain, PermSimplex};
use opkz::cobar::{cobar, en_dual, presented_dual};
use opkz::linalg::{HomologyReport, Ring};
use opkz::operad_core::Presentation;
use opkz::twisting::{
    build_phi, coinvariants, generator_degree, lift_psi, solve_omega, twisting_character, verify_omega, verify_psi,
    CoinvariantChain, TwistingElement,
};

use crate::cache::{cache_key, cached, Cache, VERSION};
use crate::config::{RunConfig, Target};
use crate::error::{CliError, Result};
use crate::report::Report;

/// Fails with a resource-cap error if `E_n(r)` exceeds the simplex budget.
pub fn precheck(cfg: &RunConfig, n: usize, r: usize) -> Result<()> {
    en_basis_capped(n, r, cfg.simplex_cap)?;
    Ok(())
}

pub fn dims(cfg: &RunConfig) -> Result<Report> {
    let (n, r) = (cfg.n, cfg.arity);
    let basis = en_basis_capped(n, r, cfg.simplex_cap)?;
    let mut rep = Report::new(format!("ranks of E_{}({})", n, r), &["n", "arity", "degree", "rank"]);
    let mut data = Vec::new();
    for (d, k) in basis.dims().into_iter().enumerate() {
        if cfg.degree_max.is_some_and(|m| d > m) {
            break;
        }
        rep.row(vec![n.to_string(), r.to_string(), d.to_string(), k.to_string()]);
        data.push(json!({ "n": n, "arity": r, "degree": d, "rank": k }));
    }
    rep.data = Value::Array(data);
    Ok(rep)
}

fn degrees_up_to(h: &HomologyReport, max: Option<usize>) -> Vec<i64> {
    h.groups.iter().map(|g| g.degree).filter(|d| max.map_or(true, |m| *d <= m as i64)).collect()
}

fn gerstenhaber_presentation(n: usize) -> Presentation {
    if n == 1 {
        Presentation::associative()
    } else {
        Presentation::gerstenhaber(n)
    }
}

pub fn homology(cfg: &RunConfig, cache: Option<&Cache>, target: Target, chi: Option<u8>) -> Result<Report> {
    let (n, r) = (cfg.n, cfg.arity);
    precheck(cfg, n, r)?;
    let chi = chi.unwrap_or((n % 2) as u8);
    let key = cache_key("homology", &format!("{:?}/{}", target, chi), &cfg.canonical());
    cached(cache, &key, || {
        let (title, h, expected) = match target {
            Target::En => {
                let h = en_basis_capped(n, r, cfg.simplex_cap)?.complex().homology(cfg.ring);
                let expected = (r == 2).then(|| (0..n as i64).map(|d| (d, usize::from(d == 0) + usize::from(d == n as i64 - 1))).collect());
                (format!("H_*(E_{}({}); {})", n, r, cfg.ring), h, expected)
            }
            Target::Coinvariants => {
                let h = coinvariants(n, r, chi)?.complex().homology(cfg.ring);
                (format!("H_*(E_{}({})_Σ, sgn^{}; {})", n, r, chi, cfg.ring), h, None)
            }
            Target::Cobar => {
                let h = cobar(&en_dual(n, r)?, r)?.homology(cfg.ring);
                let q = gerstenhaber_presentation(n).quotient(r)?;
                let expected = (cfg.ring == Ring::Z).then(|| q.graded_ranks(r).into_iter().collect());
                (format!("H_*(B^c(Λ^-{} E_{}^∨)({}); {})", n, n, r, cfg.ring), h, expected)
            }
            Target::Gerstenhaber => {
                let p = gerstenhaber_presentation(n);
                let h = cobar(&presented_dual(&p, n as i64, r)?, r)?.homology(cfg.ring);
                let expected = (cfg.ring == Ring::Z).then(|| p.quotient(r).map(|q| q.graded_ranks(r).into_iter().collect())).transpose()?;
                (format!("H_*(B^c(Λ^-{} G_{}^∨)({}); {})", n, n, r, cfg.ring), h, expected)
            }
        };
        Ok(homology_report(title, &h, expected, cfg.degree_max))
    })
}

fn homology_report(title: String, h: &HomologyReport, expected: Option<Vec<(i64, usize)>>, max: Option<usize>) -> Report {
    let mut rep = Report::new(title, &["degree", "rank", "torsion", "expected"]);
    let lookup = |d: i64| expected.as_ref().map(|e| e.iter().find(|(k, _)| *k == d).map_or(0, |(_, v)| *v));
    let mut degrees = degrees_up_to(h, max);
    if let Some(e) = &expected {
        degrees.extend(e.iter().filter(|(_, v)| *v > 0).map(|(d, _)| *d));
    }
    degrees.sort_unstable();
    degrees.dedup();
    for d in degrees {
        let torsion: Vec<String> = h.torsion(d).iter().map(|t| format!("Z/{}", t)).collect();
        let want = lookup(d);
        if let Some(w) = want {
            if w != h.betti(d) || !h.torsion(d).is_empty() {
                rep.passed = false;
            }
        }
        rep.row(vec![d.to_string(), h.betti(d).to_string(), torsion.join(" "), want.map_or("-".into(), |w| w.to_string())]);
    }
    rep.data = json!({ "homology": h.to_json(), "expected": expected });
    rep
}

fn chain_terms<'a>(terms: impl Iterator<Item = (&'a PermSimplex, i64)>) -> Value {
    Value::Array(terms.map(|(s, c)| json!([s.to_string(), c])).collect())
}

fn omega_json(w: &CoinvariantChain) -> Value {
    json!({
        "n": w.n, "arity": w.r, "degree": w.degree, "chi": w.chi,
        "terms": chain_terms(w.terms.iter().map(|(s, c)| (s, *c))),
    })
}

/// Conventions that fix every sign in the exported artifacts.
pub fn manifest(n: usize) -> Value {
    json!({
        "library_version": VERSION,
        "character": format!("sgn^{}", twisting_character(n)),
        "conventions": {
            "differential": "sum_k (-1)^k d_k on simplices (w_0, ..., w_d)",
            "action": "left action rho.(w_0, ..., w_d) = (rho w_0, ..., rho w_d)",
            "coinvariants": "w.x ~ sgn(w)^chi x with chi = n mod 2",
            "orbit_representative": "the orbit member whose first vertex is the identity",
            "theta": "theta(g.x) = sgn(g)^chi a_x for the coefficient a_x of the representative x",
            "suspension": "(-1)^((r-1)|c|) sgn cap c",
            "generator_degree": "x^v sits in cobar degree n(r-1) - 1 - |x|",
        },
    })
}

fn solved_omega(cfg: &RunConfig, cache: Option<&Cache>) -> Result<TwistingElement> {
    if cfg.arity < 2 {
        return Err(CliError::Usage("twisting elements need --arity >= 2".into()));
    }
    for k in 1..=cfg.n {
        precheck(cfg, k, cfg.arity)?;
    }
    let key = cache_key("twisting", "solve_omega", &json!({ "n": cfg.n, "arity": cfg.arity }));
    let fam = cached(cache, &key, || Ok(solve_omega(cfg.n, cfg.arity)?))?;
    if fam.n_max != cfg.n || fam.r_max != cfg.arity {
        return Err(CliError::Verification("cached ω family has the wrong range".into()));
    }
    Ok(fam)
}

pub fn omega(cfg: &RunConfig, cache: Option<&Cache>) -> Result<Report> {
    let fam = solved_omega(cfg, cache)?;
    let checks = verify_omega(&fam)?;
    let mut rep = Report::new(format!("ω_k(r), k <= {}, r <= {}", cfg.n, cfg.arity), &["n", "arity", "degree", "chi", "orbits", "verified"]);
    for w in fam.iter() {
        let ok = checks.iter().any(|c| c.n == w.n && c.r == w.r);
        rep.row(vec![w.n.to_string(), w.r.to_string(), w.degree.to_string(), w.chi.to_string(), w.terms.len().to_string(), ok.to_string()]);
    }
    rep.data = json!({
        "manifest": manifest(cfg.n),
        "omega": fam.iter().map(omega_json).collect::<Vec<_>>(),
        "checks": checks,
    });
    Ok(rep)
}

pub fn phi(cfg: &RunConfig, cache: Option<&Cache>) -> Result<Report> {
    let fam = solved_omega(cfg, cache)?;
    let phi = build_phi(&fam, cfg.n, cfg.arity)?;
    let mut rep = Report::new(format!("φ_{} up to arity {}", cfg.n, cfg.arity), &["arity", "degree", "orbits", "matrix_checked"]);
    for w in &phi.generators {
        rep.row(vec![w.r.to_string(), w.degree.to_string(), w.terms.len().to_string(), phi.matrix_checked.contains(&w.r).to_string()]);
    }
    rep.data = json!({
        "manifest": manifest(cfg.n),
        "generators": phi.generators.iter().map(omega_json).collect::<Vec<_>>(),
        "streamed": phi.streamed,
        "matrix_checked": phi.matrix_checked,
    });
    Ok(rep)
}

pub fn psi(cfg: &RunConfig, cache: Option<&Cache>) -> Result<Report> {
    let fam = solved_omega(cfg, cache)?;
    let psi = lift_psi(&fam, cfg.n, cfg.arity)?;
    let checks = verify_psi(&fam, &psi)?;
    let mut rep = Report::new(
        format!("ψ_k, k <= {}, up to arity {}", cfg.n, cfg.arity),
        &["level", "arity", "chain_map", "cells", "tower", "augmentation", "homology_iso"],
    );
    for c in &checks {
        rep.row(vec![
            c.n.to_string(),
            c.r.to_string(),
            c.chain_map.to_string(),
            c.cells.to_string(),
            c.tower.to_string(),
            c.augmentation.to_string(),
            c.homology_iso.to_string(),
        ]);
        rep.passed &= c.all();
    }
    let mut images = Vec::new();
    for level in &psi.levels {
        for r in 2..=cfg.arity {
            for (x, y) in level.representatives(r) {
                images.push(json!({
                    "level": level.n, "arity": r, "generator": x.to_string(),
                    "degree": generator_degree(level.n, x), "image": chain_json(y),
                }));
            }
        }
    }
    rep.data = json!({ "manifest": manifest(cfg.n), "eta": images });
    Ok(rep)
}

fn chain_json(c: &Chain) -> Value {
    chain_terms(c.terms())
}
