//! Command-line flags and the validated [`RunConfig`] built from them.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opkz::linalg::Ring;
use serde_json::{json, Value};

use crate::error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(name = "opkz", version, about = "Exact computations with the Barratt-Eccles operad and its E_n filtration")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Filtration level `n` of `E_n`.
    #[arg(long, global = true, env = "OPKZ_N", default_value_t = 2)]
    pub n: usize,
    /// Arity bound.
    #[arg(long, global = true, env = "OPKZ_ARITY", default_value_t = 3)]
    pub arity: usize,
    #[arg(long = "degree-max", global = true, env = "OPKZ_DEGREE_MAX")]
    pub degree_max: Option<usize>,
    /// Z, F2, F3 or Fp:<p>.
    #[arg(long, global = true, env = "OPKZ_RING", default_value = "Z")]
    pub ring: String,
    #[arg(long, global = true, env = "OPKZ_OUT", value_enum, default_value_t = Format::Text)]
    pub out: Format,
    #[arg(long = "cache-dir", global = true, env = "OPKZ_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Seed for every sampled property check.
    #[arg(long, global = true, env = "OPKZ_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, env = "OPKZ_JOBS")]
    pub jobs: Option<usize>,
    /// Memory cap in MiB, enforced as a bound on enumerated simplices.
    #[arg(long = "mem-cap", global = true, env = "OPKZ_MEM_CAP")]
    pub mem_cap: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Ranks of `E_n(r)` per degree.
    Dims,
    /// Homology of `E_n(r)`, its coinvariants, or a cobar complex.
    Homology {
        #[arg(long, value_enum, default_value_t = Target::En)]
        target: Target,
        /// Character exponent for coinvariants (defaults to `n mod 2`).
        #[arg(long)]
        chi: Option<u8>,
    },
    /// Runs a verification suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Cup power for the sphere suite.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Random cases for sampled properties.
        #[arg(long, default_value_t = 2000)]
        cases: usize,
    },
    /// Solves and verifies the twisting elements `ω_k(r)`, `k <= n`.
    Omega,
    /// Builds and checks the twisting morphism `φ_n`.
    Phi,
    /// Lifts `φ_n` to `ψ_n: B^c(D_n) -> E_n` and verifies it.
    Psi,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    En,
    Coinvariants,
    Cobar,
    Gerstenhaber,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Kgraph,
    Cobar,
    Koszul,
    Latching,
    Sphere,
}

/// Rough footprint of one enumerated simplex with its index entries.
const BYTES_PER_SIMPLEX: u64 = 96;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub arity: usize,
    pub ring: Ring,
    pub degree_max: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub out: Format,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub simplex_cap: u64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig> {
        let g = cli.global;
        if g.n == 0 || g.arity == 0 {
            return Err(CliError::Usage("--n and --arity must be positive".into()));
        }
        if g.jobs == Some(0) || g.mem_cap == Some(0) {
            return Err(CliError::Usage("bounds must be positive".into()));
        }
        let ring: Ring = g.ring.parse().map_err(|e: opkz::Error| CliError::Usage(e.to_string()))?;
        let simplex_cap = g.mem_cap.map_or(opkz::barratt_eccles::DEFAULT_CAP, |mib| (mib << 20) / BYTES_PER_SIMPLEX);
        Ok(RunConfig {
            command: cli.command,
            n: g.n,
            arity: g.arity,
            ring,
            degree_max: g.degree_max,
            cache_dir: g.cache_dir,
            out: g.out,
            seed: g.seed,
            jobs: g.jobs,
            simplex_cap,
        })
    }

    /// The fields that determine a result, for cache keys.
    pub fn canonical(&self) -> Value {
        json!({
            "command": format!("{:?}", self.command),
            "n": self.n,
            "arity": self.arity,
            "ring": self.ring.to_string(),
            "degree_max": self.degree_max,
            "seed": self.seed,
        })
    }
}
