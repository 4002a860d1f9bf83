use std::fmt;
use std::str::FromStr;

use clap::Args;
use num_bigint::BigInt;
use thue_core::arith::DEFAULT_FACTOR_BUDGET;
use thue_core::enumeration::DEFAULT_POINT_BUDGET;
use thue_core::forms::DEFAULT_PRECISION_BITS;
use thue_core::{Result, ThueError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Kv,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "kv" | "kv-text" => Ok(OutputFormat::Kv),
            _ => Err(format!("unknown output format {s:?} (expected csv or kv)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Kv => "kv",
        })
    }
}

/// Options shared by every subcommand. Each can also be set from the
/// environment.
#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Starting precision (bits) for certified complex roots.
    #[arg(long, global = true, env = "THUE_PRECISION_BITS", default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
    /// Search radius replacing the default region.
    #[arg(long = "radius", global = true, env = "THUE_BRUTE_RADIUS")]
    pub brute_radius_override: Option<f64>,
    /// Scan continued fraction convergents with denominators up to this bound.
    #[arg(long = "y-max", global = true, env = "THUE_Y_MAX", value_parser = parse_bigint)]
    pub y_max_for_convergents: Option<BigInt>,
    /// Trial division budget for factoring m.
    #[arg(long, global = true, env = "THUE_FACTOR_BUDGET", default_value_t = DEFAULT_FACTOR_BUDGET)]
    pub factorization_budget: u64,
    /// Cap on lattice points and sublattices visited.
    #[arg(long, global = true, env = "THUE_POINT_BUDGET", default_value_t = DEFAULT_POINT_BUDGET)]
    pub point_budget: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long = "shards", global = true, env = "THUE_SHARDS", default_value_t = 1)]
    pub shard_count: usize,
    #[arg(long = "format", global = true, env = "THUE_FORMAT", default_value_t = OutputFormat::Kv)]
    pub output_format: OutputFormat,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(ThueError::RejectedInput(format!("{what} must be positive")));
        if self.precision_bits == 0 {
            return bad("precision bits");
        }
        if self.factorization_budget == 0 || self.point_budget == 0 {
            return bad("budgets");
        }
        if self.shard_count == 0 {
            return bad("shard count");
        }
        if let Some(r) = self.brute_radius_override {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(ThueError::RejectedInput(format!("radius {r} must be finite and nonnegative")));
            }
        }
        if let Some(y) = &self.y_max_for_convergents {
            if y <= &BigInt::from(0) {
                return bad("y-max");
            }
        }
        Ok(())
    }
}

pub fn parse_bigint(s: &str) -> std::result::Result<BigInt, String> {
    s.trim().parse::<BigInt>().map_err(|e| format!("{s:?} is not an integer: {e}"))
}
