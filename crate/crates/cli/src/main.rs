//! `thue`: command-line front end for thue-core.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::Ratio;
use thue_core::bounds::StewartContext;
use thue_core::enumeration::Mode;
use thue_core::{BinaryForm, Result, ThueError};

use commands::BoundRequest;
use config::{parse_bigint, Config};
use output::Output;

#[derive(Debug, Parser)]
#[command(name = "thue", version, about = "Primitive solutions of |F(x, y)| = m and |F(x, y)| <= m for integer binary forms")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

fn parse_form(s: &str) -> std::result::Result<BinaryForm, String> {
    s.parse::<BinaryForm>().map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse::<Mode>().map_err(|e| e.to_string())
}

/// `p/q`, an integer, or a terminating decimal such as `0.25`.
fn parse_ratio(s: &str) -> std::result::Result<Ratio<i64>, String> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Ratio<i64>>() {
        return Ok(r);
    }
    let (int, frac) = s.split_once('.').ok_or_else(|| format!("{s:?} is not a rational number"))?;
    if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a rational number"));
    }
    let den = 10i64.pow(frac.len() as u32);
    let neg = int.starts_with('-');
    let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| format!("{s:?} is not a rational number"))? };
    let f: i64 = frac.parse().map_err(|_| format!("{s:?} is not a rational number"))?;
    let num = whole.abs() * den + f;
    Ok(Ratio::new(if neg { -num } else { num }, den))
}

fn parse_point(s: &str) -> std::result::Result<(BigInt, BigInt), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("point {s:?} must look like x,y"))?;
    Ok((parse_bigint(x)?, parse_bigint(y)?))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Discriminant, content, local factor counts and m(F).
    Analyze {
        #[arg(value_parser = parse_form)]
        form: BinaryForm,
        #[arg(value_parser = parse_bigint)]
        m: BigInt,
    },
    /// Primitive solutions as CSV.
    Solve {
        #[arg(value_parser = parse_form)]
        form: BinaryForm,
        #[arg(value_parser = parse_bigint)]
        m: BigInt,
        #[arg(value_parser = parse_mode, default_value = "eq")]
        mode: Mode,
    },
    /// Lattices of determinant m: the congruence lattices of a form with
    /// --form, otherwise all of them.
    Lattices {
        #[arg(value_parser = parse_bigint)]
        m: BigInt,
        #[arg(long, value_parser = parse_form)]
        form: Option<BinaryForm>,
    },
    /// Check that every primitive point with m | F(x, y) lies in one of the
    /// congruence lattices.
    Verify {
        #[arg(value_parser = parse_form)]
        form: BinaryForm,
        #[arg(value_parser = parse_bigint)]
        m: BigInt,
    },
    /// Evaluate counting bounds and thresholds.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
    /// Short-vector census over sublattices of determinant m.
    Census {
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: Option<u64>,
        /// Explicit list of m values (overrides --from/--to).
        #[arg(long = "m", value_delimiter = ',')]
        ms: Vec<u64>,
        #[arg(long, value_parser = parse_ratio)]
        delta: Ratio<i64>,
        /// Only prime m in the range.
        #[arg(long)]
        primes: bool,
    },
    /// ε-exceptional test for a point, or classification of the solutions
    /// in the lattices of determinant m(F) with --m.
    Exceptional {
        #[arg(value_parser = parse_form)]
        form: BinaryForm,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, conflicts_with = "m")]
        point: Option<(BigInt, BigInt)>,
        #[arg(long, value_parser = parse_bigint)]
        m: Option<BigInt>,
    },
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Solution count in one lattice from d, m and A.
    Theorem2 {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_bigint)]
        m: BigInt,
        #[arg(long = "A")]
        a: f64,
    },
    /// Total count over the c_F(m') lattices.
    Corollary {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_bigint)]
        m: BigInt,
        #[arg(long = "A")]
        a: f64,
        /// c_F(m').
        #[arg(long)]
        cfm: u64,
    },
    /// Count for large m in terms of ω(m').
    Stewart {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eps: f64,
        /// ω(m').
        #[arg(long)]
        omega: u32,
        /// m, m' and D(F) to decide the hypothesis.
        #[arg(long, value_parser = parse_bigint, requires_all = ["m_prime", "disc"])]
        m: Option<BigInt>,
        #[arg(long = "m-prime", value_parser = parse_bigint)]
        m_prime: Option<BigInt>,
        #[arg(long, value_parser = parse_bigint, allow_hyphen_values = true)]
        disc: Option<BigInt>,
    },
    /// Count in a lattice from B = M(F_Λ, m)/m.
    Proposition {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_bigint)]
        m: BigInt,
        /// Lower bound for B = M(F_Λ, m)/m.
        #[arg(long = "B")]
        b: f64,
        #[arg(long = "B-hi")]
        b_hi: Option<f64>,
    },
    /// Gap-principle constants from C, B, C1 and C2.
    Lemmas {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[arg(long = "B")]
        b: f64,
        #[arg(long = "C1")]
        c1: f64,
        #[arg(long = "C2")]
        c2: f64,
    },
    /// c(F, ε) beyond which large solutions are exceptional.
    Threshold {
        #[arg(value_parser = parse_form)]
        form: BinaryForm,
        #[arg(long)]
        eps: f64,
    },
    /// A, heights and the Theorem 2 count for each congruence lattice.
    Lattice {
        #[arg(value_parser = parse_form)]
        form: BinaryForm,
        #[arg(value_parser = parse_bigint)]
        m: BigInt,
    },
}

impl BoundsCommand {
    fn request(self) -> BoundRequest {
        match self {
            BoundsCommand::Theorem2 { d, m, a } => BoundRequest::Theorem2 { d, m, a },
            BoundsCommand::Corollary { d, m, a, cfm } => BoundRequest::Corollary { d, m, a, c_f_m: cfm },
            BoundsCommand::Stewart { d, eps, omega, m, m_prime, disc } => {
                let ctx = match (m, m_prime, disc) {
                    (Some(m), Some(m_prime), Some(disc)) => Some(StewartContext { m, m_prime, disc }),
                    _ => None,
                };
                BoundRequest::Stewart { d, eps, omega, ctx }
            }
            BoundsCommand::Proposition { d, m, b, b_hi } => BoundRequest::Proposition { d, m, b, b_hi },
            BoundsCommand::Lemmas { d, c, b, c1, c2 } => BoundRequest::Lemmas { d, c, b, c1, c2 },
            BoundsCommand::Threshold { form, eps } => BoundRequest::Threshold { form, eps },
            BoundsCommand::Lattice { form, m } => BoundRequest::Lattice { form, m },
        }
    }
}

fn run(cli: Cli) -> Result<Output> {
    let cfg = &cli.config;
    cfg.validate()?;
    match cli.command {
        Command::Analyze { form, m } => commands::analyze(cfg, &form, &m),
        Command::Solve { form, m, mode } => commands::solve_cmd(cfg, &form, &m, mode),
        Command::Lattices { m, form } => commands::lattices_cmd(cfg, &m, form.as_ref()),
        Command::Verify { form, m } => commands::verify(cfg, &form, &m),
        Command::Bounds { which } => commands::bounds_cmd(cfg, &which.request()),
        Command::Census { from, to, ms, delta, primes } => {
            let ms = if ms.is_empty() {
                let to = to.ok_or_else(|| ThueError::RejectedInput("census needs --to or --m".into()))?;
                commands::census_range(from, to, primes)
            } else {
                ms
            };
            commands::census_cmd(cfg, &ms, &delta)
        }
        Command::Exceptional { form, eps, point, m } => match (point, m) {
            (Some((x, y)), None) => commands::exceptional_point(cfg, &form, eps, &x, &y),
            (None, Some(m)) => commands::exceptional_classify(cfg, &form, eps, &m),
            _ => Err(ThueError::RejectedInput("exceptional needs exactly one of --point or --m".into())),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors share exit code 1 with other rejected input; code 2
            // is reserved for hypothesis violations
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = std::io::stderr().write_all(out.stderr.as_bytes());
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
