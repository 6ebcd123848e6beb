//! The `hecke` command line: characteristic polynomials, products of symbols
//! and the verification suites.

mod expr;
mod report;
mod suites;

pub use expr::{parse_symbol, ParseError, SymbolExpr};
pub use report::{Check, Report, Status};
pub use suites::{run_suite, Suite};

use crate::finhecke::{compute_fpoly, CharPoly};
use crate::gfp::{is_prime, prime_power, PrimeField};
use crate::heckealg::StructureConstants;
use crate::modrep::{build_coefficient_system, CoefficientSystem, ModRepError, RepChoice, SystemConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::ffi::OsString;
use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    System(#[from] ModRepError),
    #[error("{0}")]
    Computation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepSelector {
    /// The trivial character (rank one only).
    Trivial,
    /// `ρ ⊠ ρ` for the chosen cuspidal `ρ`.
    Rho,
    /// `P ⊕ P*` for the projective cover `P` of `ρ ⊠ ρ`.
    Cover,
}

#[derive(Debug, Parser)]
#[command(name = "hecke", version, about = "Exact computations in Hecke algebras of level-0 blocks of GL_2k")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the characteristic polynomial of a coefficient system.
    Fpoly {
        #[command(flatten)]
        config: RunConfig,
        /// Compare the polynomial for (q, a·b) with the one for (q^a, b).
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        compare: Option<Vec<usize>>,
    },
    /// Multiply two basis symbols such as "[t^2 w' w]^1".
    Mul {
        lhs: String,
        rhs: String,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        config: RunConfig,
        /// Number of random samples per configuration (suite default if absent).
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(short = 'k', long)]
    pub k: Option<usize>,
    #[arg(short = 'q', long)]
    pub q: Option<u32>,
    #[arg(short = 'l', long = "ell")]
    pub ell: Option<u32>,
    #[arg(long, value_enum)]
    pub rep: Option<RepSelector>,
    /// Index of the cuspidal representation of GL_k(q).
    #[arg(long)]
    pub cuspidal: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(k) = self.k {
            if !(1..=2).contains(&k) {
                return Err(CliError::Config(format!("k must be 1 or 2, got {k}")));
            }
        }
        if let Some(q) = self.q {
            if prime_power(q).is_none() {
                return Err(CliError::Config(format!("q = {q} is not a prime power")));
            }
        }
        if let Some(l) = self.ell {
            if !is_prime(l) {
                return Err(CliError::Config(format!("l = {l} is not prime")));
            }
            if let Some((p, _)) = self.q.and_then(prime_power) {
                if p == l {
                    return Err(CliError::Config(format!("l = {l} equals the characteristic of F_{}", self.q.unwrap())));
                }
            }
        }
        if self.rep == Some(RepSelector::Trivial) && self.k.unwrap_or(1) != 1 {
            return Err(CliError::Config("the trivial character is only cuspidal for k = 1".into()));
        }
        if self.rep == Some(RepSelector::Trivial) && self.cuspidal.is_some_and(|c| c != 0) {
            return Err(CliError::Config("--rep trivial fixes the character index to 0".into()));
        }
        Ok(())
    }

    fn require(&self) -> Result<(usize, u32, u32), CliError> {
        match (self.q, self.ell) {
            (Some(q), Some(l)) => Ok((self.k.unwrap_or(1), q, l)),
            _ => Err(CliError::Config("both -q and -l are required".into())),
        }
    }

    pub fn choice(&self) -> RepChoice {
        match self.rep {
            Some(RepSelector::Cover) => RepChoice::ProjectiveCover,
            _ => RepChoice::Rho,
        }
    }

    pub fn system_config(&self, k: usize, q: u32, ell: u32) -> SystemConfig {
        SystemConfig::new(k, q, ell, self.cuspidal.unwrap_or(0), self.choice())
    }
}

/// Every cuspidal index for `(k, q, ℓ)` with the given choice of `V`.
pub fn all_systems(k: usize, q: u32, ell: u32, choice: RepChoice) -> Result<Vec<CoefficientSystem>, ModRepError> {
    let mut out = Vec::new();
    for i in 0.. {
        match build_coefficient_system(&SystemConfig::new(k, q, ell, i, choice)) {
            Ok(s) => out.push(s),
            Err(ModRepError::NoSuchCuspidal(..)) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Renders the product of two symbols with `τ = q^{k²}` substituted.
pub fn multiply_symbols(lhs: &SymbolExpr, rhs: &SymbolExpr, field: PrimeField, tau: u32) -> String {
    let engine = StructureConstants::new(field, tau);
    let expansion = engine.product(lhs.eta, rhs.eta);
    let shift = lhs.tstar + rhs.tstar;
    let name: String = [&lhs.coeff, &rhs.coeff].into_iter().flatten().map(String::as_str).collect();
    let mut parts = Vec::new();
    for (eps, p) in expansion.iter() {
        for (j, &c) in p.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut term = if c == 1 { String::new() } else { format!("{c}·") };
            term.push_str(&format!("[{eps}]"));
            if j + shift > 0 {
                term.push_str(&format!("^{}", j + shift));
            }
            if !name.is_empty() {
                term.push_str(&format!("_{{{name}}}"));
            }
            parts.push(term);
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn fpoly_for(config: &SystemConfig) -> Result<CharPoly, CliError> {
    let s = build_coefficient_system(config)?;
    compute_fpoly(&s).map_err(|e| CliError::Computation(e.to_string()))
}

fn cmd_fpoly(config: &RunConfig, compare: Option<&[usize]>) -> Result<(String, i32), CliError> {
    let k = config.k.unwrap_or(1);
    let l = config.ell.ok_or_else(|| CliError::Config("-l is required".into()))?;
    let q = config.q.ok_or_else(|| CliError::Config("-q is required".into()))?;
    let Some(ab) = compare else {
        let fp = fpoly_for(&config.system_config(k, q, l))?;
        let out = match config.format {
            Format::Text => format!("F = {fp}"),
            Format::Json => fp.to_json(),
        };
        return Ok((out, EXIT_PASS));
    };
    let (a, b) = (ab[0], ab[1]);
    if a == 0 || b == 0 || a * b > 2 {
        return Err(CliError::Config(format!("--compare {a} {b} needs a·b ≤ 2")));
    }
    let big_q = q
        .checked_pow(a as u32)
        .filter(|&v| prime_power(v).is_some())
        .ok_or_else(|| CliError::Config(format!("q^{a} is out of range")))?;
    let left = fpoly_for(&config.system_config(a * b, q, l))?;
    let right: Vec<(usize, CharPoly)> = all_systems(b, big_q, l, config.choice())?
        .iter()
        .enumerate()
        .map(|(i, s)| compute_fpoly(s).map(|f| (i, f)).map_err(|e| CliError::Computation(e.to_string())))
        .collect::<Result<_, _>>()?;
    let matches: Vec<usize> = right.iter().filter(|(_, f)| f.coeffs == left.coeffs).map(|(i, _)| *i).collect();
    let out = match config.format {
        Format::Text => {
            let mut lines = vec![format!("F[l={l}, q={q}, k={}] = {left}", a * b)];
            for (i, f) in &right {
                lines.push(format!("F[l={l}, q={big_q}, k={b}, cuspidal #{i}] = {f}"));
            }
            lines.push(if matches.is_empty() {
                "no cuspidal on the right-hand side has the same polynomial".into()
            } else {
                format!("equal for cuspidal indices {matches:?}")
            });
            lines.join("\n")
        }
        Format::Json => json!({
            "left": left,
            "right": right.iter().map(|(i, f)| json!({"cuspidal": i, "fpoly": f})).collect::<Vec<_>>(),
            "equal_for": matches,
        })
        .to_string(),
    };
    Ok((out, EXIT_PASS))
}

fn cmd_mul(config: &RunConfig, lhs: &str, rhs: &str) -> Result<(String, i32), CliError> {
    let (k, q, l) = config.require()?;
    let a = parse_symbol(lhs)?;
    let b = parse_symbol(rhs).map_err(|e| ParseError {
        pos: e.pos,
        msg: format!("{} (second operand)", e.msg),
    })?;
    let field = PrimeField::new(l).map_err(|e| CliError::Config(e.to_string()))?;
    let tau = field.pow(field.reduce(q as i64), (k * k) as u64);
    let rendered = multiply_symbols(&a, &b, field, tau);
    let out = match config.format {
        Format::Text => rendered,
        Format::Json => json!({"lhs": lhs, "rhs": rhs, "tau": tau, "product": rendered}).to_string(),
    };
    Ok((out, EXIT_PASS))
}

fn cmd_verify(config: &RunConfig, suite: Suite, samples: Option<usize>) -> Result<(String, i32), CliError> {
    let report = run_suite(suite, config, samples)?;
    let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
    let out = match config.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    Ok((out, code))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    let result = match &cli.command {
        Command::Fpoly { config, compare } => config.validate().and_then(|_| cmd_fpoly(config, compare.as_deref())),
        Command::Mul { lhs, rhs, config } => config.validate().and_then(|_| cmd_mul(config, lhs, rhs)),
        Command::Verify { suite, config, samples } => config.validate().and_then(|_| cmd_verify(config, *suite, *samples)),
    };
    match result {
        Ok((out, code)) => {
            println!("{out}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests;
