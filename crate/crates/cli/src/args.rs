//! Flags, and the JSON config file that mirrors them.
//!
//! A config file is one JSON object whose keys are the flag names of the
//! chosen subcommand. Flags given on the command line win.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "qeuler", version, about = "Exact q-Euler numbers and polynomials of Norlund type")]
pub struct Cli {
    /// JSON file mirroring the subcommand's flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one family member.
    Compute(ComputeArgs),
    /// Evaluate a family over parameter ranges.
    Table(TableArgs),
    /// Run truncated fermionic Riemann sums with level diagnostics.
    Integrate(IntegrateArgs),
    /// Run the identity suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ComputeArgs {
    /// basic, r, neg-r, hr, h-neg-r, weighted, weighted-star or classical.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<i64>,
    /// `a/b`, `1+p`, or omitted for symbolic q.
    #[arg(long)]
    pub q: Option<String>,
    /// rat, func or padic.
    #[arg(long)]
    pub backend: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub prec: Option<i64>,
    /// Comma-separated weights for the weighted families.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Comma-separated measure exponents for the weighted families.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct TableArgs {
    #[arg(long)]
    pub family: Option<String>,
    /// `A..B` or a single value.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub backend: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub prec: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct IntegrateArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// `1+p` (the default) or a rational with `|1 - q|_p < 1`.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    /// Weight `q^{(h-j) x_j}` on coordinate `j`.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<i64>,
    /// Coefficients of `x_j` inside the bracket.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Measure `mu_{-q^delta_j}` on coordinate `j`.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Explicit weight exponents `a_j` in `q^{a_j x_j}`; excludes `--h`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// `A..B`, default `1..3`.
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long)]
    pub prec: Option<i64>,
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// `all` or comma-separated identity ids.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub max_n: Option<u32>,
    #[arg(long)]
    pub max_r: Option<u32>,
    #[arg(long)]
    pub max_x: Option<i64>,
    /// Comma-separated subset of rat, func, padic.
    #[arg(long)]
    pub backend: Option<String>,
    /// Comma-separated odd primes for the p-adic checks.
    #[arg(long)]
    pub primes: Option<String>,
    /// Truncation level of the p-adic checks.
    #[arg(long)]
    pub level: Option<u32>,
    /// Where to write the JSON report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// List the identity ids and exit.
    #[arg(long)]
    #[serde(skip)]
    pub list: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! fill {
    ($dst:expr, $src:expr; $($f:ident),* $(,)?) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.take(); } )*
    };
}

fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// Parses a config document for one subcommand.
pub fn parse_config<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

impl Command {
    /// Fills flags missing from the command line out of the config file.
    pub fn merge_config(&mut self, path: &Path) -> Result<(), CliError> {
        match self {
            Command::Compute(a) => {
                let mut c: ComputeArgs = read_config(path)?;
                fill!(a, c; family, n, r, h, x, q, backend, p, prec, w, delta, format);
            }
            Command::Table(a) => {
                let mut c: TableArgs = read_config(path)?;
                fill!(a, c; family, n, r, h, x, q, backend, p, prec, w, delta, format, out);
            }
            Command::Integrate(a) => {
                let mut c: IntegrateArgs = read_config(path)?;
                fill!(a, c; p, q, n, r, h, x, w, delta, a, levels, prec, budget, format);
            }
            Command::Verify(a) => {
                let mut c: VerifyArgs = read_config(path)?;
                fill!(a, c; suite, max_n, max_r, max_x, backend, primes, level, report, format);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_keys_mirror_flags() {
        let c: VerifyArgs = parse_config(r#"{"suite": "shift-h1", "max-n": 3}"#).unwrap();
        assert_eq!(c.suite.as_deref(), Some("shift-h1"));
        assert_eq!(c.max_n, Some(3));
        assert!(parse_config::<VerifyArgs>(r#"{"max_n": 3}"#).is_err());
        let c: ComputeArgs = parse_config(r#"{"family": "hr", "h": -1, "format": "json"}"#).unwrap();
        assert_eq!(c.h, Some(-1));
        assert_eq!(c.format, Some(Format::Json));
    }

    #[test]
    fn command_line_wins() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"family": "basic", "n": 4}"#).unwrap();
        let mut cmd = Command::Compute(ComputeArgs { n: Some(2), ..Default::default() });
        cmd.merge_config(&path).unwrap();
        let Command::Compute(a) = cmd else { unreachable!() };
        assert_eq!((a.family.as_deref(), a.n), (Some("basic"), Some(2)));
    }
}
