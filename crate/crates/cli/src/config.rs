use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use padic_diaphony::{validate_bases, KernelMode, PrimeBases, TruncationBox};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "padic-diaphony", version, about = "p-adic diaphony of Halton and other point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit Halton points as exact fractions and decimals.
    Halton(HaltonArgs),
    /// Compute the diaphony of a Halton prefix or of points read from a file.
    Diaphony(DiaphonyArgs),
    /// Evaluate the Halton diaphony bound.
    Bound(BoundArgs),
    /// Diaphony and bound for a range of prefix lengths.
    Sweep(SweepArgs),
    /// Check the Halton Weyl-sum bound over a truncation box.
    VerifyLemma(LemmaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Kernel,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Fast,
    Exact,
}

impl From<ModeArg> for KernelMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Fast => KernelMode::Fast,
            ModeArg::Exact => KernelMode::Exact,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Comma-separated prime bases.
    #[arg(long, value_delimiter = ',', conflicts_with = "dim", required_unless_present = "dim")]
    pub bases: Option<Vec<u32>>,
    /// Use the first `s` primes as bases.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (default: machine parallelism).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HaltonArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub start: u64,
}

#[derive(Debug, Args)]
pub struct DiaphonyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of Halton points (required unless --points is given).
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub start: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Kernel)]
    pub method: MethodArg,
    /// Kernel accumulation mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
    pub mode: ModeArg,
    /// Comma-separated truncation box, one entry per dimension.
    #[arg(long, value_delimiter = ',')]
    pub g: Option<Vec<u32>>,
    /// CSV file of points in [0,1)^s, one point per line.
    #[arg(long, conflicts_with = "start")]
    pub points: Option<PathBuf>,
    /// Base-p digits kept when ingesting decimal points.
    #[arg(long, requires = "points")]
    pub depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub count: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
    /// `pow2` or a positive integer stride.
    #[arg(long, default_value = "1")]
    pub step: String,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub count: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub g: Vec<u32>,
}

/// Validated settings of one run, echoed in JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub bases: Vec<u32>,
    pub count: Option<u64>,
    pub method: Option<MethodArg>,
    pub mode: Option<ModeArg>,
    #[serde(rename = "g")]
    pub truncation: Option<Vec<u32>>,
    pub start: u64,
    pub format: Format,
    pub workers: Option<u64>,
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<(u64, u64, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_file: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: &'static str, common: &Common) -> Result<(Self, PrimeBases), CliError> {
        let raw = match (&common.bases, common.dim) {
            (Some(b), _) => b.clone(),
            (None, Some(s)) if s >= 1 => padic_diaphony::primes::first_primes(s),
            (None, _) => return Err(CliError::Usage("--dim must be at least 1".into())),
        };
        let bases = validate_bases(&raw).map_err(|e| CliError::Usage(format!("--bases: {e}")))?;
        let config = Self {
            command,
            bases: raw,
            count: None,
            method: None,
            mode: None,
            truncation: None,
            start: 0,
            format: common.format,
            workers: common.workers,
            output: common.out.clone(),
            range: None,
            points_file: None,
        };
        Ok((config, bases))
    }

    pub fn truncation_box(&self, bases: &PrimeBases) -> Result<TruncationBox, CliError> {
        let g = self
            .truncation
            .clone()
            .ok_or_else(|| CliError::Usage("--g is required".into()))?;
        if g.len() != bases.dim() {
            return Err(CliError::Usage(format!(
                "--g: expected {} entries, found {}",
                bases.dim(),
                g.len()
            )));
        }
        TruncationBox::new(g).map_err(|e| CliError::Usage(format!("--g: {e}")))
    }
}

/// Parses a `--step` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Pow2,
    Stride(u64),
}

impl std::str::FromStr for Step {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "pow2" {
            return Ok(Step::Pow2);
        }
        match s.parse::<u64>() {
            Ok(k) if k >= 1 => Ok(Step::Stride(k)),
            _ => Err(CliError::Usage(format!("--step: expected `pow2` or a positive integer, got `{s}`"))),
        }
    }
}

impl Step {
    /// Values of N in `[from, to]`.
    pub fn values(self, from: u64, to: u64) -> Vec<u64> {
        match self {
            Step::Pow2 => (0..64)
                .map(|e| 1u64 << e)
                .skip_while(|&n| n < from)
                .take_while(|&n| n <= to)
                .collect(),
            Step::Stride(k) => (from..=to).step_by(k as usize).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_values() {
        assert_eq!(Step::Pow2.values(2, 16), vec![2, 4, 8, 16]);
        assert_eq!(Step::Pow2.values(3, 20), vec![4, 8, 16]);
        assert_eq!(Step::Stride(1).values(1, 4), vec![1, 2, 3, 4]);
        assert_eq!(Step::Stride(3).values(1, 8), vec![1, 4, 7]);
        assert!("0".parse::<Step>().is_err());
        assert!("fast".parse::<Step>().is_err());
        assert_eq!("pow2".parse::<Step>().unwrap(), Step::Pow2);
    }
}
