use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hmit_core::harness::{Method, SweepAxis};
use hmit_core::BinStrategy;

#[derive(Debug, Parser)]
#[command(name = "hmit", version, about = "Association-rule imputation with a kNN fallback")]
pub struct Cli {
    /// Directory searched for `--data` paths that do not exist as given.
    #[arg(long, env = "HMIT_DATA_DIR", global = true)]
    pub data_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine association rules and write them as JSON lines.
    Mine(MineArgs),
    /// Fill the missing cells of a dataset.
    Impute(ImputeArgs),
    /// Mask a complete dataset, impute it and score the result.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub data: PathBuf,

    /// Token marking a missing cell.
    #[arg(long, default_value = "?")]
    pub marker: String,

    /// Class column: `last`, `none`, or a column name.
    #[arg(long, default_value = "last")]
    pub class: String,

    /// The first row is data; columns are named `col1..colN`.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Args)]
pub struct MiningArgs {
    /// Minimum support as a percent (40) or fraction (0.4).
    #[arg(long, default_value = "40", value_parser = parse_threshold)]
    pub support: f64,

    /// Minimum support as an absolute record count; overrides --support.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub support_count: Option<u64>,

    /// Minimum confidence as a percent (60) or fraction (0.6).
    #[arg(long, default_value = "60", value_parser = parse_threshold)]
    pub confidence: f64,

    /// Longest rule antecedent.
    #[arg(long)]
    pub max_antecedent: Option<usize>,

    /// Bins per numeric attribute.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub bins: u64,

    #[arg(long, default_value = "equal-frequency")]
    pub bin_strategy: BinStrategy,

    /// Keep the class column out of mining, rule firing and distances.
    #[arg(long)]
    pub exclude_class: bool,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub mining: MiningArgs,

    /// Rule file to write; rules go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImputeArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub mining: MiningArgs,

    /// Rule file from `hmit mine`; rules are mined from --data when omitted.
    #[arg(long)]
    pub rules: Option<PathBuf>,

    /// Neighbors for the kNN fallback.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,

    /// Completed CSV to write.
    #[arg(long)]
    pub out: PathBuf,

    /// Imputation report; defaults to `<out>.report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub mining: MiningArgs,

    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Share of eligible cells to mask, as a percent or fraction.
    #[arg(long, default_value = "20", value_parser = parse_rate)]
    pub missing_rate: f64,

    /// Allow the class column to be masked.
    #[arg(long)]
    pub mask_class: bool,

    #[arg(long, default_value = "none")]
    pub sweep: SweepAxis,

    /// Sweep values: `5,10,20` or a range `10..60` / `10..60:5` (step 10
    /// by default). Percent or fraction, as for thresholds.
    #[arg(long, value_parser = parse_values)]
    pub values: Option<SweepValues>,

    #[arg(long, value_delimiter = ',', default_value = "hmit,knn")]
    pub methods: Vec<Method>,

    /// Directory for the report files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,

    /// File stem of the report files.
    #[arg(long, default_value = "bench")]
    pub name: String,
}

/// Percent when above 1, fraction otherwise; `(0, 100]` accepted.
pub fn parse_threshold(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() || v <= 0.0 || v > 100.0 {
        return Err(format!("`{s}` must be in (0, 100] percent or (0, 1] fraction"));
    }
    Ok(if v > 1.0 { v / 100.0 } else { v })
}

/// As [`parse_threshold`] but over `[0, 100)`, for missing rates.
pub fn parse_rate(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() || !(0.0..100.0).contains(&v) {
        return Err(format!("`{s}` must be in [0, 100) percent"));
    }
    let v = if v > 1.0 { v / 100.0 } else { v };
    if v >= 1.0 {
        return Err(format!("`{s}` must be below 100%"));
    }
    Ok(v)
}

/// Raw sweep values, normalized once the axis is known.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepValues(pub Vec<f64>);

pub fn parse_values(s: &str) -> Result<SweepValues, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("no sweep values given".into());
    }
    if let Some((start, rest)) = s.split_once("..") {
        let (end, step) = match rest.split_once(':') {
            Some((end, step)) => (end, step),
            None => (rest, "10"),
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number in range `{s}`"))
        };
        let (start, end, step) = (num(start)?, num(end)?, num(step)?);
        if step.is_nan() || step <= 0.0 || end < start {
            return Err(format!("range `{s}` needs start <= end and a positive step"));
        }
        let n = ((end - start) / step + 1e-9).floor() as usize;
        return Ok(SweepValues((0..=n).map(|i| start + step * i as f64).collect()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(SweepValues)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(parse_threshold("40"), Ok(0.4));
        assert_eq!(parse_threshold("0.4"), Ok(0.4));
        assert_eq!(parse_threshold("1"), Ok(1.0));
        assert_eq!(parse_threshold("100"), Ok(1.0));
        assert!(parse_threshold("101").is_err());
        assert!(parse_threshold("0").is_err());
        assert!(parse_threshold("-3").is_err());
        assert!(parse_threshold("abc").is_err());
    }

    #[test]
    fn rates() {
        assert_eq!(parse_rate("20"), Ok(0.2));
        assert_eq!(parse_rate("0"), Ok(0.0));
        assert!(parse_rate("100").is_err());
        assert!(parse_rate("1").is_err());
    }

    #[test]
    fn value_lists_and_ranges() {
        assert_eq!(parse_values("5,10, 15"), Ok(SweepValues(vec![5.0, 10.0, 15.0])));
        assert_eq!(
            parse_values("10..60"),
            Ok(SweepValues(vec![10.0, 20.0, 30.0, 40.0, 50.0, 60.0]))
        );
        assert_eq!(parse_values("20..30:5"), Ok(SweepValues(vec![20.0, 25.0, 30.0])));
        assert!(parse_values("").is_err());
        assert!(parse_values("60..10").is_err());
        assert!(parse_values("1,x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
