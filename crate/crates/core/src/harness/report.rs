use std::io::Write;

use super::sweep::{BenchReport, BenchRow, Method};
use crate::error::Result;
use crate::mining::SupportThreshold;

pub fn write_json<W: Write>(report: &BenchReport, mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, report)?;
    writer.write_all(b"\n")?;
    Ok(())
}

const CSV_HEADER: [&str; 21] = [
    "method",
    "axis",
    "value",
    "missing_rate",
    "min_support",
    "min_confidence",
    "k",
    "seed",
    "rule_count",
    "masked_cells",
    "categorical_cells",
    "categorical_correct",
    "accuracy",
    "numeric_cells",
    "nrmse",
    "rule_cells",
    "coverage",
    "rule_accuracy",
    "mine_ms",
    "impute_ms",
    "total_ms",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn support_text(s: SupportThreshold) -> String {
    match s {
        SupportThreshold::Fraction(f) => f.to_string(),
        SupportThreshold::Count(c) => format!("#{c}"),
    }
}

fn csv_row(row: &BenchRow) -> Vec<String> {
    let m = &row.metrics;
    vec![
        row.method.to_string(),
        row.axis.to_string(),
        opt(row.value),
        row.missing_rate.to_string(),
        support_text(row.min_support),
        row.min_confidence.to_string(),
        row.k.to_string(),
        row.seed.to_string(),
        opt(row.rule_count),
        m.masked_cells.to_string(),
        m.categorical_cells.to_string(),
        m.categorical_correct.to_string(),
        opt(m.accuracy),
        m.numeric_cells.to_string(),
        opt(m.nrmse),
        m.rule_cells.to_string(),
        m.coverage.to_string(),
        opt(m.rule_accuracy),
        opt(row.timing.mine_ms),
        row.timing.impute_ms.to_string(),
        row.timing.total_ms.to_string(),
    ]
}

/// One line per row; timing columns come last.
pub fn write_csv<W: Write>(report: &BenchReport, writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(CSV_HEADER)?;
    for row in &report.rows {
        out.write_record(csv_row(row))?;
    }
    out.flush()?;
    Ok(())
}

/// Whitespace-separated columns per method, one block per curve, for any
/// plotting tool. The x column is the sweep value (or the missing rate when
/// nothing is swept).
pub fn write_plot_data<W: Write>(report: &BenchReport, mut writer: W) -> Result<()> {
    let mut methods: Vec<Method> = Vec::new();
    for row in &report.rows {
        if !methods.contains(&row.method) {
            methods.push(row.method);
        }
    }
    for (i, method) in methods.iter().enumerate() {
        if i > 0 {
            writeln!(writer, "\n")?;
        }
        writeln!(writer, "# method={method} axis={}", report.spec.axis)?;
        writeln!(writer, "# x accuracy nrmse coverage rule_accuracy impute_ms total_ms")?;
        for row in report.rows.iter().filter(|r| r.method == *method) {
            let na = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_else(|| "NaN".into());
            writeln!(
                writer,
                "{} {} {} {} {} {} {}",
                row.value.unwrap_or(row.missing_rate),
                na(row.metrics.accuracy),
                na(row.metrics.nrmse),
                row.metrics.coverage,
                na(row.metrics.rule_accuracy),
                row.timing.impute_ms,
                row.timing.total_ms,
            )?;
        }
    }
    Ok(())
}
