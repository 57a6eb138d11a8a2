mod args;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use hmit_core::data::{load_csv, write_csv, ClassColumn, LoadOptions};
use hmit_core::harness::{run_sweep_on, write_csv as write_bench_csv, write_json, write_plot_data, ExperimentSpec, SweepAxis};
use hmit_core::mining::{read_rules, write_rules};
use hmit_core::{
    impute_dataset, BinningParams, Dataset, HmitModel, HmitParams, KnnParams, MiningParams, SupportThreshold,
};
use serde::Serialize;

use args::{BenchArgs, Cli, Command, DataArgs, ImputeArgs, MineArgs, MiningArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Mine(a) => mine(&cli, a),
        Command::Impute(a) => impute(&cli, a),
        Command::Bench(a) => bench(&cli, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn resolve_data(cli: &Cli, path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match &cli.data_dir {
        Some(dir) => dir.join(path),
        None => path.to_path_buf(),
    }
}

fn load(cli: &Cli, data: &DataArgs) -> Result<(PathBuf, Dataset)> {
    let path = resolve_data(cli, &data.data);
    let class_column = match data.class.as_str() {
        "last" => ClassColumn::Last,
        "none" => ClassColumn::None,
        name => ClassColumn::Named(name.to_string()),
    };
    let options = LoadOptions {
        missing_marker: data.marker.clone(),
        has_header: !data.no_header,
        class_column,
        ..Default::default()
    };
    let dataset = load_csv(&path, &options).with_context(|| format!("reading {}", path.display()))?;
    Ok((path, dataset))
}

fn hmit_params(mining: &MiningArgs, k: u64) -> HmitParams {
    let min_support = match mining.support_count {
        Some(count) => SupportThreshold::Count(count as usize),
        None => SupportThreshold::Fraction(mining.support),
    };
    HmitParams {
        mining: MiningParams {
            min_support,
            min_confidence: mining.confidence,
            max_antecedent_len: mining.max_antecedent,
        },
        binning: BinningParams {
            n_bins: mining.bins as usize,
            strategy: mining.bin_strategy,
        },
        knn: KnnParams::new(k as usize).expect("k >= 1 enforced by the parser"),
        exclude_class_evidence: mining.exclude_class,
    }
}

/// Prints the normalized configuration so a run can be reproduced from its output.
fn echo_config<T: Serialize>(command: &str, config: &T) -> Result<()> {
    let json = serde_json::to_string(config)?;
    eprintln!("# hmit {command} {json}");
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

#[derive(Serialize)]
struct MineConfig<'a> {
    data: &'a Path,
    marker: &'a str,
    class: &'a str,
    params: &'a HmitParams,
    out: Option<&'a Path>,
}

fn mine(cli: &Cli, args: &MineArgs) -> Result<()> {
    let params = hmit_params(&args.mining, KnnParams::default().k as u64);
    let (path, dataset) = load(cli, &args.data)?;
    echo_config(
        "mine",
        &MineConfig {
            data: &path,
            marker: &args.data.marker,
            class: &args.data.class,
            params: &params,
            out: args.out.as_deref(),
        },
    )?;
    let start = Instant::now();
    let model = HmitModel::fit(&dataset, &params)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    let summary = format!(
        "mined {} rules from {} records in {elapsed:.1} ms",
        model.rules.len(),
        dataset.n_records()
    );
    match &args.out {
        Some(out) => {
            write_rules(create(out)?, &dataset, &model.binnings, &params.mining, &model.rules)?;
            println!("{summary}");
            println!("rules written to {}", out.display());
        }
        None => {
            let stdout = io::stdout();
            write_rules(stdout.lock(), &dataset, &model.binnings, &params.mining, &model.rules)?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ImputeConfig<'a> {
    data: &'a Path,
    marker: &'a str,
    class: &'a str,
    rules: Option<&'a Path>,
    params: &'a HmitParams,
    out: &'a Path,
    report: &'a Path,
}

fn impute(cli: &Cli, args: &ImputeArgs) -> Result<()> {
    let mut params = hmit_params(&args.mining, args.k);
    let (path, mut dataset) = load(cli, &args.data)?;
    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.report.json", args.out.display())));

    let start = Instant::now();
    let model = match &args.rules {
        Some(rules_path) => {
            let file = File::open(rules_path).with_context(|| format!("opening {}", rules_path.display()))?;
            let (header, rules) = read_rules(BufReader::new(file), &mut dataset)
                .with_context(|| format!("loading rules from {}", rules_path.display()))?;
            params.mining = header.params;
            HmitModel {
                binnings: header.bins,
                rules,
            }
        }
        None => HmitModel::fit(&dataset, &params)?,
    };
    let mine_ms = start.elapsed().as_secs_f64() * 1e3;
    echo_config(
        "impute",
        &ImputeConfig {
            data: &path,
            marker: &args.data.marker,
            class: &args.data.class,
            rules: args.rules.as_deref(),
            params: &params,
            out: &args.out,
            report: &report_path,
        },
    )?;

    let start = Instant::now();
    let imputation = impute_dataset(&dataset, &model, &params)?;
    let impute_ms = start.elapsed().as_secs_f64() * 1e3;

    write_csv(&imputation.completed, create(&args.out)?, &args.data.marker)?;
    let mut report = create(&report_path)?;
    serde_json::to_writer_pretty(&mut report, &imputation.report)?;
    report.write_all(b"\n")?;
    report.flush()?;

    let r = &imputation.report;
    if r.imputed == 0 {
        println!("no missing cells; dataset written unchanged");
    } else {
        println!(
            "imputed {} cells: {} from rules, {} by knn ({} global fallbacks)",
            r.imputed, r.by_rules, r.by_knn, r.global_fallbacks
        );
    }
    let rules_label = if args.rules.is_some() { "load rules" } else { "mine" };
    println!("{} rules; {rules_label} {mine_ms:.1} ms, impute {impute_ms:.1} ms", r.rule_count);
    println!("completed data: {}", args.out.display());
    println!("report: {}", report_path.display());
    Ok(())
}

fn sweep_values(args: &BenchArgs) -> Vec<f64> {
    let Some(values) = &args.values else {
        if args.sweep != SweepAxis::None {
            usage_error(format!("--sweep {} needs --values", args.sweep));
        }
        return Vec::new();
    };
    let parse: fn(&str) -> Result<f64, String> = match args.sweep {
        SweepAxis::MissingRate => args::parse_rate,
        SweepAxis::Confidence | SweepAxis::Support => args::parse_threshold,
        SweepAxis::None => usage_error("--values given without --sweep"),
    };
    values
        .0
        .iter()
        .map(|v| parse(&v.to_string()).unwrap_or_else(|e| usage_error(format!("--values: {e}"))))
        .collect()
}

fn bench(cli: &Cli, args: &BenchArgs) -> Result<()> {
    let values = sweep_values(args);
    if args.methods.is_empty() {
        usage_error("--methods is empty");
    }
    let (path, dataset) = load(cli, &args.data)?;
    let spec = ExperimentSpec {
        dataset: Some(path),
        missing_rate: args.missing_rate,
        seed: args.seed,
        exclude_class: !args.mask_class,
        hmit: hmit_params(&args.mining, args.k),
        axis: args.sweep,
        values,
        methods: args.methods.clone(),
    };
    echo_config("bench", &spec)?;
    let report = run_sweep_on(&dataset, &spec)?;

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let file = |ext: &str| args.out_dir.join(format!("{}.{ext}", args.name));
    let (json, csv, plot) = (file("json"), file("csv"), file("dat"));
    write_json(&report, create(&json)?)?;
    write_bench_csv(&report, create(&csv)?)?;
    let mut plot_out = create(&plot)?;
    write_plot_data(&report, &mut plot_out)?;
    plot_out.flush()?;

    println!(
        "{:<6} {:>8} {:>9} {:>9} {:>9} {:>10} {:>10}",
        "method", "value", "accuracy", "nrmse", "coverage", "impute_ms", "total_ms"
    );
    let fmt = |v: Option<f64>| v.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
    for row in &report.rows {
        println!(
            "{:<6} {:>8} {:>9} {:>9} {:>9.4} {:>10.1} {:>10.1}",
            row.method.to_string(),
            fmt(row.value),
            fmt(row.metrics.accuracy),
            fmt(row.metrics.nrmse),
            row.metrics.coverage,
            row.timing.impute_ms,
            row.timing.total_ms,
        );
    }
    println!("wrote {}, {}, {}", json.display(), csv.display(), plot.display());
    Ok(())
}
