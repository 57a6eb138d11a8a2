use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::inject::{inject_missing, InjectionParams};
use super::metrics::{evaluate_with_sources, Metrics};
use crate::data::{load_csv, ClassColumn, Dataset, LoadOptions};
use crate::error::{Error, Result};
use crate::hmit::{impute_dataset, impute_dataset_knn, HmitModel, HmitParams};
use crate::mining::SupportThreshold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hmit,
    Knn,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hmit" => Ok(Method::Hmit),
            "knn" => Ok(Method::Knn),
            other => Err(format!("unknown method `{other}` (expected hmit or knn)")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Hmit => "hmit",
            Method::Knn => "knn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    MissingRate,
    Confidence,
    Support,
    #[default]
    None,
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "missing-rate" => Ok(SweepAxis::MissingRate),
            "confidence" => Ok(SweepAxis::Confidence),
            "support" => Ok(SweepAxis::Support),
            "none" => Ok(SweepAxis::None),
            other => Err(format!(
                "unknown sweep axis `{other}` (expected missing-rate, confidence, support or none)"
            )),
        }
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepAxis::MissingRate => "missing-rate",
            SweepAxis::Confidence => "confidence",
            SweepAxis::Support => "support",
            SweepAxis::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    pub missing_rate: f64,
    pub seed: u64,
    /// Leave the class column out of the mask.
    pub exclude_class: bool,
    pub hmit: HmitParams,
    pub axis: SweepAxis,
    /// Fractions for every axis; ignored when `axis` is `None`.
    pub values: Vec<f64>,
    pub methods: Vec<Method>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            dataset: None,
            missing_rate: 0.20,
            seed: 1,
            exclude_class: true,
            hmit: HmitParams::default(),
            axis: SweepAxis::None,
            values: Vec::new(),
            methods: vec![Method::Hmit, Method::Knn],
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |v: f64| (0.0..1.0).contains(&v);
        let unit_ok = |v: f64| v > 0.0 && v <= 1.0;
        if !rate_ok(self.missing_rate) {
            return Err(Error::InvalidParameter(format!(
                "missing rate {} outside [0, 1)",
                self.missing_rate
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no methods selected".into()));
        }
        self.hmit.mining.validate()?;
        if self.hmit.knn.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.axis != SweepAxis::None && self.values.is_empty() {
            return Err(Error::InvalidParameter(format!("sweep over {} has no values", self.axis)));
        }
        for &v in &self.values {
            let ok = match self.axis {
                SweepAxis::MissingRate => rate_ok(v),
                SweepAxis::Confidence | SweepAxis::Support => unit_ok(v),
                SweepAxis::None => true,
            };
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "sweep value {v} invalid for {}",
                    self.axis
                )));
            }
        }
        Ok(())
    }

    fn points(&self) -> Vec<Option<f64>> {
        match self.axis {
            SweepAxis::None => vec![None],
            _ => self.values.iter().copied().map(Some).collect(),
        }
    }

    /// Settings for one sweep position.
    fn at(&self, value: Option<f64>) -> (f64, HmitParams) {
        let mut rate = self.missing_rate;
        let mut params = self.hmit;
        if let Some(v) = value {
            match self.axis {
                SweepAxis::MissingRate => rate = v,
                SweepAxis::Confidence => params.mining.min_confidence = v,
                SweepAxis::Support => params.mining.min_support = SupportThreshold::Fraction(v),
                SweepAxis::None => {}
            }
        }
        (rate, params)
    }
}

/// Wall-clock milliseconds per phase.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    /// Rule mining; absent for kNN rows.
    pub mine_ms: Option<f64>,
    pub impute_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: Method,
    pub axis: SweepAxis,
    pub value: Option<f64>,
    pub missing_rate: f64,
    pub min_support: SupportThreshold,
    pub min_confidence: f64,
    pub k: usize,
    pub seed: u64,
    pub rule_count: Option<usize>,
    #[serde(flatten)]
    pub metrics: Metrics,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub spec: ExperimentSpec,
    pub rows: Vec<BenchRow>,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// Loads `spec.dataset` (last column as class) and runs the sweep on it.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<BenchReport> {
    let path = spec
        .dataset
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("experiment has no dataset path".into()))?;
    let options = LoadOptions {
        class_column: ClassColumn::Last,
        ..Default::default()
    };
    let dataset = load_csv(path, &options).map_err(|e| e.context(path.display().to_string()))?;
    run_sweep_on(&dataset, spec)
}

/// One row per (sweep value, method), in sweep order then method order.
///
/// Every position draws its mask from `spec.seed`, so methods at one position
/// share a mask and positions that differ only in mining thresholds share
/// one too.
pub fn run_sweep_on(dataset: &Dataset, spec: &ExperimentSpec) -> Result<BenchReport> {
    spec.validate()?;
    let mut rows = Vec::new();
    for value in spec.points() {
        let (rate, params) = spec.at(value);
        let label = match value {
            Some(v) => format!("{} = {v}", spec.axis),
            None => "baseline".to_string(),
        };
        let (masked, truth) = inject_missing(
            dataset,
            &InjectionParams {
                rate,
                seed: spec.seed,
                exclude_class: spec.exclude_class,
            },
        )
        .map_err(|e| e.context(label.clone()))?;

        for &method in &spec.methods {
            let (out, mine_ms, impute_ms, rule_count) = match method {
                Method::Hmit => {
                    let start = Instant::now();
                    let model = HmitModel::fit(&masked, &params).map_err(|e| e.context(label.clone()))?;
                    let mine_ms = ms(start);
                    let start = Instant::now();
                    let out = impute_dataset(&masked, &model, &params).map_err(|e| e.context(label.clone()))?;
                    (out, Some(mine_ms), ms(start), Some(model.rules.len()))
                }
                Method::Knn => {
                    let start = Instant::now();
                    let out = impute_dataset_knn(&masked, &params).map_err(|e| e.context(label.clone()))?;
                    (out, None, ms(start), None)
                }
            };
            let metrics = evaluate_with_sources(&out.completed, &truth, &out.cells);
            rows.push(BenchRow {
                method,
                axis: spec.axis,
                value,
                missing_rate: rate,
                min_support: params.mining.min_support,
                min_confidence: params.mining.min_confidence,
                k: params.knn.k,
                seed: spec.seed,
                rule_count,
                metrics,
                timing: Timing {
                    mine_ms,
                    impute_ms,
                    total_ms: mine_ms.unwrap_or(0.0) + impute_ms,
                },
            });
        }
    }
    Ok(BenchReport {
        spec: spec.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::read_csv;

    fn toy() -> Dataset {
        let mut text = String::from("a,b,c,class\n");
        for i in 0..60 {
            let a = ["x", "y", "z"][i % 3];
            let b = if i % 3 == 0 { "p" } else { ["p", "q"][i % 2] };
            let c = ["u", "v"][(i / 3) % 2];
            let class = if a == "x" { "yes" } else { "no" };
            text.push_str(&format!("{a},{b},{c},{class}\n"));
        }
        let opts = LoadOptions {
            class_column: ClassColumn::Last,
            ..Default::default()
        };
        read_csv(text.as_bytes(), &opts).unwrap()
    }

    #[test]
    fn one_row_per_method_and_value() {
        let spec = ExperimentSpec {
            axis: SweepAxis::MissingRate,
            values: vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
            ..Default::default()
        };
        let report = run_sweep_on(&toy(), &spec).unwrap();
        assert_eq!(report.rows.len(), 12);
        assert_eq!(report.rows[0].method, Method::Hmit);
        assert_eq!(report.rows[1].method, Method::Knn);
        assert_eq!(report.rows[11].value, Some(0.3));
    }

    #[test]
    fn single_knn_point_has_no_mining_time() {
        let spec = ExperimentSpec {
            methods: vec![Method::Knn],
            ..Default::default()
        };
        let report = run_sweep_on(&toy(), &spec).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].timing.mine_ms, None);
        assert_eq!(report.rows[0].rule_count, None);
        assert_eq!(report.rows[0].metrics.coverage, 0.0);
    }

    #[test]
    fn coverage_non_increasing_in_thresholds() {
        for axis in [SweepAxis::Support, SweepAxis::Confidence] {
            let spec = ExperimentSpec {
                axis,
                values: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0],
                methods: vec![Method::Hmit],
                hmit: HmitParams {
                    mining: crate::mining::MiningParams::new(0.1, 0.5).unwrap(),
                    ..Default::default()
                },
                ..Default::default()
            };
            let report = run_sweep_on(&toy(), &spec).unwrap();
            let cov: Vec<f64> = report.rows.iter().map(|r| r.metrics.coverage).collect();
            assert!(cov[0] > 0.0, "{axis}: {cov:?}");
            assert!(cov.windows(2).all(|w| w[1] <= w[0]), "{axis}: {cov:?}");
        }
    }

    #[test]
    fn invalid_specs() {
        let bad_rate = ExperimentSpec {
            missing_rate: 1.0,
            ..Default::default()
        };
        assert!(bad_rate.validate().is_err());
        let empty_values = ExperimentSpec {
            axis: SweepAxis::Support,
            ..Default::default()
        };
        assert!(empty_values.validate().is_err());
        let bad_value = ExperimentSpec {
            axis: SweepAxis::Confidence,
            values: vec![1.5],
            ..Default::default()
        };
        assert!(bad_value.validate().is_err());
        let no_methods = ExperimentSpec {
            methods: vec![],
            ..Default::default()
        };
        assert!(no_methods.validate().is_err());
    }

    #[test]
    fn axis_and_method_parse() {
        assert_eq!("missing-rate".parse::<SweepAxis>(), Ok(SweepAxis::MissingRate));
        assert_eq!("knn".parse::<Method>(), Ok(Method::Knn));
        assert!("fast".parse::<Method>().is_err());
    }
}
