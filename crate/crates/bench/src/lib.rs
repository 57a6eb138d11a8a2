//! Fixtures shared by the criterion benches.

use std::path::PathBuf;

use hmit_core::data::{load_csv, ClassColumn, LoadOptions};
use hmit_core::harness::{inject_missing, InjectionParams};
use hmit_core::{Dataset, HmitParams, MiningParams, SupportThreshold};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// The Car Evaluation table, class last.
pub fn car() -> Dataset {
    let options = LoadOptions {
        class_column: ClassColumn::Last,
        ..Default::default()
    };
    load_csv(data_dir().join("car.csv"), &options).expect("data/car.csv")
}

/// Car with `rate` of its non-class cells masked.
pub fn masked_car(rate: f64, seed: u64) -> Dataset {
    let params = InjectionParams {
        rate,
        seed,
        exclude_class: true,
    };
    inject_missing(&car(), &params).expect("mask car").0
}

/// Parameters with support given as a record count.
pub fn params(support_count: usize, confidence: f64) -> HmitParams {
    HmitParams {
        mining: MiningParams {
            min_support: SupportThreshold::Count(support_count),
            min_confidence: confidence,
            max_antecedent_len: None,
        },
        ..Default::default()
    }
}
