//! Missing value imputation from association rules with a k-nearest-neighbor
//! fallback.
//!
//! Rules are mined from the known cells of a dataset ([`mining`]); each
//! missing cell is filled from the rules whose antecedent matches the rest of
//! its record, or by [`knn`] when none does ([`hmit`]). The [`harness`]
//! module masks complete datasets and scores imputations against them.

pub mod data;
pub mod discretize;
pub mod error;
pub mod harness;
pub mod hmit;
pub mod knn;
pub mod mining;

pub use data::{AttributeKind, AttributeSchema, Cell, Dataset, Item, Itemset, Record};
pub use discretize::{BinStrategy, BinningParams, Bins, Binnings};
pub use error::{Error, Result};
pub use hmit::{
    fire_rules, impute_dataset, impute_dataset_knn, impute_from_rules, CellImputation, FiredSet,
    HmitImputer, HmitModel, HmitParams, Imputation, ImputationReport, Provenance, Source,
};
pub use knn::{distance, impute_knn, KnnImputer, KnnParams, NumericRanges};
pub use mining::{AssociationRule, FrequentItemset, MiningParams, RuleSet, SupportThreshold};
