//! Frequent itemset mining and single-consequent association rules.

mod apriori;
mod bitset;
mod rules;
mod rules_io;

use serde::{Deserialize, Serialize};

use crate::data::{Item, Itemset};
use crate::error::{Error, Result};

pub use apriori::{mine_frequent, support_count};
pub use rules::{generate_rules, rules_for_attribute, RuleSet};
pub use rules_io::{read_rules, write_rules, RuleFileHeader};

/// Slack for comparing `count >= fraction * total` in floating point.
const THRESHOLD_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum SupportThreshold {
    /// Fraction of records in `(0, 1]`.
    Fraction(f64),
    /// Absolute number of records.
    Count(usize),
}

impl SupportThreshold {
    /// Smallest support count that meets the threshold over `n_records`.
    pub fn min_count(&self, n_records: usize) -> usize {
        match *self {
            SupportThreshold::Fraction(f) => {
                let raw = (f * n_records as f64 - THRESHOLD_EPS).ceil();
                (raw.max(1.0)) as usize
            }
            SupportThreshold::Count(c) => c.max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiningParams {
    pub min_support: SupportThreshold,
    pub min_confidence: f64,
    /// Longest antecedent allowed; itemsets are capped at one item more.
    pub max_antecedent_len: Option<usize>,
}

impl Default for MiningParams {
    fn default() -> Self {
        Self {
            min_support: SupportThreshold::Fraction(0.40),
            min_confidence: 0.60,
            max_antecedent_len: None,
        }
    }
}

impl MiningParams {
    pub fn new(min_support: f64, min_confidence: f64) -> Result<Self> {
        let params = Self {
            min_support: SupportThreshold::Fraction(min_support),
            min_confidence,
            max_antecedent_len: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_max_antecedent_len(mut self, len: Option<usize>) -> Self {
        self.max_antecedent_len = len;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| v > 0.0 && v <= 1.0;
        if let SupportThreshold::Fraction(f) = self.min_support {
            if !in_unit(f) {
                return Err(Error::InvalidParameter(format!(
                    "min_support {f} outside (0, 1]"
                )));
            }
        }
        if let SupportThreshold::Count(0) = self.min_support {
            return Err(Error::InvalidParameter("min_support count must be positive".into()));
        }
        if !in_unit(self.min_confidence) {
            return Err(Error::InvalidParameter(format!(
                "min_confidence {} outside (0, 1]",
                self.min_confidence
            )));
        }
        Ok(())
    }

    pub(crate) fn max_itemset_len(&self) -> usize {
        self.max_antecedent_len
            .map(|l| l.saturating_add(1))
            .unwrap_or(usize::MAX)
    }

    pub(crate) fn meets_confidence(&self, count: usize, antecedent_count: usize) -> bool {
        count as f64 >= self.min_confidence * antecedent_count as f64 - THRESHOLD_EPS
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequentItemset {
    pub itemset: Itemset,
    pub support_count: usize,
    pub support: f64,
}

/// `antecedent → consequent` with a single-item consequent.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub antecedent: Itemset,
    pub consequent: Item,
    /// Records containing antecedent ∪ {consequent}.
    pub support_count: usize,
    /// Records containing the antecedent.
    pub antecedent_count: usize,
    pub support: f64,
    pub confidence: f64,
}

impl AssociationRule {
    pub fn consequent_attribute(&self) -> usize {
        self.consequent.attribute as usize
    }

    /// Orders by confidence as an exact fraction.
    pub fn cmp_confidence(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.support_count as u128 * other.antecedent_count as u128;
        let rhs = other.support_count as u128 * self.antecedent_count as u128;
        lhs.cmp(&rhs)
    }
}

/// Canonical itemset order: shorter first, then lexicographic on items.
pub(crate) fn canonical_cmp(a: &Itemset, b: &Itemset) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.items().cmp(b.items()))
}
