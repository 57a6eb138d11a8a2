//! k-nearest-neighbor imputation under the heterogeneous Euclidean-overlap
//! metric (HEOM).
//!
//! Per attribute the distance term is 1 when either cell is missing; for
//! categorical attributes 0 on equal levels and 1 otherwise; for numeric
//! attributes `|a - b| / range`. The distance is the Euclidean norm of the
//! terms. Categorical targets take the neighbors' majority level and numeric
//! targets their mean.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::data::{AttributeKind, AttributeSchema, Cell, Dataset, Record};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    #[default]
    Heom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
    pub distance: DistanceKind,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self {
            k: 10,
            distance: DistanceKind::Heom,
        }
    }
}

impl KnnParams {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(Self {
            k,
            distance: DistanceKind::Heom,
        })
    }
}

/// `max - min` of each numeric attribute over the observed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericRanges(Vec<f64>);

impl NumericRanges {
    pub fn fit(dataset: &Dataset) -> Self {
        let ranges = dataset
            .schema()
            .iter()
            .enumerate()
            .map(|(col, attr)| {
                if !attr.is_numeric() {
                    return 0.0;
                }
                let values = dataset.numeric_values(col);
                let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if values.is_empty() {
                    0.0
                } else {
                    hi - lo
                }
            })
            .collect();
        Self(ranges)
    }

    pub fn from_vec(ranges: Vec<f64>) -> Self {
        Self(ranges)
    }

    pub fn get(&self, attribute: usize) -> f64 {
        self.0[attribute]
    }
}

/// HEOM distance between two records over every attribute.
pub fn distance(a: &Record, b: &Record, schema: &[AttributeSchema], ranges: &NumericRanges) -> f64 {
    distance_masked(a, b, schema, ranges, None)
}

fn distance_masked(
    a: &Record,
    b: &Record,
    schema: &[AttributeSchema],
    ranges: &NumericRanges,
    evidence: Option<&[bool]>,
) -> f64 {
    let mut sum = 0.0;
    for (col, attr) in schema.iter().enumerate() {
        if let Some(mask) = evidence {
            if !mask[col] {
                continue;
            }
        }
        let term = match (a.cells[col], b.cells[col]) {
            (Cell::Missing, _) | (_, Cell::Missing) => 1.0,
            (Cell::Level(x), Cell::Level(y)) => {
                if x == y {
                    0.0
                } else {
                    1.0
                }
            }
            (Cell::Number(x), Cell::Number(y)) => {
                let range = ranges.get(col);
                if range > 0.0 {
                    (x - y).abs() / range
                } else if x == y {
                    0.0
                } else {
                    1.0
                }
            }
            _ => {
                debug_assert!(false, "cell kinds disagree for `{}`", attr.name);
                1.0
            }
        };
        sum += term * term;
    }
    sum.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnOutcome {
    pub value: Cell,
    /// Ids of the neighbors that voted, nearest first.
    pub neighbors: Vec<usize>,
    /// No other record observed the target; the value is the dataset-wide
    /// mode or mean instead.
    pub global_fallback: bool,
}

#[derive(Clone, Copy, PartialEq)]
struct Candidate {
    distance: f64,
    id: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// kNN imputer over a fixed training dataset.
#[derive(Debug, Clone)]
pub struct KnnImputer<'a> {
    dataset: &'a Dataset,
    ranges: NumericRanges,
    params: KnnParams,
    evidence: Vec<bool>,
}

impl<'a> KnnImputer<'a> {
    pub fn new(dataset: &'a Dataset, params: KnnParams) -> Self {
        Self {
            dataset,
            ranges: NumericRanges::fit(dataset),
            params,
            evidence: vec![true; dataset.n_attributes()],
        }
    }

    /// Restricts the attributes that enter the distance.
    pub fn with_evidence(mut self, evidence: Vec<bool>) -> Self {
        assert_eq!(evidence.len(), self.dataset.n_attributes());
        self.evidence = evidence;
        self
    }

    pub fn params(&self) -> &KnnParams {
        &self.params
    }

    pub fn ranges(&self) -> &NumericRanges {
        &self.ranges
    }

    /// The `k` records nearest to `record` among those (other than itself)
    /// that observe `target`, ordered by distance then id.
    pub fn neighbors(&self, record: &Record, target: usize) -> Vec<(usize, f64)> {
        let k = self.params.k;
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        let schema = self.dataset.schema();
        for other in self.dataset.records() {
            if other.id == record.id || other.cells[target].is_missing() {
                continue;
            }
            let candidate = Candidate {
                distance: distance_masked(record, other, schema, &self.ranges, Some(&self.evidence)),
                id: other.id,
            };
            if heap.len() < k {
                heap.push(candidate);
            } else if let Some(worst) = heap.peek() {
                if candidate < *worst {
                    heap.pop();
                    heap.push(candidate);
                }
            }
        }
        heap.into_sorted_vec()
            .into_iter()
            .map(|c| (c.id, c.distance))
            .collect()
    }

    pub fn impute(&self, record: &Record, target: usize) -> Result<KnnOutcome> {
        let neighbors = self.neighbors(record, target);
        let attr = self.dataset.attribute(target);
        if neighbors.is_empty() {
            let value = global_value(self.dataset, target)?;
            return Ok(KnnOutcome {
                value,
                neighbors: Vec::new(),
                global_fallback: true,
            });
        }
        let values = neighbors
            .iter()
            .map(|(id, _)| self.dataset.cell(*id, target));
        let value = aggregate(attr.kind, attr.levels.len(), values)
            .ok_or_else(|| Error::NoKnownValues(attr.name.clone()))?;
        Ok(KnnOutcome {
            value,
            neighbors: neighbors.into_iter().map(|(id, _)| id).collect(),
            global_fallback: false,
        })
    }
}

/// Majority level (ties → lowest level index) or arithmetic mean.
fn aggregate(kind: AttributeKind, n_levels: usize, values: impl Iterator<Item = Cell>) -> Option<Cell> {
    match kind {
        AttributeKind::Categorical => {
            let mut votes = vec![0usize; n_levels];
            let mut any = false;
            for v in values {
                if let Cell::Level(l) = v {
                    votes[l as usize] += 1;
                    any = true;
                }
            }
            if !any {
                return None;
            }
            let best = votes
                .iter()
                .enumerate()
                .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
                .map(|(i, _)| i as u32)?;
            Some(Cell::Level(best))
        }
        AttributeKind::Numeric => {
            let (sum, n) = values
                .filter_map(|v| v.number())
                .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
            (n > 0).then(|| Cell::Number(sum / n as f64))
        }
    }
}

/// Dataset-wide mode or mean of one attribute's observed values.
pub fn global_value(dataset: &Dataset, target: usize) -> Result<Cell> {
    let attr = dataset.attribute(target);
    aggregate(
        attr.kind,
        attr.levels.len(),
        dataset.records().iter().map(|r| r.cells[target]),
    )
    .ok_or_else(|| Error::NoKnownValues(attr.name.clone()))
}

/// Imputes one missing cell of `record` from its nearest neighbors in `dataset`.
pub fn impute_knn(record: &Record, target: usize, dataset: &Dataset, params: &KnnParams) -> Result<Cell> {
    Ok(KnnImputer::new(dataset, *params).impute(record, target)?.value)
}
