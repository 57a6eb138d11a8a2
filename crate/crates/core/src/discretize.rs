//! Numeric binning so continuous columns can take part in itemset mining.
//!
//! Bin `i` covers `[edges[i], edges[i + 1])`; the last bin is closed on the
//! right. Values outside the fitted range clamp to the first or last bin.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinStrategy {
    EqualWidth,
    #[default]
    EqualFrequency,
}

impl std::str::FromStr for BinStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "equal-width" => Ok(BinStrategy::EqualWidth),
            "equal-frequency" => Ok(BinStrategy::EqualFrequency),
            other => Err(format!(
                "unknown bin strategy `{other}` (expected equal-width or equal-frequency)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinningParams {
    pub n_bins: usize,
    pub strategy: BinStrategy,
}

impl Default for BinningParams {
    fn default() -> Self {
        Self {
            n_bins: 5,
            strategy: BinStrategy::EqualFrequency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bins {
    edges: Vec<f64>,
    representatives: Vec<f64>,
}

impl Bins {
    /// Fits bins to the observed values of one column.
    ///
    /// Equal-width splits `[min, max]` into `n_bins` intervals represented by
    /// their midpoints. Equal-frequency cuts after the empirical quantiles
    /// `j / n_bins`, placing each edge halfway between the quantile and the
    /// next distinct value so the quantile itself stays in the lower bin.
    /// Coinciding cuts merge. Each bin is represented by the lower median of
    /// the training values falling in it. A constant column yields a single
    /// degenerate bin `[v, v]`.
    pub fn fit(values: &[f64], n_bins: usize, strategy: BinStrategy) -> Result<Self> {
        if n_bins == 0 {
            return Err(Error::InvalidParameter("n_bins must be at least 1".into()));
        }
        let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        if sorted.is_empty() {
            return Err(Error::NoValues);
        }
        sorted.sort_by(f64::total_cmp);
        let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
        if min == max {
            return Ok(Self {
                edges: vec![min, max],
                representatives: vec![min],
            });
        }
        match strategy {
            BinStrategy::EqualWidth => {
                let width = (max - min) / n_bins as f64;
                let mut edges: Vec<f64> = (0..n_bins).map(|i| min + width * i as f64).collect();
                edges.push(max);
                let representatives = edges.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
                Ok(Self {
                    edges,
                    representatives,
                })
            }
            BinStrategy::EqualFrequency => {
                let n = sorted.len();
                let mut edges = vec![min];
                for j in 1..n_bins {
                    // rank of the j-th quantile (inverted empirical CDF)
                    let rank = (j * n).div_ceil(n_bins) - 1;
                    let q = sorted[rank];
                    // cut halfway to the next distinct value so q stays below it
                    let above = sorted.partition_point(|v| *v <= q);
                    if above == n {
                        continue;
                    }
                    let next = sorted[above];
                    let mut cut = q + (next - q) / 2.0;
                    if cut <= q {
                        cut = next;
                    }
                    if cut > *edges.last().unwrap() && cut < max {
                        edges.push(cut);
                    }
                }
                edges.push(max);
                let mut bins = Self {
                    edges,
                    representatives: Vec::new(),
                };
                let mut members: Vec<Vec<f64>> = vec![Vec::new(); bins.edges.len() - 1];
                for v in &sorted {
                    members[bins.bin_of(*v)].push(*v);
                }
                bins.representatives = members.iter().map(|m| m[(m.len() - 1) / 2]).collect();
                Ok(bins)
            }
        }
    }

    /// Index of the bin containing `value`, clamping out-of-range values.
    pub fn bin_of(&self, value: f64) -> usize {
        let interior = &self.edges[1..self.edges.len() - 1];
        interior.partition_point(|e| *e <= value)
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn representatives(&self) -> &[f64] {
        &self.representatives
    }

    pub fn representative(&self, bin: usize) -> f64 {
        self.representatives[bin]
    }

    /// Reassembles bins from serialized parts, checking the invariants.
    pub fn from_parts(edges: Vec<f64>, representatives: Vec<f64>) -> Result<Self> {
        let ok = edges.len() >= 2
            && representatives.len() == edges.len() - 1
            && (edges.windows(2).all(|w| w[0] < w[1]) || (edges.len() == 2 && edges[0] == edges[1]))
            && representatives
                .iter()
                .enumerate()
                .all(|(i, r)| edges[i] <= *r && *r <= edges[i + 1]);
        if !ok {
            return Err(Error::InvalidParameter("malformed bins".into()));
        }
        Ok(Self {
            edges,
            representatives,
        })
    }
}

/// Fitted bins for every numeric attribute of a dataset, indexed by attribute.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Binnings(Vec<Option<Bins>>);

impl Binnings {
    pub fn none(n_attributes: usize) -> Self {
        Self(vec![None; n_attributes])
    }

    pub fn from_vec(bins: Vec<Option<Bins>>) -> Self {
        Self(bins)
    }

    /// Fits bins for each numeric attribute with at least one observed value.
    pub fn fit(dataset: &Dataset, params: &BinningParams) -> Result<Self> {
        let mut out = Vec::with_capacity(dataset.n_attributes());
        for (col, attr) in dataset.schema().iter().enumerate() {
            if !attr.is_numeric() {
                out.push(None);
                continue;
            }
            let values = dataset.numeric_values(col);
            if values.is_empty() {
                out.push(None);
            } else {
                out.push(Some(Bins::fit(&values, params.n_bins, params.strategy)?));
            }
        }
        Ok(Self(out))
    }

    pub fn get(&self, attribute: usize) -> Option<&Bins> {
        self.0.get(attribute).and_then(Option::as_ref)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
