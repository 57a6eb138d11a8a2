//! Hybrid imputation: association rules first, kNN for what they miss.
//!
//! For a missing cell the fired set holds every rule that predicts the
//! cell's attribute and whose antecedent is contained in the record's known
//! items. A non-empty fired set yields the mode of its consequents
//! (categorical) or the median of their bin representatives (numeric);
//! otherwise the cell is handed to [`KnnImputer`]. Every cell is imputed from
//! the original known values only.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{itemize_dataset, AttributeKind, Cell, Dataset, Itemset, Record};
use crate::discretize::{BinningParams, Bins, Binnings};
use crate::error::{Error, Result};
use crate::knn::{KnnImputer, KnnParams};
use crate::mining::{canonical_cmp, generate_rules, mine_frequent, AssociationRule, MiningParams, RuleSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HmitParams {
    pub mining: MiningParams,
    pub binning: BinningParams,
    pub knn: KnnParams,
    /// Keep the class column out of mining, rule firing and distances.
    pub exclude_class_evidence: bool,
}

/// Bins and rules mined from one dataset.
#[derive(Debug, Clone)]
pub struct HmitModel {
    pub binnings: Binnings,
    pub rules: RuleSet,
}

impl HmitModel {
    /// Bins the numeric columns and mines rules from the known cells.
    pub fn fit(dataset: &Dataset, params: &HmitParams) -> Result<Self> {
        let binnings = Binnings::fit(dataset, &params.binning)?;
        let db = itemize_dataset(
            dataset,
            &binnings,
            &dataset.evidence_mask(params.exclude_class_evidence),
        );
        let frequents = mine_frequent(&db, &params.mining)?;
        let rules = RuleSet::new(generate_rules(&frequents, &params.mining));
        Ok(Self { binnings, rules })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FiredRule<'a> {
    /// Position of the rule in its [`RuleSet`].
    pub id: usize,
    pub rule: &'a AssociationRule,
}

/// The rules fired for one target attribute, strongest first.
#[derive(Debug, Clone)]
pub struct FiredSet<'a> {
    pub attribute: usize,
    pub rules: Vec<FiredRule<'a>>,
}

impl FiredSet<'_> {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn ids(&self) -> Vec<usize> {
        self.rules.iter().map(|f| f.id).collect()
    }
}

fn fired_order(a: &FiredRule<'_>, b: &FiredRule<'_>) -> Ordering {
    b.rule
        .cmp_confidence(a.rule)
        .then_with(|| b.rule.support_count.cmp(&a.rule.support_count))
        .then_with(|| canonical_cmp(&a.rule.antecedent, &b.rule.antecedent))
        .then_with(|| a.id.cmp(&b.id))
}

/// Rules predicting `target_attribute` whose antecedent is a subset of `known`.
pub fn fire_rules<'a>(known: &Itemset, target_attribute: usize, rules: &'a RuleSet) -> FiredSet<'a> {
    let mut fired: Vec<FiredRule<'a>> = rules
        .for_attribute(target_attribute)
        .filter(|(_, r)| r.antecedent.is_subset_of(known))
        .map(|(id, rule)| FiredRule { id, rule })
        .collect();
    fired.sort_by(fired_order);
    FiredSet {
        attribute: target_attribute,
        rules: fired,
    }
}

/// Combines the consequents of a non-empty fired set into one value.
///
/// Categorical: most frequent consequent level; ties go to the level whose
/// best rule has the higher confidence, then support, then the lower index.
/// Numeric: median of the consequent bins' representatives.
pub fn impute_from_rules(fired: &FiredSet<'_>, kind: AttributeKind, bins: Option<&Bins>) -> Result<Cell> {
    if fired.is_empty() {
        return Err(Error::EmptyFiredSet);
    }
    match kind {
        AttributeKind::Categorical => {
            // level -> (votes, best rule); rules arrive strongest first
            let mut tally: Vec<(u32, usize, &AssociationRule)> = Vec::new();
            for f in &fired.rules {
                let level = f.rule.consequent.level;
                match tally.iter_mut().find(|(l, _, _)| *l == level) {
                    Some(entry) => entry.1 += 1,
                    None => tally.push((level, 1, f.rule)),
                }
            }
            let (level, _, _) = tally
                .into_iter()
                .max_by(|(la, na, ra), (lb, nb, rb)| {
                    na.cmp(nb)
                        .then_with(|| ra.cmp_confidence(rb))
                        .then_with(|| ra.support_count.cmp(&rb.support_count))
                        .then_with(|| lb.cmp(la))
                })
                .expect("fired set is non-empty");
            Ok(Cell::Level(level))
        }
        AttributeKind::Numeric => {
            let bins = bins.ok_or_else(|| {
                Error::SchemaMismatch(format!(
                    "rules predict numeric attribute {} but it has no bins",
                    fired.attribute
                ))
            })?;
            let mut reps = Vec::with_capacity(fired.len());
            for f in &fired.rules {
                let bin = f.rule.consequent.level as usize;
                if bin >= bins.len() {
                    return Err(Error::SchemaMismatch(format!(
                        "rule consequent bin {bin} out of range for attribute {}",
                        fired.attribute
                    )));
                }
                reps.push(bins.representative(bin));
            }
            reps.sort_by(f64::total_cmp);
            let mid = reps.len() / 2;
            let median = if reps.len() % 2 == 1 {
                reps[mid]
            } else {
                (reps[mid - 1] + reps[mid]) / 2.0
            };
            Ok(Cell::Number(median))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Rules,
    Knn,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// Ids of the fired rules, strongest first.
    Rules(Vec<usize>),
    Neighbors {
        ids: Vec<usize>,
        global_fallback: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellImputation {
    pub row: usize,
    pub column: usize,
    pub value: Cell,
    pub source: Source,
    pub provenance: Provenance,
}

/// Imputes cells of one dataset against a fixed model.
pub struct HmitImputer<'a> {
    dataset: &'a Dataset,
    model: &'a HmitModel,
    knn: KnnImputer<'a>,
    evidence: Vec<bool>,
}

impl<'a> HmitImputer<'a> {
    pub fn new(dataset: &'a Dataset, model: &'a HmitModel, params: &HmitParams) -> Result<Self> {
        check_model(dataset, model)?;
        let evidence = dataset.evidence_mask(params.exclude_class_evidence);
        let knn = KnnImputer::new(dataset, params.knn).with_evidence(evidence.clone());
        Ok(Self {
            dataset,
            model,
            knn,
            evidence,
        })
    }

    /// Known items of a record restricted to the evidence attributes.
    pub fn known_items(&self, row: usize) -> Itemset {
        let mut items = crate::data::known_items(self.dataset.record(row), &self.model.binnings);
        items.retain(|i| self.evidence[i.attribute as usize]);
        items
    }

    /// Same result as [`fire_rules`] on [`Self::known_items`], matching
    /// antecedents against the record's cells without building the itemset.
    pub fn fire(&self, row: usize, column: usize) -> FiredSet<'a> {
        let record = self.dataset.record(row);
        let mut fired: Vec<FiredRule<'a>> = self
            .model
            .rules
            .for_attribute(column)
            .filter(|(_, r)| self.holds(record, &r.antecedent))
            .map(|(id, rule)| FiredRule { id, rule })
            .collect();
        if fired.len() > 1 {
            fired.sort_by(fired_order);
        }
        FiredSet {
            attribute: column,
            rules: fired,
        }
    }

    fn holds(&self, record: &Record, antecedent: &Itemset) -> bool {
        antecedent.iter().all(|item| {
            let col = item.attribute as usize;
            self.evidence[col]
                && match record.cells[col] {
                    Cell::Missing => false,
                    Cell::Level(l) => l == item.level,
                    Cell::Number(v) => self
                        .model
                        .binnings
                        .get(col)
                        .is_some_and(|b| b.bin_of(v) as u32 == item.level),
                }
        })
    }

    pub fn impute_cell(&self, row: usize, column: usize) -> Result<CellImputation> {
        let fired = self.fire(row, column);
        if !fired.is_empty() {
            let attr = self.dataset.attribute(column);
            let value = impute_from_rules(&fired, attr.kind, self.model.binnings.get(column))?;
            return Ok(CellImputation {
                row,
                column,
                value,
                source: Source::Rules,
                provenance: Provenance::Rules(fired.ids()),
            });
        }
        knn_cell(&self.knn, self.dataset, row, column)
    }
}

fn knn_cell(knn: &KnnImputer<'_>, dataset: &Dataset, row: usize, column: usize) -> Result<CellImputation> {
    let outcome = knn.impute(dataset.record(row), column)?;
    Ok(CellImputation {
        row,
        column,
        value: outcome.value,
        source: Source::Knn,
        provenance: Provenance::Neighbors {
            ids: outcome.neighbors,
            global_fallback: outcome.global_fallback,
        },
    })
}

fn check_model(dataset: &Dataset, model: &HmitModel) -> Result<()> {
    let n = dataset.n_attributes();
    if model.binnings.len() != n {
        return Err(Error::SchemaMismatch(format!(
            "bins cover {} attributes, dataset has {n}",
            model.binnings.len()
        )));
    }
    for rule in model.rules.rules() {
        let items = rule.antecedent.iter().chain(std::iter::once(&rule.consequent));
        for item in items {
            let col = item.attribute as usize;
            let ok = col < n
                && match dataset.attribute(col).kind {
                    AttributeKind::Categorical => {
                        (item.level as usize) < dataset.attribute(col).levels.len()
                    }
                    AttributeKind::Numeric => model
                        .binnings
                        .get(col)
                        .is_some_and(|b| (item.level as usize) < b.len()),
                };
            if !ok {
                return Err(Error::SchemaMismatch(format!(
                    "rule item {item} does not fit the dataset"
                )));
            }
        }
    }
    Ok(())
}

/// Per-cell entry of an [`ImputationReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellEntry {
    pub row: usize,
    pub column: String,
    pub value: String,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rules: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub neighbors: Vec<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub global_fallback: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AttributeStats {
    pub name: String,
    pub missing: usize,
    pub by_rules: usize,
    pub by_knn: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputationReport {
    pub method: String,
    pub params: HmitParams,
    pub rule_count: usize,
    pub imputed: usize,
    pub by_rules: usize,
    pub by_knn: usize,
    pub global_fallbacks: usize,
    pub attributes: Vec<AttributeStats>,
    pub cells: Vec<CellEntry>,
}

impl ImputationReport {
    fn build(method: &str, params: HmitParams, rule_count: usize, dataset: &Dataset, cells: &[CellImputation]) -> Self {
        let mut attributes: Vec<AttributeStats> = dataset
            .schema()
            .iter()
            .map(|a| AttributeStats {
                name: a.name.clone(),
                ..Default::default()
            })
            .collect();
        let mut entries = Vec::with_capacity(cells.len());
        let mut global_fallbacks = 0;
        for c in cells {
            let stats = &mut attributes[c.column];
            stats.missing += 1;
            let (rules, neighbors, global_fallback) = match &c.provenance {
                Provenance::Rules(ids) => {
                    stats.by_rules += 1;
                    (ids.clone(), Vec::new(), false)
                }
                Provenance::Neighbors {
                    ids,
                    global_fallback,
                } => {
                    stats.by_knn += 1;
                    global_fallbacks += usize::from(*global_fallback);
                    (Vec::new(), ids.clone(), *global_fallback)
                }
            };
            entries.push(CellEntry {
                row: c.row,
                column: dataset.attribute(c.column).name.clone(),
                value: dataset
                    .format_cell(c.column, c.value)
                    .map(|s| s.into_owned())
                    .unwrap_or_default(),
                source: c.source,
                rules,
                neighbors,
                global_fallback,
            });
        }
        let by_rules = cells.iter().filter(|c| c.source == Source::Rules).count();
        Self {
            method: method.to_string(),
            params,
            rule_count,
            imputed: cells.len(),
            by_rules,
            by_knn: cells.len() - by_rules,
            global_fallbacks,
            attributes,
            cells: entries,
        }
    }

    /// Fraction of imputed cells that came from rules; 0 with nothing imputed.
    pub fn coverage(&self) -> f64 {
        if self.imputed == 0 {
            0.0
        } else {
            self.by_rules as f64 / self.imputed as f64
        }
    }
}

/// Result of imputing every missing cell of a dataset.
#[derive(Debug, Clone)]
pub struct Imputation {
    pub completed: Dataset,
    pub cells: Vec<CellImputation>,
    pub report: ImputationReport,
}

fn complete(dataset: &Dataset, cells: &[CellImputation]) -> Dataset {
    let mut completed = dataset.clone();
    for c in cells {
        completed.set_cell(c.row, c.column, c.value);
    }
    completed
}

/// Imputes every missing cell with rules from `model`, falling back to kNN.
pub fn impute_dataset(dataset: &Dataset, model: &HmitModel, params: &HmitParams) -> Result<Imputation> {
    let imputer = HmitImputer::new(dataset, model, params)?;
    let cells = dataset
        .missing_cells()
        .into_par_iter()
        .map(|(row, col)| imputer.impute_cell(row, col))
        .collect::<Result<Vec<_>>>()?;
    let report = ImputationReport::build("hmit", *params, model.rules.len(), dataset, &cells);
    Ok(Imputation {
        completed: complete(dataset, &cells),
        cells,
        report,
    })
}

/// Imputes every missing cell with kNN alone.
pub fn impute_dataset_knn(dataset: &Dataset, params: &HmitParams) -> Result<Imputation> {
    let knn = KnnImputer::new(dataset, params.knn)
        .with_evidence(dataset.evidence_mask(params.exclude_class_evidence));
    let cells = dataset
        .missing_cells()
        .into_par_iter()
        .map(|(row, col)| knn_cell(&knn, dataset, row, col))
        .collect::<Result<Vec<_>>>()?;
    let report = ImputationReport::build("knn", *params, 0, dataset, &cells);
    Ok(Imputation {
        completed: complete(dataset, &cells),
        cells,
        report,
    })
}
