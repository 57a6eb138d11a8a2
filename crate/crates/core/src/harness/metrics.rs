use serde::{Deserialize, Serialize};

use super::inject::GroundTruth;
use crate::data::{AttributeKind, Dataset};
use crate::hmit::{CellImputation, Source};

/// Scores of one imputation against the masked originals.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub masked_cells: usize,
    pub categorical_cells: usize,
    pub categorical_correct: usize,
    /// Exact-match fraction over masked categorical cells.
    pub accuracy: Option<f64>,
    pub numeric_cells: usize,
    /// Range-normalized RMSE, averaged over numeric attributes.
    pub nrmse: Option<f64>,
    pub rule_cells: usize,
    pub rule_correct: usize,
    /// Fraction of masked cells imputed from rules.
    pub coverage: f64,
    /// Accuracy over categorical cells imputed from rules.
    pub rule_accuracy: Option<f64>,
}

/// Compares `imputed` against `truth`.
///
/// Categorical cells count as correct on an exact label match. Numeric error
/// is normalized by the range of the attribute's original column (unmasked
/// cells plus the truth values); a constant column is left unnormalized.
pub fn evaluate(imputed: &Dataset, truth: &GroundTruth) -> Metrics {
    evaluate_with_sources(imputed, truth, &[])
}

/// [`evaluate`] plus coverage and rule-cell accuracy from per-cell sources.
pub fn evaluate_with_sources(imputed: &Dataset, truth: &GroundTruth, cells: &[CellImputation]) -> Metrics {
    let n_attr = imputed.n_attributes();
    let mut m = Metrics {
        masked_cells: truth.len(),
        ..Default::default()
    };
    let from_rules: std::collections::HashSet<(usize, usize)> = cells
        .iter()
        .filter(|c| c.source == Source::Rules)
        .map(|c| (c.row, c.column))
        .collect();

    let mut sq_err = vec![0.0f64; n_attr];
    let mut n_num = vec![0usize; n_attr];
    for t in &truth.cells {
        let got = imputed.cell(t.row, t.column);
        let by_rules = from_rules.contains(&(t.row, t.column));
        m.rule_cells += usize::from(by_rules);
        match imputed.attribute(t.column).kind {
            AttributeKind::Categorical => {
                m.categorical_cells += 1;
                let correct = imputed.format_cell(t.column, got) == imputed.format_cell(t.column, t.value);
                m.categorical_correct += usize::from(correct);
                m.rule_correct += usize::from(correct && by_rules);
            }
            AttributeKind::Numeric => {
                m.numeric_cells += 1;
                let (Some(a), Some(b)) = (got.number(), t.value.number()) else {
                    sq_err[t.column] = f64::INFINITY;
                    n_num[t.column] += 1;
                    continue;
                };
                sq_err[t.column] += (a - b) * (a - b);
                n_num[t.column] += 1;
            }
        }
    }

    if m.categorical_cells > 0 {
        m.accuracy = Some(m.categorical_correct as f64 / m.categorical_cells as f64);
    }
    let rule_categorical = truth
        .cells
        .iter()
        .filter(|t| {
            !imputed.attribute(t.column).is_numeric() && from_rules.contains(&(t.row, t.column))
        })
        .count();
    if rule_categorical > 0 {
        m.rule_accuracy = Some(m.rule_correct as f64 / rule_categorical as f64);
    }
    if m.masked_cells > 0 {
        m.coverage = m.rule_cells as f64 / m.masked_cells as f64;
    }

    let mut per_attr = Vec::new();
    for col in (0..n_attr).filter(|&c| n_num[c] > 0) {
        let rmse = (sq_err[col] / n_num[col] as f64).sqrt();
        let range = original_range(imputed, truth, col);
        per_attr.push(if range > 0.0 { rmse / range } else { rmse });
    }
    if !per_attr.is_empty() {
        m.nrmse = Some(per_attr.iter().sum::<f64>() / per_attr.len() as f64);
    }
    m
}

fn original_range(imputed: &Dataset, truth: &GroundTruth, col: usize) -> f64 {
    let masked: std::collections::HashSet<usize> = truth
        .cells
        .iter()
        .filter(|t| t.column == col)
        .map(|t| t.row)
        .collect();
    let kept = imputed
        .records()
        .iter()
        .filter(|r| !masked.contains(&r.id))
        .filter_map(|r| r.cells[col].number());
    let original = truth
        .cells
        .iter()
        .filter(|t| t.column == col)
        .filter_map(|t| t.value.number());
    let (lo, hi) = kept
        .chain(original)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo.is_finite() { hi - lo } else { 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{read_csv, Cell, LoadOptions};
    use crate::harness::inject::MaskedCell;

    fn ds(text: &str) -> Dataset {
        read_csv(text.as_bytes(), &LoadOptions::default()).unwrap()
    }

    #[test]
    fn perfect_imputation() {
        let d = ds("a,x\nr,1\nb,5\n");
        let truth = GroundTruth {
            cells: vec![
                MaskedCell { row: 0, column: 0, value: Cell::Level(0) },
                MaskedCell { row: 1, column: 1, value: Cell::Number(5.0) },
            ],
        };
        let m = evaluate(&d, &truth);
        assert_eq!(m.accuracy, Some(1.0));
        assert_eq!(m.nrmse, Some(0.0));
    }

    #[test]
    fn three_of_four() {
        let d = ds("a\nr\nr\nr\nb\n");
        let truth = GroundTruth {
            cells: (0..4).map(|row| MaskedCell { row, column: 0, value: Cell::Level(0) }).collect(),
        };
        assert_eq!(evaluate(&d, &truth).accuracy, Some(0.75));
    }

    #[test]
    fn nrmse_formula() {
        // truths [0, 10] imputed as [0, 5]
        let d = ds("x\n0\n5\n");
        let truth = GroundTruth {
            cells: vec![
                MaskedCell { row: 0, column: 0, value: Cell::Number(0.0) },
                MaskedCell { row: 1, column: 0, value: Cell::Number(10.0) },
            ],
        };
        let got = evaluate(&d, &truth).nrmse.unwrap();
        assert!((got - 12.5f64.sqrt() / 10.0).abs() < 1e-12);
        assert!((got - 0.3536).abs() < 1e-4);
    }

    #[test]
    fn coverage_and_rule_accuracy() {
        let d = ds("a\nr\nb\nr\n");
        let truth = GroundTruth {
            cells: (0..3).map(|row| MaskedCell { row, column: 0, value: Cell::Level(0) }).collect(),
        };
        let cell = |row, source| CellImputation {
            row,
            column: 0,
            value: Cell::Level(0),
            source,
            provenance: crate::hmit::Provenance::Rules(vec![0]),
        };
        let cells = vec![cell(0, Source::Rules), cell(1, Source::Rules), cell(2, Source::Knn)];
        let m = evaluate_with_sources(&d, &truth, &cells);
        assert_eq!(m.rule_cells, 2);
        assert!((m.coverage - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.rule_accuracy, Some(0.5));
    }
}
