use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Cell, Dataset};
use crate::error::{Error, Result};

/// One masked cell and the value it held.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskedCell {
    pub row: usize,
    pub column: usize,
    pub value: Cell,
}

/// Original values of every cell removed by [`inject_missing`], row-major.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroundTruth {
    pub cells: Vec<MaskedCell>,
}

impl GroundTruth {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells.iter().map(|c| (c.row, c.column))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InjectionParams {
    pub rate: f64,
    pub seed: u64,
    /// Never mask the class column.
    pub exclude_class: bool,
}

/// Masks `round(rate * eligible)` cells chosen uniformly at random.
///
/// Cells are drawn from a seeded shuffle of the eligible cells; a cell whose
/// removal would leave its record with no present value is skipped and the
/// next one drawn instead.
pub fn inject_missing(dataset: &Dataset, params: &InjectionParams) -> Result<(Dataset, GroundTruth)> {
    if !(0.0..1.0).contains(&params.rate) {
        return Err(Error::InvalidParameter(format!(
            "missing rate {} outside [0, 1)",
            params.rate
        )));
    }
    let skip_class = if params.exclude_class {
        dataset.class_column()
    } else {
        None
    };
    let mut eligible = Vec::new();
    for record in dataset.records() {
        for (col, cell) in record.cells.iter().enumerate() {
            if Some(col) == skip_class {
                continue;
            }
            if cell.is_missing() {
                return Err(Error::PreexistingMissing {
                    row: record.id,
                    column: dataset.attribute(col).name.clone(),
                });
            }
            eligible.push((record.id, col));
        }
    }
    let requested = (params.rate * eligible.len() as f64).round() as usize;
    let mut masked = dataset.clone();
    if requested == 0 {
        return Ok((masked, GroundTruth::default()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    eligible.shuffle(&mut rng);
    let mut present: Vec<usize> = dataset.records().iter().map(|r| r.present_count()).collect();
    let mut truth = Vec::with_capacity(requested);
    for (row, col) in eligible {
        if truth.len() == requested {
            break;
        }
        if present[row] <= 1 {
            continue;
        }
        present[row] -= 1;
        truth.push(MaskedCell {
            row,
            column: col,
            value: dataset.cell(row, col),
        });
        masked.set_cell(row, col, Cell::Missing);
    }
    if truth.len() < requested {
        return Err(Error::MaskUnsatisfiable {
            requested,
            available: truth.len(),
        });
    }
    truth.sort_by_key(|c| (c.row, c.column));
    Ok((masked, GroundTruth { cells: truth }))
}
