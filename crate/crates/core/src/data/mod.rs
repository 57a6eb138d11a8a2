//! Tabular datasets with explicit missing cells.
//!
//! Categorical cells hold an index into their attribute's level list; numeric
//! cells hold an `f64`. The original text of numeric cells is kept when it
//! does not survive a round trip through `f64` formatting, so a loaded file
//! can be written back unchanged.

mod csv_io;
mod items;

use std::borrow::Cow;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use csv_io::{load_csv, read_csv, write_csv, ClassColumn, LoadOptions};
pub use items::{itemize, itemize_dataset, known_items, Item, Itemset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Categorical,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSchema {
    pub name: String,
    pub kind: AttributeKind,
    /// Category labels in first-appearance order. Empty for numeric attributes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<String>,
}

impl AttributeSchema {
    pub fn categorical(name: impl Into<String>, levels: Vec<String>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Categorical,
            levels,
        }
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Numeric,
            levels: Vec::new(),
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.kind == AttributeKind::Numeric
    }

    pub fn level_index(&self, label: &str) -> Option<u32> {
        self.levels.iter().position(|l| l == label).map(|i| i as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Missing,
    Level(u32),
    Number(f64),
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    pub fn is_present(&self) -> bool {
        !self.is_missing()
    }

    pub fn level(&self) -> Option<u32> {
        match *self {
            Cell::Level(l) => Some(l),
            _ => None,
        }
    }

    pub fn number(&self) -> Option<f64> {
        match *self {
            Cell::Number(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    /// Row index in the source table.
    pub id: usize,
    pub cells: Vec<Cell>,
}

impl Record {
    pub fn present_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_present()).count()
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    schema: Vec<AttributeSchema>,
    records: Vec<Record>,
    class_column: Option<usize>,
    numeric_text: HashMap<(usize, usize), String>,
}

impl Dataset {
    /// Builds a dataset, checking that names are unique, every record is as
    /// wide as the schema, and every level index is in range.
    pub fn new(
        schema: Vec<AttributeSchema>,
        records: Vec<Record>,
        class_column: Option<usize>,
    ) -> Result<Self> {
        let mut seen = HashMap::new();
        for attr in &schema {
            if seen.insert(attr.name.as_str(), ()).is_some() {
                return Err(Error::DuplicateAttribute(attr.name.clone()));
            }
        }
        for (row, record) in records.iter().enumerate() {
            if record.cells.len() != schema.len() {
                return Err(Error::RaggedRow {
                    row,
                    expected: schema.len(),
                    found: record.cells.len(),
                });
            }
            for (attr, cell) in schema.iter().zip(&record.cells) {
                let ok = match (attr.kind, cell) {
                    (_, Cell::Missing) => true,
                    (AttributeKind::Categorical, Cell::Level(l)) => {
                        (*l as usize) < attr.levels.len()
                    }
                    (AttributeKind::Numeric, Cell::Number(v)) => v.is_finite(),
                    _ => false,
                };
                if !ok {
                    return Err(Error::SchemaMismatch(format!(
                        "row {row}: cell {cell:?} invalid for attribute `{}`",
                        attr.name
                    )));
                }
            }
        }
        if let Some(c) = class_column {
            if c >= schema.len() {
                return Err(Error::InvalidParameter(format!(
                    "class column {c} out of range"
                )));
            }
        }
        let records = records
            .into_iter()
            .enumerate()
            .map(|(id, r)| Record { id, cells: r.cells })
            .collect();
        Ok(Self {
            schema,
            records,
            class_column,
            numeric_text: HashMap::new(),
        })
    }

    pub(crate) fn set_numeric_text(&mut self, row: usize, col: usize, text: String) {
        self.numeric_text.insert((row, col), text);
    }

    pub fn schema(&self) -> &[AttributeSchema] {
        &self.schema
    }

    pub fn attribute(&self, index: usize) -> &AttributeSchema {
        &self.schema[index]
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|a| a.name == name)
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn record(&self, row: usize) -> &Record {
        &self.records[row]
    }

    pub fn n_records(&self) -> usize {
        self.records.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.schema.len()
    }

    pub fn class_column(&self) -> Option<usize> {
        self.class_column
    }

    pub fn set_class_column(&mut self, class_column: Option<usize>) {
        self.class_column = class_column;
    }

    pub fn cell(&self, row: usize, col: usize) -> Cell {
        self.records[row].cells[col]
    }

    pub fn set_cell(&mut self, row: usize, col: usize, cell: Cell) {
        self.numeric_text.remove(&(row, col));
        self.records[row].cells[col] = cell;
    }

    /// Appends `label` to a categorical attribute's levels if absent.
    pub fn ensure_level(&mut self, col: usize, label: &str) -> u32 {
        let attr = &mut self.schema[col];
        match attr.level_index(label) {
            Some(i) => i,
            None => {
                attr.levels.push(label.to_string());
                (attr.levels.len() - 1) as u32
            }
        }
    }

    /// `(row, column)` of every missing cell, row-major.
    pub fn missing_cells(&self) -> Vec<(usize, usize)> {
        self.records
            .iter()
            .flat_map(|r| {
                r.cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.is_missing())
                    .map(move |(col, _)| (r.id, col))
            })
            .collect()
    }

    pub fn missing_count(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.cells.len() - r.present_count())
            .sum()
    }

    /// Observed (non-missing) numeric values of one attribute.
    pub fn numeric_values(&self, col: usize) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| r.cells[col].number())
            .collect()
    }

    /// Text of one cell as it would be written; `None` for missing cells.
    pub fn cell_text(&self, row: usize, col: usize) -> Option<Cow<'_, str>> {
        if let Some(text) = self.numeric_text.get(&(row, col)) {
            return Some(Cow::Borrowed(text));
        }
        self.format_cell(col, self.cell(row, col))
    }

    /// Text for an arbitrary cell value of attribute `col`.
    pub fn format_cell(&self, col: usize, cell: Cell) -> Option<Cow<'_, str>> {
        match cell {
            Cell::Missing => None,
            Cell::Level(l) => Some(Cow::Borrowed(self.schema[col].levels[l as usize].as_str())),
            Cell::Number(v) => Some(Cow::Owned(format_number(v))),
        }
    }

    /// Per-attribute flags selecting which attributes may serve as evidence.
    pub fn evidence_mask(&self, exclude_class: bool) -> Vec<bool> {
        (0..self.n_attributes())
            .map(|c| !(exclude_class && Some(c) == self.class_column))
            .collect()
    }
}

pub(crate) fn format_number(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Dataset {
        let schema = vec![
            AttributeSchema::categorical("color", vec!["red".into(), "blue".into()]),
            AttributeSchema::numeric("x"),
        ];
        let records = vec![
            Record {
                id: 0,
                cells: vec![Cell::Level(0), Cell::Number(1.5)],
            },
            Record {
                id: 1,
                cells: vec![Cell::Missing, Cell::Number(2.0)],
            },
        ];
        Dataset::new(schema, records, None).unwrap()
    }

    #[test]
    fn rejects_duplicate_names() {
        let schema = vec![AttributeSchema::numeric("a"), AttributeSchema::numeric("a")];
        assert!(matches!(
            Dataset::new(schema, vec![], None),
            Err(Error::DuplicateAttribute(_))
        ));
    }

    #[test]
    fn rejects_out_of_range_level() {
        let schema = vec![AttributeSchema::categorical("a", vec!["x".into()])];
        let records = vec![Record {
            id: 0,
            cells: vec![Cell::Level(3)],
        }];
        assert!(Dataset::new(schema, records, None).is_err());
    }

    #[test]
    fn missing_cells_and_counts() {
        let ds = tiny();
        assert_eq!(ds.missing_cells(), vec![(1, 0)]);
        assert_eq!(ds.missing_count(), 1);
        assert_eq!(ds.numeric_values(1), vec![1.5, 2.0]);
    }

    #[test]
    fn set_cell_drops_original_text() {
        let mut ds = tiny();
        ds.set_numeric_text(0, 1, "1.50".into());
        assert_eq!(ds.cell_text(0, 1).unwrap(), "1.50");
        ds.set_cell(0, 1, Cell::Number(3.0));
        assert_eq!(ds.cell_text(0, 1).unwrap(), "3");
    }

    #[test]
    fn ensure_level_appends_once() {
        let mut ds = tiny();
        assert_eq!(ds.ensure_level(0, "blue"), 1);
        assert_eq!(ds.ensure_level(0, "green"), 2);
        assert_eq!(ds.ensure_level(0, "green"), 2);
        assert_eq!(ds.attribute(0).levels.len(), 3);
    }
}
