use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{format_number, AttributeKind, AttributeSchema, Cell, Dataset, Record};
use crate::error::{Error, Result};

/// Which column, if any, holds the class label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassColumn {
    #[default]
    None,
    Last,
    Named(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoadOptions {
    pub missing_marker: String,
    pub has_header: bool,
    pub delimiter: u8,
    /// Per-column kind overrides, keyed by column name.
    #[serde(default)]
    pub kinds: HashMap<String, AttributeKind>,
    #[serde(default)]
    pub class_column: ClassColumn,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            missing_marker: "?".to_string(),
            has_header: true,
            delimiter: b',',
            kinds: HashMap::new(),
            class_column: ClassColumn::None,
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Dataset> {
    let file = File::open(path.as_ref())?;
    read_csv(file, options)
}

/// Parses a CSV table. A cell equal to the missing marker becomes
/// [`Cell::Missing`]; a column is numeric when every other cell parses as a
/// finite number, categorical otherwise.
pub fn read_csv<R: Read>(reader: R, options: &LoadOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(options.delimiter)
        .from_reader(reader);

    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for row in rdr.records() {
        rows.push(row?);
    }
    let mut rows = rows.into_iter();
    let header: Vec<String> = if options.has_header {
        match rows.next() {
            Some(h) => h.iter().map(str::to_string).collect(),
            None => return Err(Error::EmptyDataset),
        }
    } else {
        Vec::new()
    };
    let body: Vec<csv::StringRecord> = rows.collect();
    if body.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let width = if options.has_header {
        header.len()
    } else {
        body[0].len()
    };
    let line_offset = if options.has_header { 2 } else { 1 };
    for (i, row) in body.iter().enumerate() {
        if row.len() != width {
            return Err(Error::RaggedRow {
                row: i + line_offset,
                expected: width,
                found: row.len(),
            });
        }
    }
    let names: Vec<String> = if options.has_header {
        header
    } else {
        (1..=width).map(|i| format!("col{i}")).collect()
    };
    for name in options.kinds.keys() {
        if !names.contains(name) {
            return Err(Error::UnknownAttribute(name.clone()));
        }
    }

    let marker = options.missing_marker.as_str();
    let mut schema = Vec::with_capacity(width);
    let mut columns: Vec<Vec<Cell>> = Vec::with_capacity(width);
    let mut numeric_text = Vec::new();
    for (col, name) in names.iter().enumerate() {
        let observed = body.iter().map(|r| &r[col]).filter(|v| *v != marker);
        let kind = match options.kinds.get(name) {
            Some(kind) => *kind,
            None => {
                let mut any = false;
                let all_numeric = observed
                    .inspect(|_| any = true)
                    .all(|v| parse_number(v).is_some());
                if any && all_numeric {
                    AttributeKind::Numeric
                } else {
                    AttributeKind::Categorical
                }
            }
        };
        let mut cells = Vec::with_capacity(body.len());
        match kind {
            AttributeKind::Numeric => {
                for (row, r) in body.iter().enumerate() {
                    let text = &r[col];
                    if text == marker {
                        cells.push(Cell::Missing);
                        continue;
                    }
                    let v = parse_number(text).ok_or_else(|| Error::NotNumeric {
                        column: name.clone(),
                        row: row + line_offset,
                        value: text.to_string(),
                    })?;
                    if format_number(v) != text {
                        numeric_text.push((row, col, text.to_string()));
                    }
                    cells.push(Cell::Number(v));
                }
                schema.push(AttributeSchema::numeric(name.clone()));
            }
            AttributeKind::Categorical => {
                let mut levels: Vec<String> = Vec::new();
                let mut index: HashMap<&str, u32> = HashMap::new();
                for r in &body {
                    let text = &r[col];
                    if text == marker {
                        cells.push(Cell::Missing);
                        continue;
                    }
                    let level = *index.entry(text).or_insert_with(|| {
                        levels.push(text.to_string());
                        (levels.len() - 1) as u32
                    });
                    cells.push(Cell::Level(level));
                }
                schema.push(AttributeSchema::categorical(name.clone(), levels));
            }
        }
        columns.push(cells);
    }

    let records = (0..body.len())
        .map(|row| Record {
            id: row,
            cells: columns.iter().map(|c| c[row]).collect(),
        })
        .collect();
    let class_column = match &options.class_column {
        ClassColumn::None => None,
        ClassColumn::Last => Some(width - 1),
        ClassColumn::Named(n) => Some(
            names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Error::UnknownAttribute(n.clone()))?,
        ),
    };
    let mut dataset = Dataset::new(schema, records, class_column)?;
    for (row, col, text) in numeric_text {
        dataset.set_numeric_text(row, col, text);
    }
    Ok(dataset)
}

fn parse_number(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Writes a header row followed by one row per record; missing cells are
/// written as `missing_marker`.
pub fn write_csv<W: Write>(dataset: &Dataset, writer: W, missing_marker: &str) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().from_writer(writer);
    wtr.write_record(dataset.schema().iter().map(|a| a.name.as_str()))?;
    let mut row_buf: Vec<String> = Vec::with_capacity(dataset.n_attributes());
    for record in dataset.records() {
        row_buf.clear();
        for col in 0..dataset.n_attributes() {
            row_buf.push(match dataset.cell_text(record.id, col) {
                Some(text) => text.into_owned(),
                None => missing_marker.to_string(),
            });
        }
        wtr.write_record(&row_buf)?;
    }
    wtr.flush()?;
    Ok(())
}
