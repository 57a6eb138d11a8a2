//! JSON-lines rule files.
//!
//! The first line is `{"header": {...}}` carrying the schema, numeric bins
//! and mining parameters; each further line is one rule. Items are written
//! by attribute name and level label (or bin index for numeric attributes)
//! so a rule file can be applied to any dataset with the same columns.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{AssociationRule, MiningParams, RuleSet};
use crate::data::{AttributeKind, AttributeSchema, Dataset, Item, Itemset};
use crate::discretize::Binnings;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleFileHeader {
    pub attributes: Vec<AttributeSchema>,
    pub bins: Binnings,
    pub records: usize,
    pub params: MiningParams,
    pub rule_count: usize,
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    header: RuleFileHeader,
}

#[derive(Debug, Serialize, Deserialize)]
struct ItemRepr {
    attribute: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bin: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RuleLine {
    antecedent: Vec<ItemRepr>,
    consequent: ItemRepr,
    support: f64,
    confidence: f64,
    support_count: usize,
    antecedent_count: usize,
}

fn item_repr(schema: &[AttributeSchema], item: &Item) -> ItemRepr {
    let attr = &schema[item.attribute as usize];
    match attr.kind {
        AttributeKind::Categorical => ItemRepr {
            attribute: attr.name.clone(),
            value: Some(attr.levels[item.level as usize].clone()),
            bin: None,
        },
        AttributeKind::Numeric => ItemRepr {
            attribute: attr.name.clone(),
            value: None,
            bin: Some(item.level),
        },
    }
}

pub fn write_rules<W: Write>(
    mut writer: W,
    dataset: &Dataset,
    binnings: &Binnings,
    params: &MiningParams,
    rules: &RuleSet,
) -> Result<()> {
    let header = HeaderLine {
        header: RuleFileHeader {
            attributes: dataset.schema().to_vec(),
            bins: binnings.clone(),
            records: dataset.n_records(),
            params: *params,
            rule_count: rules.len(),
        },
    };
    serde_json::to_writer(&mut writer, &header)?;
    writer.write_all(b"\n")?;
    let schema = dataset.schema();
    for rule in rules.rules() {
        let line = RuleLine {
            antecedent: rule.antecedent.iter().map(|i| item_repr(schema, i)).collect(),
            consequent: item_repr(schema, &rule.consequent),
            support: rule.support,
            confidence: rule.confidence,
            support_count: rule.support_count,
            antecedent_count: rule.antecedent_count,
        };
        serde_json::to_writer(&mut writer, &line)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a rule file and resolves its items against `dataset`.
///
/// The file's columns must match the dataset's names and kinds in order.
/// Category labels unknown to the dataset are appended to its levels.
pub fn read_rules<R: BufRead>(
    reader: R,
    dataset: &mut Dataset,
) -> Result<(RuleFileHeader, RuleSet)> {
    let mut lines = reader.lines();
    let first = match lines.next() {
        Some(line) => line?,
        None => return Err(Error::SchemaMismatch("rule file is empty".into())),
    };
    let HeaderLine { header } = serde_json::from_str(&first)
        .map_err(|e| Error::SchemaMismatch(format!("rule file header: {e}")))?;
    check_schema(&header.attributes, dataset.schema())?;

    let mut rules = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: RuleLine = serde_json::from_str(&line)
            .map_err(|e| Error::SchemaMismatch(format!("rule line {}: {e}", n + 2)))?;
        let mut antecedent = Vec::with_capacity(parsed.antecedent.len());
        for repr in &parsed.antecedent {
            antecedent.push(resolve_item(repr, dataset, &header.bins)?);
        }
        let consequent = resolve_item(&parsed.consequent, dataset, &header.bins)?;
        let antecedent = Itemset::new(antecedent)?;
        if antecedent.level_of(consequent.attribute).is_some() {
            return Err(Error::SchemaMismatch(format!(
                "rule line {}: consequent attribute appears in antecedent",
                n + 2
            )));
        }
        rules.push(AssociationRule {
            antecedent,
            consequent,
            support_count: parsed.support_count,
            antecedent_count: parsed.antecedent_count,
            support: parsed.support,
            confidence: parsed.confidence,
        });
    }
    Ok((header, RuleSet::new(rules)))
}

fn check_schema(file: &[AttributeSchema], data: &[AttributeSchema]) -> Result<()> {
    let describe = |s: &[AttributeSchema]| {
        s.iter()
            .map(|a| a.name.as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    if file.len() != data.len()
        || file
            .iter()
            .zip(data)
            .any(|(f, d)| f.name != d.name || f.kind != d.kind)
    {
        return Err(Error::SchemaMismatch(format!(
            "rules mined on [{}], dataset has [{}]",
            describe(file),
            describe(data)
        )));
    }
    Ok(())
}

fn resolve_item(repr: &ItemRepr, dataset: &mut Dataset, bins: &Binnings) -> Result<Item> {
    let col = dataset
        .attribute_index(&repr.attribute)
        .ok_or_else(|| Error::SchemaMismatch(format!("unknown attribute `{}`", repr.attribute)))?;
    match (dataset.attribute(col).kind, &repr.value, repr.bin) {
        (AttributeKind::Categorical, Some(label), None) => {
            Ok(Item::new(col, dataset.ensure_level(col, label)))
        }
        (AttributeKind::Numeric, None, Some(bin)) => {
            let n_bins = bins.get(col).map(|b| b.len()).unwrap_or(0);
            if (bin as usize) < n_bins {
                Ok(Item::new(col, bin))
            } else {
                Err(Error::SchemaMismatch(format!(
                    "bin {bin} out of range for `{}`",
                    repr.attribute
                )))
            }
        }
        _ => Err(Error::SchemaMismatch(format!(
            "item for `{}` does not match the attribute kind",
            repr.attribute
        ))),
    }
}
