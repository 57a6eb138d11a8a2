use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Cell, Dataset, Record};
use crate::discretize::Binnings;
use crate::error::{Error, Result};

/// An attribute=value assignment. For numeric attributes `level` is a bin index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Item {
    pub attribute: u32,
    pub level: u32,
}

impl Item {
    pub fn new(attribute: usize, level: u32) -> Self {
        Self {
            attribute: attribute as u32,
            level,
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.attribute, self.level)
    }
}

/// A set of items holding at most one item per attribute, kept sorted by
/// attribute so equality and ordering ignore insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Sorts and deduplicates `items`; fails when two distinct items share
    /// an attribute.
    pub fn new(mut items: Vec<Item>) -> Result<Self> {
        items.sort_unstable();
        items.dedup();
        if let Some(w) = items.windows(2).find(|w| w[0].attribute == w[1].attribute) {
            return Err(Error::ConflictingItems(w[0].attribute));
        }
        Ok(Self(items))
    }

    /// Caller guarantees the items are sorted with strictly increasing attributes.
    pub(crate) fn from_sorted(items: Vec<Item>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0].attribute < w[1].attribute));
        Self(items)
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Item> {
        self.0.iter()
    }

    pub fn contains(&self, item: &Item) -> bool {
        self.0.binary_search(item).is_ok()
    }

    pub fn level_of(&self, attribute: u32) -> Option<u32> {
        self.0
            .binary_search_by_key(&attribute, |i| i.attribute)
            .ok()
            .map(|i| self.0[i].level)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut rest = other.0.iter();
        'outer: for item in &self.0 {
            for candidate in rest.by_ref() {
                match candidate.attribute.cmp(&item.attribute) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal if candidate.level == item.level => {
                        continue 'outer
                    }
                    _ => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn without(&self, item: &Item) -> Itemset {
        Itemset(self.0.iter().filter(|i| *i != item).copied().collect())
    }

    pub fn without_attribute(&self, attribute: u32) -> Itemset {
        Itemset(
            self.0
                .iter()
                .filter(|i| i.attribute != attribute)
                .copied()
                .collect(),
        )
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&Item) -> bool) {
        self.0.retain(|i| keep(i));
    }

    pub fn into_items(self) -> Vec<Item> {
        self.0
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

/// One item per present cell; numeric values are mapped to their bin.
/// Missing cells, and numeric cells of attributes without bins, contribute
/// nothing.
pub fn itemize(record: &Record, binnings: &Binnings) -> Itemset {
    let items = record
        .cells
        .iter()
        .enumerate()
        .filter_map(|(attr, cell)| match *cell {
            Cell::Missing => None,
            Cell::Level(level) => Some(Item::new(attr, level)),
            Cell::Number(v) => binnings
                .get(attr)
                .map(|bins| Item::new(attr, bins.bin_of(v) as u32)),
        })
        .collect();
    Itemset::from_sorted(items)
}

/// The record's known attribute values as an itemset; the set compared
/// against rule antecedents.
pub fn known_items(record: &Record, binnings: &Binnings) -> Itemset {
    itemize(record, binnings)
}

/// Itemizes every record, dropping items of attributes whose `evidence` flag
/// is false.
pub fn itemize_dataset(dataset: &Dataset, binnings: &Binnings, evidence: &[bool]) -> Vec<Itemset> {
    dataset
        .records()
        .iter()
        .map(|r| {
            let mut set = itemize(r, binnings);
            set.retain(|i| evidence[i.attribute as usize]);
            set
        })
        .collect()
}
