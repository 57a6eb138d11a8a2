use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::bitset::TidSet;
use super::{FrequentItemset, MiningParams};
use crate::data::{Item, Itemset};
use crate::error::{Error, Result};

/// Number of records whose itemset contains `itemset`.
pub fn support_count(itemset: &Itemset, db: &[Itemset]) -> usize {
    db.iter().filter(|r| itemset.is_subset_of(r)).count()
}

struct Level {
    itemsets: Vec<Vec<Item>>,
    tids: Vec<TidSet>,
}

/// Level-wise Apriori over a vertical layout: each frequent itemset carries
/// the bitset of records containing it, and a candidate's support is the
/// popcount of the AND of its two parents.
///
/// Output is ordered by length, then lexicographically by item.
pub fn mine_frequent(db: &[Itemset], params: &MiningParams) -> Result<Vec<FrequentItemset>> {
    if db.is_empty() {
        return Err(Error::EmptyDataset);
    }
    params.validate()?;
    let n = db.len();
    let min_count = params.min_support.min_count(n);
    let max_len = params.max_itemset_len();

    let mut singles: BTreeMap<Item, TidSet> = BTreeMap::new();
    for (tid, record) in db.iter().enumerate() {
        for item in record.iter() {
            singles
                .entry(*item)
                .or_insert_with(|| TidSet::new(n))
                .insert(tid);
        }
    }
    let mut level = Level {
        itemsets: Vec::new(),
        tids: Vec::new(),
    };
    for (item, tids) in singles {
        if tids.count() >= min_count {
            level.itemsets.push(vec![item]);
            level.tids.push(tids);
        }
    }

    let mut out = Vec::new();
    let mut k = 1;
    while !level.itemsets.is_empty() {
        for (items, tids) in level.itemsets.iter().zip(&level.tids) {
            let count = tids.count();
            out.push(FrequentItemset {
                itemset: Itemset::from_sorted(items.clone()),
                support_count: count,
                support: count as f64 / n as f64,
            });
        }
        if k >= max_len {
            break;
        }
        level = next_level(&level, min_count);
        k += 1;
    }
    Ok(out)
}

fn next_level(prev: &Level, min_count: usize) -> Level {
    let known: HashSet<&[Item]> = prev.itemsets.iter().map(Vec::as_slice).collect();
    let mut pairs = Vec::new();
    let len = prev.itemsets.len();
    let mut block_start = 0;
    while block_start < len {
        let prefix = &prev.itemsets[block_start][..prev.itemsets[block_start].len() - 1];
        let mut block_end = block_start + 1;
        while block_end < len && prev.itemsets[block_end].starts_with(prefix) {
            block_end += 1;
        }
        for i in block_start..block_end {
            let last_i = *prev.itemsets[i].last().unwrap();
            for j in (i + 1)..block_end {
                let last_j = *prev.itemsets[j].last().unwrap();
                if last_i.attribute == last_j.attribute {
                    continue;
                }
                let mut candidate = prev.itemsets[i].clone();
                candidate.push(last_j);
                if all_subsets_known(&candidate, &known) {
                    pairs.push((i, j, candidate));
                }
            }
        }
        block_start = block_end;
    }

    let counted: Vec<(Vec<Item>, TidSet)> = pairs
        .into_par_iter()
        .filter_map(|(i, j, candidate)| {
            let tids = prev.tids[i].and(&prev.tids[j]);
            (tids.count() >= min_count).then_some((candidate, tids))
        })
        .collect();
    let (itemsets, tids) = counted.into_iter().unzip();
    Level { itemsets, tids }
}

/// Checks the subsets that drop one of the shared-prefix items; the two
/// parents cover the remaining two.
fn all_subsets_known(candidate: &[Item], known: &HashSet<&[Item]>) -> bool {
    if candidate.len() <= 2 {
        return true;
    }
    let mut buf = Vec::with_capacity(candidate.len() - 1);
    (0..candidate.len() - 2).all(|skip| {
        buf.clear();
        buf.extend(
            candidate
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, item)| *item),
        );
        known.contains(buf.as_slice())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mining::SupportThreshold;

    fn set(items: &[(u32, u32)]) -> Itemset {
        Itemset::new(
            items
                .iter()
                .map(|&(attribute, level)| Item { attribute, level })
                .collect(),
        )
        .unwrap()
    }

    /// a, b, c as three binary attributes set to level 1.
    pub(crate) fn abc_db() -> Vec<Itemset> {
        vec![
            set(&[(0, 1), (1, 1), (2, 1)]),
            set(&[(0, 1), (1, 1)]),
            set(&[(0, 1), (2, 1)]),
            set(&[(1, 1), (2, 1)]),
        ]
    }

    #[test]
    fn support_count_examples() {
        let db = vec![set(&[(0, 1), (1, 1)]), set(&[(0, 1)]), set(&[(1, 1)])];
        assert_eq!(support_count(&Itemset::empty(), &db), 3);
        assert_eq!(support_count(&set(&[(0, 1)]), &db), 2);
        // an itemset with two levels of one attribute cannot be built, so its
        // support is zero by construction
        assert!(Itemset::new(vec![
            Item { attribute: 0, level: 1 },
            Item { attribute: 0, level: 2 },
        ])
        .is_err());
    }

    #[test]
    fn four_record_example() {
        let found = mine_frequent(&abc_db(), &MiningParams::new(0.5, 0.6).unwrap()).unwrap();
        let got: Vec<(Itemset, usize)> = found
            .iter()
            .map(|f| (f.itemset.clone(), f.support_count))
            .collect();
        assert_eq!(
            got,
            vec![
                (set(&[(0, 1)]), 3),
                (set(&[(1, 1)]), 3),
                (set(&[(2, 1)]), 3),
                (set(&[(0, 1), (1, 1)]), 2),
                (set(&[(0, 1), (2, 1)]), 2),
                (set(&[(1, 1), (2, 1)]), 2),
            ]
        );
        assert!(found.iter().all(|f| f.support == f.support_count as f64 / 4.0));
    }

    #[test]
    fn full_support_finds_nothing() {
        let found = mine_frequent(&abc_db(), &MiningParams::new(1.0, 0.6).unwrap()).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn floor_support_finds_every_occurring_itemset() {
        let params = MiningParams {
            min_support: SupportThreshold::Count(1),
            ..Default::default()
        };
        let found = mine_frequent(&abc_db(), &params).unwrap();
        // all 7 non-empty subsets of {a,b,c} occur in record 0
        assert_eq!(found.len(), 7);
        assert_eq!(found.last().unwrap().support_count, 1);
    }

    #[test]
    fn antecedent_cap_limits_length() {
        let params = MiningParams::new(0.25, 0.5)
            .unwrap()
            .with_max_antecedent_len(Some(1));
        let found = mine_frequent(&abc_db(), &params).unwrap();
        assert!(found.iter().all(|f| f.itemset.len() <= 2));
        assert_eq!(found.len(), 6);
    }

    #[test]
    fn empty_db_is_an_error() {
        assert!(matches!(
            mine_frequent(&[], &MiningParams::default()),
            Err(Error::EmptyDataset)
        ));
    }
}
