//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use hmit_core::data::{load_csv, read_csv, ClassColumn, LoadOptions};
use hmit_core::mining::support_count;
use hmit_core::{
    fire_rules, AssociationRule, AttributeKind, Cell, Dataset, FrequentItemset, HmitImputer, HmitModel,
    Imputation, Item, Itemset, Provenance, Source,
};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn car() -> Dataset {
    let options = LoadOptions {
        class_column: ClassColumn::Last,
        ..Default::default()
    };
    load_csv(data_dir().join("car.csv"), &options).expect("data/car.csv")
}

/// A random transaction database over `levels.len()` attributes; each record
/// leaves an attribute out with probability `gap`.
pub fn random_db<R: Rng>(rng: &mut R, max_items: usize, max_records: usize, gap: f64) -> (Vec<u32>, Vec<Itemset>) {
    let mut levels = Vec::new();
    let mut total = 0;
    loop {
        let l = rng.random_range(1..=3u32);
        if total + l as usize > max_items || levels.len() == 6 {
            break;
        }
        total += l as usize;
        levels.push(l);
    }
    if levels.is_empty() {
        levels.push(1);
    }
    let n = rng.random_range(1..=max_records);
    let db = (0..n)
        .map(|_| {
            let mut items = Vec::new();
            for (a, &l) in levels.iter().enumerate() {
                if !rng.random_bool(gap) {
                    items.push(Item::new(a, rng.random_range(0..l)));
                }
            }
            Itemset::new(items).unwrap()
        })
        .collect();
    (levels, db)
}

/// Every itemset with at most one item per attribute, by enumeration.
pub fn all_itemsets(levels: &[u32]) -> Vec<Itemset> {
    let mut out = vec![Vec::new()];
    for (a, &l) in levels.iter().enumerate() {
        let mut next = Vec::new();
        for partial in &out {
            next.push(partial.clone());
            for level in 0..l {
                let mut with = partial.clone();
                with.push(Item::new(a, level));
                next.push(with);
            }
        }
        out = next;
    }
    out.into_iter()
        .filter(|v| !v.is_empty())
        .map(|v| Itemset::new(v).unwrap())
        .collect()
}

fn count(itemset: &Itemset, db: &[Itemset]) -> usize {
    db.iter()
        .filter(|r| itemset.iter().all(|i| r.iter().any(|j| j == i)))
        .count()
}

/// Frequent itemsets at an integer percent threshold: `count * 100 >= pct * n`.
pub fn brute_frequent(levels: &[u32], db: &[Itemset], support_pct: usize) -> BTreeMap<Itemset, usize> {
    let n = db.len();
    all_itemsets(levels)
        .into_iter()
        .filter_map(|s| {
            let c = count(&s, db);
            (c > 0 && c * 100 >= support_pct * n).then_some((s, c))
        })
        .collect()
}

/// `(antecedent, consequent) -> (count, antecedent count)` for every rule
/// meeting `count * 100 >= conf_pct * antecedent_count`.
pub fn brute_rules(
    frequent: &BTreeMap<Itemset, usize>,
    db: &[Itemset],
    conf_pct: usize,
) -> BTreeMap<(Itemset, Item), (usize, usize)> {
    let mut out = BTreeMap::new();
    for (set, &c) in frequent.iter().filter(|(s, _)| s.len() >= 2) {
        for item in set.iter() {
            let antecedent = Itemset::new(set.iter().filter(|i| *i != item).copied().collect()).unwrap();
            let a = count(&antecedent, db);
            if c * 100 >= conf_pct * a {
                out.insert((antecedent, *item), (c, a));
            }
        }
    }
    out
}

/// Downward closure and threshold checks over one mining result.
pub fn check_mining_invariants(
    db: &[Itemset],
    min_count: usize,
    min_confidence: f64,
    frequents: &[FrequentItemset],
    rules: &[AssociationRule],
) -> Result<(), String> {
    let by_set: BTreeMap<&Itemset, usize> = frequents.iter().map(|f| (&f.itemset, f.support_count)).collect();
    for f in frequents {
        let real = support_count(&f.itemset, db);
        if real != f.support_count {
            return Err(format!("{} counted {} but occurs {real} times", f.itemset, f.support_count));
        }
        if f.support_count < min_count {
            return Err(format!("{} below min count {min_count}", f.itemset));
        }
        if f.itemset.len() >= 2 {
            for item in f.itemset.iter() {
                let sub = f.itemset.without(item);
                match by_set.get(&sub) {
                    Some(&c) if c >= f.support_count => {}
                    _ => return Err(format!("subset {sub} of frequent {} missing", f.itemset)),
                }
            }
        }
    }
    for r in rules {
        let mut whole: Vec<Item> = r.antecedent.iter().copied().collect();
        whole.push(r.consequent);
        let whole = Itemset::new(whole).map_err(|e| e.to_string())?;
        if by_set.get(&whole) != Some(&r.support_count) {
            return Err(format!("rule {} -> {} has no matching frequent itemset", r.antecedent, r.consequent));
        }
        if support_count(&r.antecedent, db) != r.antecedent_count {
            return Err(format!("rule {} antecedent count wrong", r.antecedent));
        }
        if (r.support_count as f64) < min_confidence * r.antecedent_count as f64 - 1e-9 {
            return Err(format!("rule {} -> {} below confidence", r.antecedent, r.consequent));
        }
        if r.support_count < min_count {
            return Err(format!("rule {} -> {} below support", r.antecedent, r.consequent));
        }
    }
    Ok(())
}

/// Random mixed dataset: numeric columns drawn from few values so distance
/// ties are common, categorical columns with 2 or 3 levels, some cells missing.
pub fn random_mixed<R: Rng>(rng: &mut R, max_records: usize, gap: f64) -> Dataset {
    let n_cols = rng.random_range(2..=5);
    let numeric: Vec<bool> = (0..n_cols).map(|_| rng.random_bool(0.4)).collect();
    let n = rng.random_range(2..=max_records);
    let mut text = (0..n_cols).map(|c| format!("c{c}")).collect::<Vec<_>>().join(",");
    text.push('\n');
    for _ in 0..n {
        let row: Vec<String> = numeric
            .iter()
            .map(|&num| {
                if rng.random_bool(gap) {
                    "?".to_string()
                } else if num {
                    format!("{}", rng.random_range(0..6) as f64 * 1.5)
                } else {
                    format!("L{}", rng.random_range(0..3))
                }
            })
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let mut options = LoadOptions::default();
    for (c, &num) in numeric.iter().enumerate() {
        let kind = if num { AttributeKind::Numeric } else { AttributeKind::Categorical };
        options.kinds.insert(format!("c{c}"), kind);
    }
    read_csv(text.as_bytes(), &options).unwrap()
}

/// HEOM written out per term.
pub fn heom(ds: &Dataset, a: &[Cell], b: &[Cell]) -> f64 {
    let mut total = 0.0;
    for col in 0..ds.n_attributes() {
        let term = match (a[col], b[col]) {
            (Cell::Missing, _) | (_, Cell::Missing) => 1.0,
            (Cell::Number(x), Cell::Number(y)) => {
                let values = ds.numeric_values(col);
                let range = values.iter().cloned().fold(f64::MIN, f64::max)
                    - values.iter().cloned().fold(f64::MAX, f64::min);
                if range > 0.0 {
                    (x - y).abs() / range
                } else if x == y {
                    0.0
                } else {
                    1.0
                }
            }
            (x, y) => {
                if x == y {
                    0.0
                } else {
                    1.0
                }
            }
        };
        total += term * term;
    }
    total.sqrt()
}

/// kNN by sorting every candidate: returns neighbor ids and the imputed value.
pub fn knn_oracle(ds: &Dataset, row: usize, target: usize, k: usize) -> (Vec<usize>, Option<Cell>) {
    let query = &ds.record(row).cells;
    let mut candidates: Vec<(f64, usize)> = ds
        .records()
        .iter()
        .filter(|r| r.id != row && r.cells[target].is_present())
        .map(|r| (heom(ds, query, &r.cells), r.id))
        .collect();
    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    candidates.truncate(k);
    let ids: Vec<usize> = candidates.iter().map(|c| c.1).collect();
    if ids.is_empty() {
        return (ids, None);
    }
    let value = if ds.attribute(target).is_numeric() {
        let mut sum = 0.0;
        for &id in &ids {
            sum += ds.cell(id, target).number().unwrap();
        }
        Cell::Number(sum / ids.len() as f64)
    } else {
        let n_levels = ds.attribute(target).levels.len();
        let mut votes = vec![0; n_levels];
        for &id in &ids {
            votes[ds.cell(id, target).level().unwrap() as usize] += 1;
        }
        let best = *votes.iter().max().unwrap();
        Cell::Level(votes.iter().position(|&v| v == best).unwrap() as u32)
    };
    (ids, Some(value))
}

/// Zero missing cells remain and every recorded branch is reproduced by
/// firing the rules again.
pub fn check_totality_and_branches(
    masked: &Dataset,
    model: &HmitModel,
    imputer: &HmitImputer<'_>,
    out: &Imputation,
) -> Result<(), String> {
    if out.completed.missing_count() != 0 {
        return Err(format!("{} cells still missing", out.completed.missing_count()));
    }
    if out.cells.len() != masked.missing_count() {
        return Err(format!("{} imputations for {} missing cells", out.cells.len(), masked.missing_count()));
    }
    for cell in &out.cells {
        let fired = fire_rules(&imputer.known_items(cell.row), cell.column, &model.rules);
        match (&cell.source, &cell.provenance) {
            (Source::Rules, Provenance::Rules(ids)) => {
                if fired.is_empty() || &fired.ids() != ids {
                    return Err(format!("cell ({}, {}) rule provenance not reproduced", cell.row, cell.column));
                }
            }
            (Source::Knn, Provenance::Neighbors { .. }) => {
                if !fired.is_empty() {
                    return Err(format!("cell ({}, {}) went to knn with {} fired rules", cell.row, cell.column, fired.len()));
                }
            }
            _ => return Err(format!("cell ({}, {}) source and provenance disagree", cell.row, cell.column)),
        }
    }
    Ok(())
}
