use std::cmp::Ordering;
use std::collections::HashMap;

use super::{canonical_cmp, AssociationRule, FrequentItemset, MiningParams};
use crate::data::Itemset;

/// Emits `S \ {b} → b` for every frequent `S` with `|S| >= 2` and every
/// `b ∈ S` whose confidence reaches the threshold.
///
/// Rules are ordered by consequent attribute, then confidence descending,
/// then antecedent (canonical order), then consequent level.
pub fn generate_rules(frequents: &[FrequentItemset], params: &MiningParams) -> Vec<AssociationRule> {
    let counts: HashMap<&Itemset, usize> = frequents
        .iter()
        .map(|f| (&f.itemset, f.support_count))
        .collect();

    let mut rules = Vec::new();
    for frequent in frequents.iter().filter(|f| f.itemset.len() >= 2) {
        for consequent in frequent.itemset.iter() {
            let antecedent = frequent.itemset.without(consequent);
            let Some(&antecedent_count) = counts.get(&antecedent) else {
                continue;
            };
            if !params.meets_confidence(frequent.support_count, antecedent_count) {
                continue;
            }
            rules.push(AssociationRule {
                antecedent,
                consequent: *consequent,
                support_count: frequent.support_count,
                antecedent_count,
                support: frequent.support,
                confidence: frequent.support_count as f64 / antecedent_count as f64,
            });
        }
    }
    rules.sort_by(rule_order);
    rules
}

fn rule_order(a: &AssociationRule, b: &AssociationRule) -> Ordering {
    a.consequent
        .attribute
        .cmp(&b.consequent.attribute)
        .then_with(|| b.cmp_confidence(a))
        .then_with(|| canonical_cmp(&a.antecedent, &b.antecedent))
        .then_with(|| a.consequent.level.cmp(&b.consequent.level))
}

/// Rules whose consequent belongs to `attribute`, in their original order.
pub fn rules_for_attribute(rules: &[AssociationRule], attribute: usize) -> Vec<&AssociationRule> {
    rules
        .iter()
        .filter(|r| r.consequent_attribute() == attribute)
        .collect()
}

/// A rule list indexed by consequent attribute.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<AssociationRule>,
    by_attribute: Vec<Vec<usize>>,
}

impl RuleSet {
    pub fn new(rules: Vec<AssociationRule>) -> Self {
        let mut by_attribute: Vec<Vec<usize>> = Vec::new();
        for (i, rule) in rules.iter().enumerate() {
            let attr = rule.consequent_attribute();
            if by_attribute.len() <= attr {
                by_attribute.resize(attr + 1, Vec::new());
            }
            by_attribute[attr].push(i);
        }
        Self {
            rules,
            by_attribute,
        }
    }

    pub fn rules(&self) -> &[AssociationRule] {
        &self.rules
    }

    pub fn get(&self, id: usize) -> &AssociationRule {
        &self.rules[id]
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// `(rule id, rule)` for every rule predicting `attribute`.
    pub fn for_attribute(&self, attribute: usize) -> impl Iterator<Item = (usize, &AssociationRule)> {
        self.by_attribute
            .get(attribute)
            .map(Vec::as_slice)
            .unwrap_or(&[])
            .iter()
            .map(move |&i| (i, &self.rules[i]))
    }
}
