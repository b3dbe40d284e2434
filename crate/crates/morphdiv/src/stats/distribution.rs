//! Conditional distributions of target outcomes per source pattern.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::patterns::{Outcome, PatternOccurrence, PatternType};

/// Outcome key of a conditional distribution. Target patterns always contain
/// a '~', so the sentinel forms cannot collide with them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeKey {
    Target(String),
    Null,
    Other,
}

impl OutcomeKey {
    pub fn as_report_str(&self) -> &str {
        match self {
            OutcomeKey::Target(t) => t,
            OutcomeKey::Null => "NULL",
            OutcomeKey::Other => "OTHER",
        }
    }
}

impl std::fmt::Display for OutcomeKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_report_str())
    }
}

/// Whether NULL/OTHER outcomes are part of the distribution. Metrics over
/// aligned target patterns use the one-to-one scope; four-way breakdowns
/// need all categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionScope {
    O2oOnly,
    AllCategories,
}

/// Counts of target outcomes per source pattern; merge is entrywise sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalPatternDistribution {
    pattern_type: PatternType,
    scope: DistributionScope,
    counts: BTreeMap<String, BTreeMap<OutcomeKey, u64>>,
    totals: BTreeMap<String, u64>,
    grand_total: u64,
}

impl ConditionalPatternDistribution {
    pub fn new(pattern_type: PatternType, scope: DistributionScope) -> Self {
        ConditionalPatternDistribution {
            pattern_type,
            scope,
            counts: BTreeMap::new(),
            totals: BTreeMap::new(),
            grand_total: 0,
        }
    }

    pub fn pattern_type(&self) -> PatternType {
        self.pattern_type
    }

    pub fn scope(&self) -> DistributionScope {
        self.scope
    }

    pub fn add_occurrence(&mut self, occ: &PatternOccurrence) -> Result<()> {
        if occ.pattern_type != self.pattern_type {
            return Err(Error::MixedPatternTypes(format!(
                "distribution holds {} patterns, got {}",
                self.pattern_type, occ.pattern_type
            )));
        }
        let key = match &occ.outcome {
            Outcome::Convergent(t) | Outcome::Divergent(t) => OutcomeKey::Target(t.clone()),
            Outcome::Null => {
                if self.scope == DistributionScope::O2oOnly {
                    return Ok(());
                }
                OutcomeKey::Null
            }
            Outcome::Other => {
                if self.scope == DistributionScope::O2oOnly {
                    return Ok(());
                }
                OutcomeKey::Other
            }
        };
        self.add_count(occ.source.clone(), key, 1);
        Ok(())
    }

    pub fn add_count(&mut self, pattern: String, outcome: OutcomeKey, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .counts
            .entry(pattern.clone())
            .or_default()
            .entry(outcome)
            .or_insert(0) += count;
        *self.totals.entry(pattern).or_insert(0) += count;
        self.grand_total += count;
    }

    /// Entrywise sum; pattern type and scope must match.
    pub fn merge(&mut self, other: &ConditionalPatternDistribution) -> Result<()> {
        if other.pattern_type != self.pattern_type {
            return Err(Error::MixedPatternTypes(
                "cannot merge distributions of different pattern types".to_string(),
            ));
        }
        if other.scope != self.scope {
            return Err(Error::invalid(
                "cannot merge distributions of different scopes",
            ));
        }
        for (p, outcomes) in &other.counts {
            for (k, &c) in outcomes {
                self.add_count(p.clone(), k.clone(), c);
            }
        }
        Ok(())
    }

    /// A copy containing only the one-to-one (target-pattern) outcomes.
    pub fn restrict_to_o2o(&self) -> ConditionalPatternDistribution {
        let mut out =
            ConditionalPatternDistribution::new(self.pattern_type, DistributionScope::O2oOnly);
        for (p, outcomes) in &self.counts {
            for (k, &c) in outcomes {
                if matches!(k, OutcomeKey::Target(_)) {
                    out.add_count(p.clone(), k.clone(), c);
                }
            }
        }
        out
    }

    pub fn patterns(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(|s| s.as_str())
    }

    pub fn num_patterns(&self) -> usize {
        self.counts.len()
    }

    pub fn conditional(&self, pattern: &str) -> Option<&BTreeMap<OutcomeKey, u64>> {
        self.counts.get(pattern)
    }

    pub fn total(&self, pattern: &str) -> u64 {
        self.totals.get(pattern).copied().unwrap_or(0)
    }

    pub fn grand_total(&self) -> u64 {
        self.grand_total
    }

    pub fn is_empty(&self) -> bool {
        self.grand_total == 0
    }

    /// Checks the internal redundancy between counts and totals.
    pub fn check_consistency(&self) -> Result<()> {
        let mut grand = 0u64;
        for (p, outcomes) in &self.counts {
            let sum: u64 = outcomes.values().sum();
            if self.total(p) != sum {
                return Err(Error::stats(format!(
                    "total for {p} is {} but counts sum to {sum}",
                    self.total(p)
                )));
            }
            grand += sum;
        }
        if grand != self.grand_total {
            return Err(Error::stats(format!(
                "grand total is {} but counts sum to {grand}",
                self.grand_total
            )));
        }
        Ok(())
    }
}

/// Builds a distribution from an occurrence stream of one pattern type.
pub fn build_distribution<'a, I>(
    occurrences: I,
    scope: DistributionScope,
) -> Result<ConditionalPatternDistribution>
where
    I: IntoIterator<Item = &'a PatternOccurrence>,
{
    let mut iter = occurrences.into_iter().peekable();
    let pattern_type = match iter.peek() {
        Some(occ) => occ.pattern_type,
        None => {
            // Empty stream: an empty word-typed distribution.
            return Ok(ConditionalPatternDistribution::new(
                PatternType::Word,
                scope,
            ));
        }
    };
    let mut dist = ConditionalPatternDistribution::new(pattern_type, scope);
    for occ in iter {
        dist.add_occurrence(occ)?;
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(source: &str, outcome: Outcome) -> PatternOccurrence {
        PatternOccurrence {
            sentence_id: "s".to_string(),
            pattern_type: PatternType::Word,
            source: source.to_string(),
            outcome,
            tokens: (1, None),
        }
    }

    #[test]
    fn counts_reflect_occurrences() {
        let occs = vec![
            occ("p~P~leaf", Outcome::Convergent("p~P~leaf".to_string())),
            occ("p~P~leaf", Outcome::Divergent("q~Q~leaf".to_string())),
            occ("p~P~leaf", Outcome::Divergent("q~Q~leaf".to_string())),
        ];
        let d = build_distribution(&occs, DistributionScope::O2oOnly).unwrap();
        assert_eq!(d.total("p~P~leaf"), 3);
        assert_eq!(
            d.conditional("p~P~leaf").unwrap()[&OutcomeKey::Target("q~Q~leaf".to_string())],
            2
        );
        d.check_consistency().unwrap();
    }

    #[test]
    fn empty_stream_gives_empty_distribution() {
        let d = build_distribution(&[], DistributionScope::O2oOnly).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn scope_filters_null_other() {
        let occs = vec![
            occ("p~P~leaf", Outcome::Convergent("p~P~leaf".to_string())),
            occ("p~P~leaf", Outcome::Null),
            occ("p~P~leaf", Outcome::Other),
        ];
        let o2o = build_distribution(&occs, DistributionScope::O2oOnly).unwrap();
        assert_eq!(o2o.total("p~P~leaf"), 1);
        let all = build_distribution(&occs, DistributionScope::AllCategories).unwrap();
        assert_eq!(all.total("p~P~leaf"), 3);
        assert_eq!(all.conditional("p~P~leaf").unwrap()[&OutcomeKey::Null], 1);
        let restricted = all.restrict_to_o2o();
        assert_eq!(restricted.total("p~P~leaf"), 1);
    }

    #[test]
    fn mixed_pattern_types_rejected() {
        let mut d = ConditionalPatternDistribution::new(PatternType::Word, DistributionScope::O2oOnly);
        let arc_occ = PatternOccurrence {
            pattern_type: PatternType::Arc,
            ..occ("A~x~B", Outcome::Null)
        };
        assert!(d.add_occurrence(&arc_occ).is_err());
    }

    #[test]
    fn merge_is_entrywise_sum() {
        let occs1 = vec![occ("p~P~leaf", Outcome::Convergent("p~P~leaf".to_string()))];
        let occs2 = vec![
            occ("p~P~leaf", Outcome::Convergent("p~P~leaf".to_string())),
            occ("r~R~leaf", Outcome::Divergent("s~S~leaf".to_string())),
        ];
        let mut a = build_distribution(&occs1, DistributionScope::O2oOnly).unwrap();
        let b = build_distribution(&occs2, DistributionScope::O2oOnly).unwrap();
        a.merge(&b).unwrap();
        assert_eq!(a.total("p~P~leaf"), 2);
        assert_eq!(a.total("r~R~leaf"), 1);
        assert_eq!(a.grand_total(), 3);
        a.check_consistency().unwrap();
    }
}
